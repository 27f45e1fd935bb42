//! The small hand-drawn instances, embedded in the binary.

use super::Instance;

const FIG4: &str = include_str!("../../fixtures/fig4.json");
const FIG5_LEFT: &str = include_str!("../../fixtures/fig5_left.json");
const FIG5_RIGHT: &str = include_str!("../../fixtures/fig5_right.json");

/// A minimal terminal spanner on four nodes whose ownership (drawn in the
/// file) is a greedy equilibrium, while no ownership makes it a Nash equilibrium.
pub fn fig4() -> Instance {
    Instance::from_json(FIG4).expect("valid fixture")
}

/// Global Nash equilibrium whose realized graph supports no local one.
pub fn fig5_left() -> Instance {
    Instance::from_json(FIG5_LEFT).expect("valid fixture")
}

/// Local Nash equilibrium whose realized graph supports no global one.
pub fn fig5_right() -> Instance {
    Instance::from_json(FIG5_RIGHT).expect("valid fixture")
}

/// Fixture by name: "fig4", "fig5-left" or "fig5-right".
pub fn by_name(name: &str) -> Option<Instance> {
    match name {
        "fig4" => Some(fig4()),
        "fig5-left" => Some(fig5_left()),
        "fig5-right" => Some(fig5_right()),
        _ => None,
    }
}
