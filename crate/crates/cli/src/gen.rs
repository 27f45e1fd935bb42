use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use tempo_ncg::harness::{fixtures, random_host, seeded_rng, Instance, RandomHostParams};
use tempo_ncg::{
    dense_cycle_instance, extend_with_nonterminal, extend_with_terminal, graph_product,
    hypercube_equilibrium, scale_with_nonterminals, two_terminal_ne, HostGraph, StrategyProfile,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    DenseCycle,
    Hypercube,
    TwoTerminal,
    Scale,
    Product,
    ExtendTerminal,
    ExtendNonterminal,
    Fig4,
    Fig5Left,
    Fig5Right,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Dense cycle parameter (even, at least 2).
    #[arg(long)]
    x: Option<usize>,
    /// Hypercube dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Non-terminal copies per node for `scale`.
    #[arg(long)]
    c: Option<usize>,
    /// Input instance with a profile (scale, extend-*), or a host (two-terminal).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Factors for `product`.
    #[arg(long)]
    left: Option<PathBuf>,
    #[arg(long)]
    right: Option<PathBuf>,
    /// Random host size for `two-terminal` without --input.
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long)]
    max_label: Option<u32>,
    #[arg(long, default_value_t = 1)]
    labels_per_edge: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.with_context(|| format!("{family} needs --{flag}"))
}

fn with_profile(
    path: &Option<PathBuf>,
    flag: &str,
    family: &str,
) -> Result<(HostGraph, StrategyProfile)> {
    let path = path
        .as_ref()
        .with_context(|| format!("{family} needs --{flag}"))?;
    let inst = crate::load(path)?;
    let s = inst
        .profile
        .with_context(|| format!("{} has no profile", path.display()))?;
    Ok((inst.host, s))
}

pub fn generate(a: &GenArgs) -> Result<Instance> {
    let (name, host, s) = match a.family {
        Family::Fig4 => return Ok(fixtures::fig4()),
        Family::Fig5Left => return Ok(fixtures::fig5_left()),
        Family::Fig5Right => return Ok(fixtures::fig5_right()),
        Family::DenseCycle => {
            let x = need(a.x, "x", "dense-cycle")?;
            let d = dense_cycle_instance(x)?;
            (format!("dense-cycle-x{x}"), d.host, d.profile)
        }
        Family::Hypercube => {
            let d = need(a.d, "d", "hypercube")?;
            let (h, s) = hypercube_equilibrium(d)?;
            (format!("hypercube-d{d}"), h, s)
        }
        Family::Scale => {
            let c = need(a.c, "c", "scale")?;
            let (h, s) = match (&a.input, a.d) {
                (Some(_), _) => with_profile(&a.input, "input", "scale")?,
                (None, Some(d)) => hypercube_equilibrium(d)?,
                (None, None) => bail!("scale needs --input or --d"),
            };
            let (h, s) = scale_with_nonterminals(&h, &s, c)?;
            (format!("scale-c{c}"), h, s)
        }
        Family::Product => {
            let (h1, s1) = with_profile(&a.left, "left", "product")?;
            let (h2, s2) = with_profile(&a.right, "right", "product")?;
            let (h, s) = graph_product(&h1, &s1, &h2, &s2)?;
            ("product".into(), h, s)
        }
        Family::ExtendTerminal => {
            let (h, s) = with_profile(&a.input, "input", "extend-terminal")?;
            let (h, s, _) = extend_with_terminal(&h, &s)?;
            ("extend-terminal".into(), h, s)
        }
        Family::ExtendNonterminal => {
            let (h, s) = with_profile(&a.input, "input", "extend-nonterminal")?;
            let (h, s) = extend_with_nonterminal(&h, &s)?;
            ("extend-nonterminal".into(), h, s)
        }
        Family::TwoTerminal => {
            let (h, name) = match &a.input {
                Some(path) => {
                    let inst = crate::load(path)?;
                    let name = format!("two-terminal-{}", inst.name());
                    (inst.host, name)
                }
                None => {
                    let p = RandomHostParams {
                        n: a.n,
                        k: 2,
                        max_label: a.max_label.unwrap_or(a.n as u32),
                        max_labels_per_edge: a.labels_per_edge,
                    };
                    let h = random_host(p, &mut seeded_rng(a.seed))?;
                    (h, format!("two-terminal-n{}-seed{}", a.n, a.seed))
                }
            };
            let s = two_terminal_ne(&h)?;
            (name, h, s)
        }
    };
    Ok(Instance::new(name, host, Some(s)))
}
