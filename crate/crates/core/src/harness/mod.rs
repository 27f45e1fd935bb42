//! Instance files, fixtures, ownership sweeps, PoA records and random hosts.

pub mod fixtures;
mod format;
mod poa;
mod random;
mod sweep;

pub use format::{HostSpec, Instance, InstanceFile, Meta, ProfileSpec, FORMAT_VERSION};
pub use poa::{optimum, poa_record, Optimum, PoARecord, POA_COLUMNS};
pub use random::{random_host, random_profile, seeded_rng, RandomHostParams};
pub use sweep::{find_equilibrium, sweep_ownership, SweepConfig, SweepReport};
