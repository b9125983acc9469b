//! Monte Carlo of the branching random walk: level-crossing counts, pgfs,
//! winding counts, nested models and single-chain functionals.
//!
//! Replicates run in parallel; every replicate draws from streams keyed by
//! `(seed, replicate)`, so results do not depend on the number of workers.

pub mod chain;
pub mod counts;
pub mod engine;
pub mod estimate;
pub mod nested;
pub mod tree;
pub mod winding;

pub use chain::{chain_functionals, ChainEstimate, ChainMode};
pub use counts::{
    count_replicate, estimate_count_means, estimate_pgf, estimate_pgf_with,
    left_excursion_fraction, CountOutcome, CountSign, MeanBounds, SimConfig,
};
pub use estimate::{McEstimate, RepValue};
pub use nested::{nested_sweep, SweepResult};
pub use tree::{level_counts, simulate_tree, winding_counts, LevelCounts, ParticleRecord, TreeLog, WindingCounts};
pub use winding::{estimate_windings, WindingEstimates};
