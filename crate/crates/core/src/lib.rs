//! Desk-scale laboratory for monotone circuit experiments around the planted
//! clique problem: the two test distributions, clique-indicator circuits with
//! sorting-network thresholds, an explicit distinguisher, robust (clique)
//! sunflower checkers, the DNF approximation pipeline, and a stochastic
//! process comparison checker.
//!
//! Everything is deterministic given a [`seed::SeedSpec`]: per-trial
//! generators are derived from `(master_seed, stream_id, trial_index)`, so
//! results are reproducible regardless of thread count.

pub mod approx;
pub mod bitset;
pub mod circuit;
pub mod combinat;
pub mod distinguisher;
pub mod error;
pub mod graph;
pub mod process;
pub mod seed;
pub mod stats;
pub mod sunflower;

pub use error::{Error, Result};
pub use seed::SeedSpec;

/// Exact rationals appear throughout the public API (coverage probabilities,
/// expected suprema); re-exported for downstream crates.
pub use num_rational::BigRational;
