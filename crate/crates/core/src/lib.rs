//! Priority-aware random order values.
//!
//! Players join a coalition one at a time; a player's value is its expected
//! marginal contribution over a distribution on arrival orders. This crate
//! builds that distribution from two kinds of priority:
//!
//! * hard precedence, a partial order given as a DAG ([`Poset`]): only
//!   linear extensions get positive probability;
//! * soft weights `λ` ([`Weights`]): among players that may arrive last, a
//!   player is picked with probability proportional to its weight.
//!
//! Equal weights recover the uniform distribution over linear extensions and
//! layered DAGs recover the backward weighted scheme.
//!
//! Values can be computed exactly by enumeration ([`valuation::exact_value`])
//! or estimated from samples of the adjacent-swap Metropolis–Hastings chain
//! ([`sampler::mh_sample`] + [`valuation::rov_estimate`]). The [`sweep`]
//! module varies one player's weight on a grid and builds the limiting
//! hard-order references for extreme weights.
//!
//! The `examples/` directory has one runnable program per capability and
//! the `pasv` binary exposes the same functionality from the shell.

pub mod cli;
pub mod error;
pub mod formats;
pub mod order_model;
pub mod poset;
pub mod rng;
pub mod sampler;
pub mod sweep;
pub mod utility;
pub mod valuation;

pub use error::{Error, Result};
pub use order_model::{
    choice_factor, exact_pasv_distribution, pasv_log_weight, psv_distribution, wsv_probability,
    OrderDistribution, Weights,
};
pub use poset::{
    limit_poset_refine, OrderedPartition, Permutation, PlayerSet, Poset, DEFAULT_EXTENSION_CAP,
};
pub use sampler::{mh_sample, ChainStats, IndexSampler, MhConfig};
pub use utility::UtilityFn;
pub use valuation::{exact_value, rov_estimate, ValueReport};
