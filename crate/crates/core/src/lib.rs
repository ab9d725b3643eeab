//! Inference on contaminated stochastic order.
//!
//! Two distributions `F` and `G` are ordered up to contamination `π` when
//! both are mixtures `(1−π)·main + π·rest` whose main parts are
//! stochastically ordered. The smallest such `π` is `π(F, G) = sup(G − F)`,
//! the one-sided Kolmogorov–Smirnov functional. This crate computes that
//! index and its relatives for analytic and empirical laws, tests for and
//! against small contamination levels, builds confidence bounds and
//! calibrates everything by Monte Carlo.

pub mod cli;
pub mod contamination;
pub mod dist_model;
pub mod error;
pub mod inference;
pub mod limit_law;
pub mod normal;
pub mod quadrature;
pub mod rng;
pub mod simulation;

pub use dist_model::{make_least_favorable, pushforward, Distribution, LeastFavorable, MonotoneMap, Sample};
pub use error::{Error, Result};
pub use rng::SeededGenerator;
