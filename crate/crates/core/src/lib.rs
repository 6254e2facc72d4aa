//! Exact simulation and resource-cost analysis of GHZ-based distributed
//! phase estimation on star networks.
//!
//! The crate has three layers. [`quantum`] holds dense state-vector and
//! density-matrix simulators small enough to be exact. On top of that,
//! [`ghz`] runs the entanglement-distribution protocol and [`purification`]
//! models recurrence-style pair purification. The analysis layer
//! ([`estimation`], [`cost`], [`montecarlo`]) turns those states into
//! success probabilities, repetition counts, communication costs, and
//! sampled precision estimates.

pub mod cost;
pub mod error;
pub mod estimation;
pub mod ghz;
pub mod montecarlo;
pub mod purification;
pub mod quantum;

pub use error::{Error, Result};
pub use quantum::{DensityMatrix, Outcome, StateVector};
