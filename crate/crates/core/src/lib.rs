//! Simulation and exact analysis of packet forwarding in partially-connected
//! wireless networks.
//!
//! The crate is organised bottom-up:
//!
//! - [`distributions`]: finite discrete laws, first-order stochastic dominance
//!   and stochastic monotonicity of conditional families.
//! - [`geo`]: random geometric graphs on torus, disk and rectangle regions.
//! - [`connectivity`]: Monte Carlo estimators for connectivity probability,
//!   reachability and mean shortest path, plus regime classification.
//! - [`forwarding`]: slotted-time simulation of source and intermediate
//!   forwarding, including coupled sample paths.
//! - [`markov`]: slot-level absorbing Markov chains giving exact delivery-time
//!   means, CDFs and position marginals, and the non-monotonicity
//!   counterexamples.
//! - [`hops`]: hop-count versus Euclidean-distance studies on a disk.

pub mod connectivity;
pub mod distributions;
mod error;
pub mod forwarding;
pub mod geo;
pub mod hops;
pub mod markov;
pub mod seed;
pub(crate) mod text;

pub use error::{Error, Result};
