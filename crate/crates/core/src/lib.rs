//! Simulation and security analysis of a relativistic bit-commitment
//! protocol built on BB84 measurement records.
//!
//! The library is organised in layers:
//!
//! - [`qcore`]: small-dimension complex linear algebra, POVM measurement,
//!   and teleportation.
//! - [`discrimination`]: the guessing game a committer must win to cheat,
//!   its optimal strategy, and analytic security bounds.
//! - [`spacetime`]: Minkowski causal structure and message routing between
//!   the protocol's stations.
//! - [`protocol`]: honest commitment runs, from state preparation through
//!   two-wing verification.
//! - [`adversary`]: Monte Carlo estimation of cheating success for a range
//!   of attack strategies.
//! - [`stats`]: the handful of statistical helpers the above need.

#![forbid(unsafe_code)]

pub mod adversary;
pub mod discrimination;
pub mod error;
pub mod protocol;
pub mod qcore;
pub mod spacetime;
pub mod stats;

pub use error::{Error, Result};
pub use qcore::{ComplexScalar, Operator, Povm, PureState, RandomSource};
