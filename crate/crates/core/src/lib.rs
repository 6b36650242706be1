//! Simulation and exact-computation laboratory for two-dimensional cover times.
//!
//! The crate has three layers:
//!
//! * stochastic simulators — simple random walks on the discrete torus, the
//!   plane and general planar lattices ([`lattice`]), and discretized Brownian
//!   motion on the unit torus ([`bm`]);
//! * exact machinery — the birth-death excursion chain and its log-space
//!   dynamic program ([`chain`]), the spectral torus Green's function and
//!   annulus Poisson kernel ([`green`]), and closed-form asymptotic
//!   predictors ([`predict`]);
//! * orchestration — deterministic, replicate-parallel experiment running
//!   with bit-reproducible CSV/JSONL emission ([`harness`]).
//!
//! Every operation that consumes randomness is a pure function of its
//! arguments and a 64-bit seed; see [`rng`] for the frozen generator choices.

pub mod bm;
pub mod chain;
pub mod error;
pub mod green;
pub mod harness;
pub mod lattice;
pub mod logspace;
pub mod predict;
pub mod rng;

pub use error::{Error, Result};
