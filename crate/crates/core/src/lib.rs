//! Core numerics for a bi-fidelity neural-network surrogate Monte Carlo
//! estimator: dense feedforward networks trained from scratch, the forward
//! models they stand in for, sample-design construction, and the tolerance /
//! cost bookkeeping that ties them together.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through [`libm`] so results are identical across builds and targets.
//! IO, campaign orchestration, and file formats live in the companion CLI
//! crate.

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod analysis;
pub mod design;
pub mod error;
pub(crate) mod math;
pub mod models;
pub mod nnet;
pub mod stats;

pub use error::{Error, Result};
