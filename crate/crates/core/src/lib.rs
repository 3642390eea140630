//! Continuous-time random walks with power-law jumps and waits, their
//! transforms, and the space-time fractional diffusion limit they converge
//! to.
//!
//! - [`specfun`]: gamma, zeta, Mittag-Leffler.
//! - [`laws`]: jump and waiting-time laws, inverse-transform sampling.
//! - [`asymptotics`]: characteristic function and Laplace transform
//!   asymptotics, the Montroll-Weiss transform and its rescaled limit.
//! - [`ctrw`]: Monte Carlo engine and exact lattice evolution.
//! - [`greenfn`]: fundamental solution `u(x, t)` by Fourier inversion.
//! - [`stats`]: empirical CDF, Kolmogorov-Smirnov, Hill, moments.
//! - [`cli`]: settings, commands and run manifests behind the binary.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod ctrw;
pub mod error;
pub mod greenfn;
pub mod laws;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
