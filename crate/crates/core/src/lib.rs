//! Entanglement-assisted coding over compound quantum channels, one-shot
//! hypothesis-testing divergences, the union-of-projectors construction and
//! composite hypothesis testing, on dense complex matrices.
//!
//! Builds without `std` (with `alloc`); all floating-point functions go
//! through `libm` so both builds agree bit for bit.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod coding;
pub mod composite;
pub mod divergences;
mod error;
pub mod jordan;
pub(crate) mod math;
pub mod qcore;

pub use error::{Error, Result};

/// Absolute tolerance for PSD, projector and normalization checks.
pub const ATOL: f64 = 1e-9;
/// Relative tolerance for eigen-reconstruction.
pub const RTOL: f64 = 1e-10;
/// Largest total Hilbert-space dimension any operation will build.
pub const DIM_CAP: usize = 4096;
/// Eigenvalues at or below this are treated as zero for supports and pseudo-inverses.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Relative tolerance reported for saddle-point values.
pub const TOL_OPT: f64 = 1e-4;
