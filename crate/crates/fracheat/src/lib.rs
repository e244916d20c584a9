//! Numerical laboratory for time-fractional stochastic heat equations
//!
//! The model is the subdiffusive stochastic heat equation driven either by
//! space-time white noise or by spatially colored noise with a Riesz-type
//! correlation, written in mild (Duhamel/Walsh) form.  The crate provides:
//!
//! * [`specfun`] — the special functions everything rests on: the
//!   Mittag-Leffler function on the non-positive real axis with its
//!   two-sided rational sandwich, the one-sided stable subordinator
//!   density, and symmetric stable transition densities.
//! * [`kernel`] — the subdiffusive heat kernel built by two independent
//!   routes (subordination and radial Fourier inversion), its squared and
//!   Riesz-weighted integrals with closed-form scaling constants, and
//!   numerical certification of the kernel estimates (pointwise bounds,
//!   temporal increments, covariance smoothing, decay floors).
//! * [`moments`] — deterministic second-moment machinery: weakly singular
//!   Volterra renewal equations solved by product integration, exact
//!   flat-data moment curves, chaos-series lower bounds and theoretical
//!   noise-excitation indices.
//! * [`mcsim`] — Monte Carlo simulation of the mild solution on a periodic
//!   space-time grid with reproducible per-replica noise streams, the
//!   non-Markovian history convolution done spectrally, and pathwise
//!   statistics (moments with bootstrap errors, temporal increment fits).
//!
//! Replica loops and profile tabulations are data-parallel via `rayon`
//! when the `parallel` feature (default) is enabled; a sequential fallback
//! with identical, bit-reproducible results is always compiled in.

pub mod error;
pub mod kernel;
pub mod mcsim;
pub mod moments;
pub mod parallel;
pub mod specfun;
pub mod util;

pub use error::{Error, Result};
pub use kernel::{ModelParams, NoiseSpec, SigmaSpec};
pub use specfun::FracOrder;
