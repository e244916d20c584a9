//! Special functions for subdiffusive kernels: the Mittag-Leffler
//! function on the non-positive axis, the one-sided stable subordinator
//! density, the inverse-subordinator (first passage) density, and
//! symmetric stable transition densities.
//!
//! All evaluators are pure functions of their arguments (tabulated caches
//! are immutable after construction), so everything here is safe to call
//! concurrently.

mod gamma;
mod mittag_leffler;
mod stable;
mod subordinator;

pub use gamma::{gamma_fn, ln_gamma_fn, recip_gamma};
pub use mittag_leffler::{log_ml_pos, ml_neg, ml_neg_asymptotic_terms, ml_neg_value, sandwich, MlValue};
pub use stable::{bessel_j0, StableDensity};
pub use subordinator::{first_passage_density, small_u_constants, GBranch, SubordinatorDensity};

use crate::error::{Error, Result};

/// Fractional orders of the model: time order `beta`, spatial index `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FracOrder {
    pub beta: f64,
    pub alpha: f64,
}

impl FracOrder {
    /// `beta` strictly inside (0,1); `beta = 1` is expressed through the
    /// classical-limit flag on the kernel side, not here.
    pub fn new(beta: f64, alpha: f64) -> Result<FracOrder> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain("FracOrder", format!("beta = {beta} not in (0,1)")));
        }
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::domain("FracOrder", format!("alpha = {alpha} not in (0,2]")));
        }
        Ok(FracOrder { beta, alpha })
    }
}
