//! Report-producing kernel certifications: the two-sided pointwise
//! envelope constants, smoothed initial data, and the certified
//! polynomial decay floor used by the chaos-series lower bound.

use super::{HeatKernel, KernelMethod, KernelProfile};
use crate::error::{Error, Result};
use crate::util::quad;
use serde::Serialize;
use std::sync::Arc;

/// Bounded measurable initial data on the line (constants work in any d).
#[derive(Clone)]
pub enum InitialData {
    Const(f64),
    /// height · 1_{[lo, hi]}
    Indicator { lo: f64, hi: f64, height: f64 },
    /// callable with compact support and a known uniform bound
    Custom { support: (f64, f64), bound: f64, f: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl std::fmt::Debug for InitialData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitialData::Const(c) => write!(f, "Const({c})"),
            InitialData::Indicator { lo, hi, height } => {
                write!(f, "Indicator([{lo}, {hi}] × {height})")
            }
            InitialData::Custom { support, bound, .. } => {
                write!(f, "Custom(support {support:?}, bound {bound})")
            }
        }
    }
}

impl InitialData {
    /// Bounded, non-negative, positive on a set of positive measure.
    pub fn validate(&self) -> Result<()> {
        match self {
            InitialData::Const(c) => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(Error::InvalidInitialData(format!("constant {c} must be positive and finite")));
                }
            }
            InitialData::Indicator { lo, hi, height } => {
                if !(hi > lo) || !(*height > 0.0) {
                    return Err(Error::InvalidInitialData(format!(
                        "indicator needs lo < hi and height > 0 (got [{lo}, {hi}] × {height})"
                    )));
                }
            }
            InitialData::Custom { support, bound, f } => {
                if !(support.1 > support.0) || !(*bound > 0.0) {
                    return Err(Error::InvalidInitialData("custom data needs a nonempty support and a positive bound".into()));
                }
                let mut any_positive = false;
                for i in 0..512 {
                    let x = support.0 + (support.1 - support.0) * (i as f64 + 0.5) / 512.0;
                    let v = f(x);
                    if v < -1e-12 {
                        return Err(Error::InvalidInitialData(format!("negative value {v} at x = {x}")));
                    }
                    if v > *bound * (1.0 + 1e-9) {
                        return Err(Error::InvalidInitialData(format!(
                            "value {v} at x = {x} exceeds the declared bound {bound}"
                        )));
                    }
                    if v > 1e-12 {
                        any_positive = true;
                    }
                }
                if !any_positive {
                    return Err(Error::InvalidInitialData("data vanishes on the sampled support".into()));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialData::Const(c) => *c,
            InitialData::Indicator { lo, hi, height } => {
                if x >= *lo && x <= *hi {
                    *height
                } else {
                    0.0
                }
            }
            InitialData::Custom { support, f, .. } => {
                if x >= support.0 && x <= support.1 {
                    f(x)
                } else {
                    0.0
                }
            }
        }
    }

    fn support(&self) -> Option<(f64, f64)> {
        match self {
            InitialData::Const(_) => None,
            InitialData::Indicator { lo, hi, .. } => Some((*lo, *hi)),
            InitialData::Custom { support, .. } => Some(*support),
        }
    }
}

/// Empirical constants of G_t(x) ≍ t^{-βd/α} ∧ t^β |x|^{-d-α}.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    /// (t, min ratio, max ratio) per tested time.
    pub per_t: Vec<(f64, f64, f64)>,
    /// inf over the whole grid (the lower-bound constant ĉ₁).
    pub c1_hat: f64,
    /// sup over the whole grid (the upper-bound constant ĉ₂); only
    /// meaningful when `upper_bound_checked`.
    pub c2_hat: f64,
    /// false (and the upper check skipped) when α ≤ d.
    pub upper_bound_checked: bool,
    /// ratio at the crossover radius |x| = t^{β/α} for each t.
    pub crossover_ratios: Vec<f64>,
}

/// Certified polynomial lower bound on the smoothed initial data:
/// g(t) = coeff · (t0 + t)^{-β κ} for x ∈ B(0, t^{β/α}), s ≤ t.
#[derive(Clone, Debug, Serialize)]
pub struct DecayFloor {
    pub t0: f64,
    /// stable-kernel decay power κ = 2d/α; the subordinated floor decays
    /// with exponent β κ.
    pub kappa: f64,
    pub beta: f64,
    pub coeff: f64,
    /// horizon the calibration covered
    pub t_max: f64,
}

impl DecayFloor {
    pub fn g_of_t(&self, t: f64) -> f64 {
        self.coeff * (self.t0 + t).powf(-self.beta * self.kappa)
    }
}

impl HeatKernel {
    /// Two-sided envelope constants over radii grids at several times.
    /// By self-similarity the ratio profile is t-invariant, so stability
    /// across t doubles as a quadrature sanity check.
    pub fn pointwise_bounds_check(&self, ts: &[f64], n_radii: usize) -> Result<BoundsReport> {
        let alpha = self.params().alpha();
        let beta = self.params().beta();
        let d = self.params().dim as f64;
        let upper_ok = alpha > d;
        let mut per_t = Vec::new();
        let mut crossover_ratios = Vec::new();
        let mut c1 = f64::INFINITY;
        let mut c2: f64 = 0.0;
        for &t in ts {
            let cross = t.powf(beta / alpha);
            let radii = crate::util::geomspace(0.05 * cross, 20.0 * cross, n_radii);
            let mut lo_t = f64::INFINITY;
            let mut hi_t: f64 = 0.0;
            for &r in &radii {
                let g = self.subordination_at(t, r)?;
                let envelope = t.powf(-beta * d / alpha).min(t.powf(beta) / r.powf(d + alpha));
                let ratio = g / envelope;
                lo_t = lo_t.min(ratio);
                hi_t = hi_t.max(ratio);
            }
            let g_cross = self.subordination_at(t, cross)?;
            crossover_ratios.push(g_cross / t.powf(-beta * d / alpha));
            per_t.push((t, lo_t, hi_t));
            c1 = c1.min(lo_t);
            c2 = c2.max(hi_t);
        }
        Ok(BoundsReport { per_t, c1_hat: c1, c2_hat: c2, upper_bound_checked: upper_ok, crossover_ratios })
    }

    /// (𝒢u₀)_t(x) = ∫ G_t(x-y) u₀(y) dy by quadrature (d = 1 for
    /// non-constant data; constants are exact by kernel mass).
    pub fn smoothed_initial(&self, u0: &InitialData, t: f64, x: f64) -> Result<f64> {
        u0.validate()?;
        if let InitialData::Const(c) = u0 {
            return Ok(*c);
        }
        if self.params().dim != 1 {
            return Err(Error::domain("smoothed_initial", "non-constant initial data supported for d = 1".to_string()));
        }
        let (lo, hi) = u0.support().expect("non-constant data has support");
        let profile = self.profile(t, KernelMethod::Subordination, 160)?;
        self.smoothed_initial_with_profile(u0, &profile, x, lo, hi)
    }

    /// As `smoothed_initial` but against a prebuilt profile at the same t,
    /// for callers evaluating many points.
    pub fn smoothed_initial_at(&self, u0: &InitialData, profile: &KernelProfile, x: f64) -> Result<f64> {
        u0.validate()?;
        if let InitialData::Const(c) = u0 {
            return Ok(*c);
        }
        let (lo, hi) = u0.support().expect("non-constant data has support");
        self.smoothed_initial_with_profile(u0, profile, x, lo, hi)
    }

    fn smoothed_initial_with_profile(
        &self,
        u0: &InitialData,
        profile: &KernelProfile,
        x: f64,
        lo: f64,
        hi: f64,
    ) -> Result<f64> {
        let f = |y: f64| profile.eval((x - y).abs()) * u0.eval(y);
        // break at the kernel center when it falls inside the support
        let mut pts = vec![lo];
        if x > lo && x < hi {
            pts.push(x);
        }
        pts.push(hi);
        Ok(quad::adaptive_with_breakpoints(&f, &pts, 1e-12, 1e-9).value)
    }

    /// Calibrated polynomial decay floor for (𝒢u₀)_{t0+s}(x) over
    /// x ∈ B(0, t^{β/α}), s ≤ t, valid on t ∈ (0, t_max].
    ///
    /// t0 is the smallest dyadic time with p(t0, 0) ≤ 1; the exponent is
    /// 2βd/α; the coefficient is the observed infimum of the normalized
    /// smoothed data over a calibration grid with a 10% safety margin.
    pub fn build_decay_floor(&self, u0: &InitialData, t_max: f64) -> Result<DecayFloor> {
        u0.validate()?;
        if self.params().dim != 1 && !matches!(u0, InitialData::Const(_)) {
            return Err(Error::domain("build_decay_floor", "non-constant initial data supported for d = 1".to_string()));
        }
        let alpha = self.params().alpha();
        let beta = self.params().beta();
        let d = self.params().dim as f64;
        // smallest dyadic t with p(t,0) <= 1
        let mut t0 = 1.0f64;
        while self.stable().eval(t0, 0.0)? > 1.0 {
            t0 *= 2.0;
        }
        while t0 > 1e-6 && self.stable().eval(t0 / 2.0, 0.0)? <= 1.0 {
            t0 /= 2.0;
        }
        let kappa = 2.0 * d / alpha;
        let exponent = beta * kappa;
        if let InitialData::Const(c) = u0 {
            // flat data smooths to itself; the floor is the constant scaled
            // to the stated polynomial form at the horizon
            return Ok(DecayFloor { t0, kappa, beta, coeff: c * (t0 + t_max).powf(exponent), t_max });
        }
        let (lo, hi) = u0.support().expect("non-constant data has support");
        let mut coeff = f64::INFINITY;
        // worst case sits at s = t, |x| = t^{β/α}; scan a log grid in t
        let ts = crate::util::geomspace(t_max / 64.0, t_max, 10);
        for &t in &ts {
            let profile = self.profile(t0 + t, KernelMethod::Subordination, 160)?;
            let ball = t.powf(beta / alpha);
            for &x in &[-ball, -0.5 * ball, 0.0, 0.5 * ball, ball] {
                let v = self.smoothed_initial_with_profile(u0, &profile, x, lo, hi)?;
                coeff = coeff.min(v * (t0 + t).powf(exponent));
            }
        }
        if !(coeff > 0.0) {
            return Err(Error::InvalidInitialData("smoothed data vanished on the calibration grid".into()));
        }
        Ok(DecayFloor { t0, kappa, beta, coeff: 0.9 * coeff, t_max })
    }
}
