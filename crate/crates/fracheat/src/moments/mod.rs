//! Deterministic second-moment machinery.
//!
//! The linear-noise (multiplicative identity σ) flat-data moment closes
//! into a weakly singular Volterra renewal equation
//!
//! ```text
//! f(t) = c + κ ∫_0^t (t-s)^{ρ-1} f(s) ds,
//! ```
//!
//! whose exact solution is c·E_ρ(κ Γ(ρ) t^ρ).  This module provides the
//! product-integration solver for that equation, the closed-form moment
//! curves for white and colored noise, the chaos-series lower bound with
//! its numerically calibrated chain constant, theoretical excitation
//! indices, and the combinatorial sum bound behind the exponential
//! lower-growth estimates.

use crate::error::{Error, Result};
use crate::kernel::{riesz_fourier_constant, DecayFloor, HeatKernel, KernelMethod, ModelParams, NoiseSpec};
use crate::specfun::{gamma_fn, log_ml_pos};
use serde::Serialize;
use std::f64::consts::PI;

/// Weakly singular renewal problem f = c(t) + κ ∫ (t-s)^{ρ-1} f ds.
#[derive(Clone, Debug)]
pub struct VolterraProblem {
    pub rho: f64,
    pub kappa: f64,
    pub forcing: Forcing,
    pub horizon: f64,
    pub dt: f64,
}

#[derive(Clone, Debug)]
pub enum Forcing {
    Const(f64),
    /// forcing evaluated on the time grid
    Values(Vec<f64>),
}

impl Forcing {
    fn at(&self, idx: usize) -> f64 {
        match self {
            Forcing::Const(c) => *c,
            Forcing::Values(v) => v[idx.min(v.len() - 1)],
        }
    }
}

/// A second-moment curve in both plain and log form.
#[derive(Clone, Debug, Serialize)]
pub struct MomentCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub log_values: Vec<f64>,
    /// which equation/oracle produced it
    pub meta: String,
}

impl MomentCurve {
    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.index_of(t).map(|i| self.values[i])
    }

    pub fn log_value_at(&self, t: f64) -> Option<f64> {
        self.index_of(t).map(|i| self.log_values[i])
    }

    fn index_of(&self, t: f64) -> Option<usize> {
        let dt = if self.times.len() > 1 { self.times[1] - self.times[0] } else { 1.0 };
        self.times.iter().position(|&u| (u - t).abs() <= 0.5 * dt)
    }

    /// CSV body with columns `t, value, oracle`.
    pub fn csv(&self) -> String {
        let mut out = String::from("t,value,oracle\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            out.push_str(&format!("{t:.17e},{v:.17e},{}\n", self.meta));
        }
        out
    }
}

/// First-order product integration (piecewise-constant collocation with
/// exact panel moments of the singular kernel).
pub fn volterra_solve(problem: &VolterraProblem) -> Result<MomentCurve> {
    let VolterraProblem { rho, kappa, forcing, horizon, dt } = problem;
    let (rho, kappa, horizon, dt) = (*rho, *kappa, *horizon, *dt);
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::domain("volterra_solve", format!("rho = {rho} not in (0,1]")));
    }
    if !(kappa >= 0.0) {
        return Err(Error::domain("volterra_solve", format!("kappa = {kappa} < 0")));
    }
    if !(dt > 0.0 && horizon > dt) {
        return Err(Error::domain("volterra_solve", format!("need 0 < dt < horizon (dt = {dt})")));
    }
    let n = (horizon / dt).round() as usize;
    let mut f = vec![0.0f64; n + 1];
    let mut times = vec![0.0f64; n + 1];
    // panel moments m_l = ∫_{(l-1)dt}^{l dt} s^{ρ-1} ds; the convolution
    // only ever sees whole-panel offsets on the uniform grid
    let mut moments = vec![0.0f64; n + 1];
    for (l, m) in moments.iter_mut().enumerate().skip(1) {
        *m = ((l as f64 * dt).powf(rho) - ((l - 1) as f64 * dt).powf(rho)) / rho;
    }
    f[0] = forcing.at(0);
    const CAP: f64 = 1e290;
    for i in 1..=n {
        times[i] = i as f64 * dt;
        let mut conv = 0.0;
        for j in 0..i {
            conv += moments[i - j] * f[j];
        }
        f[i] = forcing.at(i) + kappa * conv;
        if !f[i].is_finite() || f[i].abs() > CAP {
            return Err(Error::VolterraInstability { t: times[i], cap: CAP });
        }
    }
    let log_values = f.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    Ok(MomentCurve { times, values: f, log_values, meta: "volterra".into() })
}

/// Exact solution of the constant-forcing renewal equality,
/// f(t) = c E_ρ(κ Γ(ρ) t^ρ), on a uniform grid, in log form (values
/// saturate past the representable range while logs stay exact).
pub fn renewal_closed_form(rho: f64, kappa: f64, c: f64, horizon: f64, dt: f64) -> Result<MomentCurve> {
    if !(c > 0.0) {
        return Err(Error::domain("renewal_closed_form", format!("c = {c} <= 0")));
    }
    let n = (horizon / dt).round() as usize;
    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    let mut log_values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = i as f64 * dt;
        let z = kappa * gamma_fn(rho) * t.powf(rho);
        let lg = c.ln() + log_ml_pos(rho, z)?;
        times.push(t);
        log_values.push(lg);
        values.push(lg.exp());
    }
    Ok(MomentCurve { times, values, log_values, meta: "closed_form".into() })
}

/// κ and ρ of the flat-data second-moment equation for these parameters:
/// white κ = λ² C*, colored κ = λ² C(d,γ)(2π)^{-d} C*₁.
pub fn flat_moment_coefficients(kernel: &HeatKernel) -> Result<(f64, f64)> {
    let p = kernel.params();
    let rho = p.rho();
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Validity { violated: "0 < ρ ≤ 1", detail: format!("rho = {rho}") });
    }
    let kappa = match p.noise {
        NoiseSpec::White => p.lambda * p.lambda * kernel.c_star()?,
        NoiseSpec::Colored { gamma } => {
            let k_riesz = riesz_fourier_constant(p.dim, gamma) / (2.0 * PI).powf(p.dim as f64);
            p.lambda * p.lambda * k_riesz * kernel.c_star_gamma()?
        }
    };
    Ok((rho, kappa))
}

fn require_flat_linear(params: &ModelParams, u0: f64) -> Result<()> {
    if !params.sigma.is_identity() {
        return Err(Error::Validity {
            violated: "σ(x) = x (linear multiplicative noise)",
            detail: "the flat-data moment closes only for the identity σ".into(),
        });
    }
    if !(u0 > 0.0) {
        return Err(Error::Validity { violated: "u0 > 0", detail: format!("u0 = {u0}") });
    }
    Ok(())
}

/// Exact flat-data second moment under white noise:
/// M(t) = u0² E_ρ(λ² C* Γ(ρ) t^ρ), plus the product-integration solution
/// of the same equation; the pair agrees to the solver's order.
pub fn pam_second_moment_white(
    kernel: &HeatKernel,
    u0: f64,
    horizon: f64,
    dt: f64,
) -> Result<(MomentCurve, MomentCurve)> {
    let p = kernel.params();
    require_flat_linear(p, u0)?;
    if !matches!(p.noise, NoiseSpec::White) {
        return Err(Error::Validity { violated: "white noise", detail: "colored parameters passed".into() });
    }
    let (rho, kappa) = flat_moment_coefficients(kernel)?;
    let closed = renewal_closed_form(rho, kappa, u0 * u0, horizon, dt)?;
    let numeric =
        volterra_solve(&VolterraProblem { rho, kappa, forcing: Forcing::Const(u0 * u0), horizon, dt })?;
    Ok((closed, numeric))
}

/// Colored-noise flat-data second moment through the Cauchy–Schwarz
/// closure: the memory kernel is the covariance smoothing functional at
/// zero separation, Ψ(τ) = λ² C(d,γ)(2π)^{-d} C*₁ τ^{-βγ/α}.
pub fn pam_second_moment_colored(
    kernel: &HeatKernel,
    u0: f64,
    horizon: f64,
    dt: f64,
) -> Result<(MomentCurve, MomentCurve)> {
    let p = kernel.params();
    require_flat_linear(p, u0)?;
    if !matches!(p.noise, NoiseSpec::Colored { .. }) {
        return Err(Error::Validity { violated: "colored noise", detail: "white parameters passed".into() });
    }
    let (rho, kappa) = flat_moment_coefficients(kernel)?;
    let closed = renewal_closed_form(rho, kappa, u0 * u0, horizon, dt)?;
    let numeric =
        volterra_solve(&VolterraProblem { rho, kappa, forcing: Forcing::Const(u0 * u0), horizon, dt })?;
    Ok((closed, numeric))
}

/// Theoretical excitation index 2α/(α-dβ) (white) or 2α/(α-γβ) (colored).
pub fn excitation_theoretical(params: &ModelParams) -> f64 {
    params.excitation_index()
}

/// Chain constant of the chaos-series lower bound, calibrated from the
/// kernel-squared ball masses: by self-similarity
/// inf_{|z| ≤ s^{β/α}} G_s(z) = s^{-βd/α} G₁(1), a radius-s^{β/α} ball
/// centered in the larger ball keeps at least `ball_coefficient` of its
/// own volume inside, and the time integral of s^{-dβ/α} contributes 1/ρ
/// per chaos level, giving c₁ = G₁(1)² · c₂ / ρ.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCalibration {
    pub g1_at_unit_radius: f64,
    pub ball_coefficient: f64,
    pub rho: f64,
    pub c1: f64,
}

pub fn calibrate_chain_constant(kernel: &HeatKernel) -> Result<ChainCalibration> {
    let p = kernel.params();
    if p.dim != 1 {
        return Err(Error::domain("calibrate_chain_constant", "chaos chain calibrated for d = 1".to_string()));
    }
    let g1 = kernel.subordination_at(1.0, 1.0)?;
    // worst case: the small ball centered on the boundary keeps half of
    // its diameter inside, i.e. length s^{β/α} out of 2 s^{β/α}
    let ball_coefficient = 1.0;
    let rho = 1.0 - p.beta() * p.dim as f64 / p.alpha();
    Ok(ChainCalibration { g1_at_unit_radius: g1, ball_coefficient, rho, c1: g1 * g1 * ball_coefficient / rho })
}

/// Evaluated chaos-series lower bound g_t² Σ_k (λ² l_σ² c₁)^k (t/k)^{kρ}
/// with ρ = (α-βd)/α, summed in log space.  Returns (value, log value).
pub fn chaos_lower_bound(kernel: &HeatKernel, floor: &DecayFloor, t: f64) -> Result<(f64, f64)> {
    let p = kernel.params();
    let rho = 1.0 - p.beta() * p.dim as f64 / p.alpha();
    let cal = calibrate_chain_constant(kernel)?;
    let l = p.sigma.lower_slope();
    if !(l > 0.0) {
        return Err(Error::Validity {
            violated: "l_σ > 0",
            detail: "the chaos lower bound needs a positive lower slope".into(),
        });
    }
    if !(t > 0.0 && t <= floor.t_max) {
        return Err(Error::domain(
            "chaos_lower_bound",
            format!("t = {t} outside the floor's calibrated range (0, {}]", floor.t_max),
        ));
    }
    let g_t = floor.g_of_t(t);
    let base = (p.lambda * p.lambda * l * l * cal.c1).max(f64::MIN_POSITIVE).ln();
    // log-sum-exp over k; the k = 0 term is 1
    let mut max_ln = 0.0f64;
    let mut terms = vec![0.0f64];
    const CAP: usize = 10_000;
    let mut truncated = true;
    for k in 1..=CAP {
        let kf = k as f64;
        let ln_term = kf * base + kf * rho * (t / kf).ln();
        terms.push(ln_term);
        max_ln = max_ln.max(ln_term);
        // past the peak the terms fall like -kρ ln k
        if ln_term < max_ln - 60.0 {
            truncated = false;
            break;
        }
    }
    if truncated {
        return Err(Error::SeriesTruncation { op: "chaos_lower_bound", cap: CAP });
    }
    let sum_exp: f64 = terms.iter().map(|&l| (l - max_ln).exp()).sum();
    let log_series = max_ln + sum_exp.ln();
    let log_value = 2.0 * g_t.ln() + log_series;
    Ok((log_value.exp(), log_value))
}

/// S(b) = Σ_j (b / j^ρ)^j (the j = 0 term is 1), in log space, together
/// with the fitted constant c₁ = log S / b^{1/ρ}; for b ≥ (e/ρ)^ρ the sum
/// dominates exp(c₁ b^{1/ρ}) with some c₁ > 0.
pub fn exp_lower_bound_sum(rho: f64, b: f64) -> Result<(f64, f64)> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain("exp_lower_bound_sum", format!("rho = {rho} not in (0,1)")));
    }
    if !(b > 0.0) {
        return Err(Error::domain("exp_lower_bound_sum", format!("b = {b} <= 0")));
    }
    let mut terms = vec![0.0f64];
    let mut max_ln = 0.0f64;
    let j_peak = (b.powf(1.0 / rho) / std::f64::consts::E).max(4.0);
    for j in 1..200_000 {
        let jf = j as f64;
        let ln_term = jf * (b.ln() - rho * jf.ln());
        terms.push(ln_term);
        max_ln = max_ln.max(ln_term);
        if ln_term < max_ln - 60.0 && jf > j_peak {
            break;
        }
    }
    let sum: f64 = terms.iter().map(|&l| (l - max_ln).exp()).sum();
    let log_s = max_ln + sum.ln();
    Ok((log_s, log_s / b.powf(1.0 / rho)))
}

/// Least-squares growth rate of log f over the tail window
/// [T(1-frac), T]; the renewal sandwich pins it near (κ Γ(ρ))^{1/ρ}.
pub fn growth_rate(curve: &MomentCurve, tail_fraction: f64) -> Result<crate::util::fit::LineFit> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::domain("growth_rate", format!("tail fraction {tail_fraction}")));
    }
    let t_end = *curve.times.last().unwrap();
    let t_start = t_end * (1.0 - tail_fraction);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &t) in curve.times.iter().enumerate() {
        if t >= t_start && curve.values[i] > 0.0 {
            xs.push(t);
            ys.push(curve.log_values[i]);
        }
    }
    if xs.len() < 4 {
        return Err(Error::domain("growth_rate", "fewer than 4 positive points in the tail window".to_string()));
    }
    Ok(crate::util::fit::fit_line(&xs, &ys))
}

/// Rate predicted by the renewal sandwich, (κ Γ(ρ))^{1/ρ}.
pub fn renewal_rate(rho: f64, kappa: f64) -> f64 {
    (kappa * gamma_fn(rho)).powf(1.0 / rho)
}

/// Kernel value G₁(1) through the tabulated profile (used by calibration
/// diagnostics; the calibration itself evaluates the kernel directly).
pub fn unit_kernel_value(kernel: &HeatKernel) -> Result<f64> {
    kernel.profile(1.0, KernelMethod::Subordination, 24).map(|p| p.eval(1.0))
}

#[cfg(test)]
mod tests;
