//! Batch verification of the kernel estimates for one parameter set:
//! dual-route agreement, mass, self-similarity, squared/Riesz-weighted
//! scaling exponents against their closed constants, temporal increments,
//! covariance decay, and the two-sided pointwise envelope, with the
//! fitted constants recorded in a lemma report.

use super::ModeOutcome;
use crate::config::ExperimentConfig;
use crate::manifest::{record_output, CheckResult};
use anyhow::Result;
use fracheat::kernel::{profile_csv, profile_json_header, HeatKernel, KernelMethod};
use fracheat::util::{fit, geomspace};
use serde_json::json;
use std::path::Path;

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<ModeOutcome> {
    let params = cfg.model(None)?;
    let kernel = HeatKernel::new(params.clone())?;
    let mut checks = Vec::new();
    let mut outputs = Vec::new();
    let mut fitted = serde_json::Map::new();

    // dual-route agreement at 20 radii in the bulk
    let t = cfg.fit_time_t.unwrap_or(1.0);
    let scale = kernel.spatial_scale(t);
    let radii = geomspace(0.15 * scale, 6.0 * scale, 20);
    let mut worst = 0.0f64;
    for &r in &radii {
        let a = kernel.subordination_at(t, r)?;
        let b = kernel.fourier_at(t, r)?;
        worst = worst.max((a - b).abs() / a.abs());
    }
    checks.push(CheckResult::new(
        "dual_route_agreement",
        worst < 1e-4,
        format!("worst relative gap {worst:.3e} over 20 radii at t = {t}"),
    ));
    fitted.insert("dual_route_worst_rel".into(), json!(worst));

    // mass
    let mass = kernel.mass(t)?;
    checks.push(CheckResult::new("kernel_mass", (mass - 1.0).abs() < 1e-5, format!("∫G = {mass:.9}")));

    // self-similarity across a time pair
    let bd = params.beta() * params.dim as f64 / params.alpha();
    let r_probe = 1.3 * scale;
    let lhs = kernel.subordination_at(2.0 * t, r_probe)?;
    let rhs = 2f64.powf(-bd) * kernel.subordination_at(t, 2f64.powf(-params.beta() / params.alpha()) * r_probe)?;
    let ss_rel = (lhs - rhs).abs() / rhs;
    checks.push(CheckResult::new("self_similarity", ss_rel < 1e-5, format!("relative gap {ss_rel:.3e}")));

    // L² scaling: slope and route agreement
    let ts = geomspace(0.1, 10.0, 12);
    let l2: Vec<f64> = ts.iter().map(|&u| kernel.l2_norm(u).map(|v| v.0)).collect::<fracheat::Result<_>>()?;
    let slope = fit::log_log_slope(&ts, &l2);
    let want = -bd;
    checks.push(CheckResult::new(
        "l2_scaling_exponent",
        (slope.slope - want).abs() < 1e-3,
        format!("slope {:.6} vs -βd/α = {want:.6}", slope.slope),
    ));
    fitted.insert("l2_slope".into(), json!(slope.slope));
    let (direct, closed) = kernel.l2_norm(t)?;
    let l2_rel = (direct - closed).abs() / closed;
    checks.push(CheckResult::new(
        "l2_route_agreement",
        l2_rel < 1e-6,
        format!("direct {direct:.9e} vs C* t^(-βd/α) {closed:.9e}"),
    ));
    fitted.insert("c_star".into(), json!(kernel.c_star()?));

    if let Some(gamma) = params.gamma() {
        let bg = params.beta() * gamma / params.alpha();
        let rz: Vec<f64> =
            ts.iter().map(|&u| kernel.riesz_weighted_l2(u).map(|v| v.0)).collect::<fracheat::Result<_>>()?;
        let slope = fit::log_log_slope(&ts, &rz);
        checks.push(CheckResult::new(
            "riesz_scaling_exponent",
            (slope.slope + bg).abs() < 1e-3,
            format!("slope {:.6} vs -βγ/α = {:.6}", slope.slope, -bg),
        ));
        fitted.insert("c_star_gamma".into(), json!(kernel.c_star_gamma()?));

        // temporal increment exponent over dyadic lags
        let hs: Vec<f64> = (3..=10).map(|j| 2f64.powi(-j)).collect();
        let vals: Vec<f64> = hs.iter().map(|&h| kernel.temporal_increment(t, h)).collect::<fracheat::Result<_>>()?;
        let hfit = fit::log_log_slope(&hs, &vals);
        let want_h = 1.0 - bg;
        checks.push(CheckResult::new(
            "temporal_increment_exponent",
            (hfit.slope - want_h).abs() < 0.05,
            format!("slope {:.4} vs 1-βγ/α = {want_h:.4}", hfit.slope),
        ));
        fitted.insert("temporal_increment_slope".into(), json!(hfit.slope));

        // covariance smoothing: Parseval at zero separation and decay
        let v0 = kernel.covariance_double_integral(t, 0.0)?;
        let (riesz, _) = kernel.riesz_weighted_l2(t)?;
        let expect = riesz * fracheat::kernel::riesz_fourier_constant(params.dim, gamma)
            / (2.0 * std::f64::consts::PI).powf(params.dim as f64);
        let parseval_rel = (v0 - expect).abs() / expect;
        checks.push(CheckResult::new(
            "covariance_parseval",
            parseval_rel < 1e-6,
            format!("separation 0: {v0:.9e} vs Riesz route {expect:.9e}"),
        ));
        let v1 = kernel.covariance_double_integral(t, scale)?;
        let v2 = kernel.covariance_double_integral(t, 2.0 * scale)?;
        checks.push(CheckResult::new(
            "covariance_separation_decay",
            v0 > v1 && v1 > v2 && v2 > 0.0,
            format!("{v0:.4e} > {v1:.4e} > {v2:.4e}"),
        ));
    }

    // pointwise envelope constants
    let report = kernel.pointwise_bounds_check(&[0.5, 1.0, 2.0, 4.0], 40)?;
    checks.push(CheckResult::new(
        "pointwise_lower_bound",
        report.c1_hat > 0.0,
        format!("ĉ₁ = {:.3e}", report.c1_hat),
    ));
    if report.upper_bound_checked {
        checks.push(CheckResult::new(
            "pointwise_upper_bound",
            report.c2_hat.is_finite() && report.c2_hat >= report.c1_hat,
            format!("ĉ₂ = {:.3e}", report.c2_hat),
        ));
    } else {
        checks.push(CheckResult::new(
            "pointwise_upper_bound",
            true,
            "skipped: α ≤ d leaves the kernel unbounded at the origin".to_string(),
        ));
    }
    fitted.insert("bounds_report".into(), serde_json::to_value(&report)?);

    // exportable profile
    let profile = kernel.profile(t, KernelMethod::Subordination, 120)?;
    outputs.push(record_output(out, "kernel_profile.csv", profile_csv(&profile).as_bytes())?);
    outputs.push(record_output(
        out,
        "kernel_profile.json",
        serde_json::to_vec_pretty(&profile_json_header(&profile, &params))?.as_slice(),
    )?);

    let lemma_report = json!({
        "params": params,
        "checks": checks,
        "fitted_constants": fitted,
    });
    outputs.push(record_output(out, "lemma_report.json", serde_json::to_vec_pretty(&lemma_report)?.as_slice())?);

    Ok(ModeOutcome { outputs, checks })
}
