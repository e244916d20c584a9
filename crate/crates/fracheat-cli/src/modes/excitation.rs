//! Excitation-index fits: the double-log slope of the second moment in
//! the noise level at fixed time, from either the closed-form oracle
//! (linear σ, flat data) or the Monte Carlo pipeline.
//!
//! The fit runs on the normalized moment M/u0², which makes the oracle
//! pipeline exactly invariant under rescaling the initial datum.  Noise
//! levels whose normalized log-moment falls below the admissibility cut
//! are excluded (the double log is numerically meaningless near zero)
//! and the cut is recorded in the estimate.

use super::ModeOutcome;
use crate::config::ExperimentConfig;
use crate::manifest::{record_output, CheckResult};
use anyhow::{bail, Context, Result};
use fracheat::kernel::HeatKernel;
use fracheat::mcsim::{second_moment, simulate, SimOptions};
use fracheat::moments::flat_moment_coefficients;
use fracheat::specfun::{gamma_fn, log_ml_pos};
use fracheat::util::fit;
use serde::Serialize;
use std::path::Path;

#[derive(Clone, Debug, Serialize)]
pub struct ExcitationEstimate {
    pub pipeline: String,
    pub fit_time: f64,
    pub lambdas: Vec<f64>,
    pub log_moments: Vec<f64>,
    pub kept: Vec<bool>,
    pub double_log_cut: f64,
    pub slope: f64,
    pub slope_se: f64,
    pub theoretical: f64,
    pub relative_gap: f64,
}

/// Normalized log-moments log(M(λ, t)/u0²) per pipeline.
fn log_moments(
    cfg: &ExperimentConfig,
    lambdas: &[f64],
    t: f64,
    pipeline: &str,
    seed: Option<u64>,
    replicas: Option<u64>,
) -> Result<Vec<f64>> {
    match pipeline {
        "oracle" => {
            let mut out = Vec::with_capacity(lambdas.len());
            for &lam in lambdas {
                let kernel = HeatKernel::new(cfg.model(Some(lam))?)?;
                let (rho, kappa) = flat_moment_coefficients(&kernel)?;
                let z = kappa * gamma_fn(rho) * t.powf(rho);
                out.push(log_ml_pos(rho, z)?);
            }
            Ok(out)
        }
        "mc" => {
            let grid = cfg.grid()?;
            let seed = seed.or(cfg.seed).unwrap_or(0);
            let replicas = replicas.or(cfg.replicas).unwrap_or(500);
            let u0sq = cfg.u0_const * cfg.u0_const;
            let mut out = Vec::with_capacity(lambdas.len());
            for (i, &lam) in lambdas.iter().enumerate() {
                let kernel = HeatKernel::new(cfg.model(Some(lam))?)?;
                let ens = simulate(
                    &kernel,
                    &grid,
                    &cfg.initial_data(),
                    replicas,
                    seed.wrapping_add(i as u64 * 0x5851_f42d),
                    &[t],
                    &SimOptions::default(),
                )?;
                let stats = second_moment(&ens, cfg.x_average)?;
                out.push((stats.mean[0] / u0sq).max(f64::MIN_POSITIVE).ln());
            }
            Ok(out)
        }
        other => bail!("unknown excitation pipeline {other:?} (expected \"oracle\" or \"mc\")"),
    }
}

pub fn estimate(
    cfg: &ExperimentConfig,
    seed: Option<u64>,
    replicas: Option<u64>,
) -> Result<ExcitationEstimate> {
    let lambdas = cfg.lambdas.clone().context("excitation needs a lambdas grid")?;
    if lambdas.len() < 4 || lambdas.windows(2).any(|w| w[1] <= w[0]) || lambdas[0] <= 0.0 {
        bail!("lambdas must be an ascending positive grid with at least 4 points");
    }
    let t = cfg.fit_time_t.context("excitation needs fit_time_t")?;
    let pipeline = cfg.excitation_pipeline.clone().unwrap_or_else(|| "oracle".into());
    let cut = cfg.double_log_cut.unwrap_or(std::f64::consts::E.sqrt());
    let theoretical = cfg.model(None)?.excitation_index();

    let log_m = log_moments(cfg, &lambdas, t, &pipeline, seed, replicas)?;
    let kept: Vec<bool> = log_m.iter().map(|&lm| lm > cut).collect();
    let survived = kept.iter().filter(|&&k| k).count();
    if survived < 4 {
        return Err(fracheat::Error::UnderResolved { survived, total: lambdas.len(), cut }.into());
    }
    let xs: Vec<f64> = lambdas
        .iter()
        .zip(&kept)
        .filter(|(_, &k)| k)
        .map(|(&l, _)| l.ln())
        .collect();
    let ys: Vec<f64> = log_m
        .iter()
        .zip(&kept)
        .filter(|(_, &k)| k)
        .map(|(&lm, _)| lm.ln())
        .collect();
    let f = fit::fit_line(&xs, &ys);
    Ok(ExcitationEstimate {
        pipeline,
        fit_time: t,
        lambdas,
        log_moments: log_m,
        kept,
        double_log_cut: cut,
        slope: f.slope,
        slope_se: f.slope_se,
        theoretical,
        relative_gap: (f.slope - theoretical).abs() / theoretical,
    })
}

pub fn run(
    cfg: &ExperimentConfig,
    out: &Path,
    seed: Option<u64>,
    replicas: Option<u64>,
) -> Result<ModeOutcome> {
    let est = estimate(cfg, seed, replicas)?;
    let tol = if est.pipeline == "oracle" { 0.05 } else { 0.15 };
    let mut csv = String::from("lambda,log_moment,kept\n");
    for i in 0..est.lambdas.len() {
        csv.push_str(&format!("{:.17e},{:.17e},{}\n", est.lambdas[i], est.log_moments[i], est.kept[i]));
    }
    let outputs = vec![
        record_output(out, "excitation.csv", csv.as_bytes())?,
        record_output(out, "excitation_estimate.json", serde_json::to_vec_pretty(&est)?.as_slice())?,
    ];
    let checks = vec![CheckResult::new(
        "excitation_index",
        est.relative_gap <= tol,
        format!(
            "fitted {:.4} ± {:.4} vs theoretical {:.4} ({} pipeline, gap {:.1}%, tolerance {:.0}%)",
            est.slope,
            est.slope_se,
            est.theoretical,
            est.pipeline,
            100.0 * est.relative_gap,
            100.0 * tol
        ),
    )];
    Ok(ModeOutcome { outputs, checks })
}
