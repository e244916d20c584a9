//! Monte Carlo run: ensemble snapshots to the binary container, moment
//! curves with bootstrap errors to CSV, and — for linear σ with flat data
//! under white noise — agreement gates against the continuum oracle.

use super::ModeOutcome;
use crate::config::ExperimentConfig;
use crate::manifest::{record_output, CheckResult};
use anyhow::{Context, Result};
use fracheat::kernel::{HeatKernel, NoiseSpec};
use fracheat::mcsim::{second_moment, simulate, write_container, SimOptions};
use fracheat::moments::pam_second_moment_white;
use std::path::Path;

pub fn run(
    cfg: &ExperimentConfig,
    out: &Path,
    seed_override: Option<u64>,
    replicas_override: Option<u64>,
) -> Result<ModeOutcome> {
    let params = cfg.model(None)?;
    let kernel = HeatKernel::new(params.clone())?;
    let grid = cfg.grid()?;
    let seed = seed_override.or(cfg.seed).unwrap_or(0);
    let replicas = replicas_override.or(cfg.replicas).unwrap_or(100);
    let times = cfg.snapshot_times.clone().context("simulate needs snapshot_times")?;
    let opts = SimOptions::default();
    let mut checks = Vec::new();

    if let Some(w) = grid.resolution_guard(&params.frac, params.nu) {
        checks.push(CheckResult::new("resolution_guard", true, format!("warning: {w}")));
    }
    if let Some(w) = grid.wraparound_guard(&params.frac, params.nu) {
        checks.push(CheckResult::new("wraparound_guard", true, format!("warning: {w}")));
    }

    let ensemble = simulate(&kernel, &grid, &cfg.initial_data(), replicas, seed, &times, &opts)?;
    checks.push(CheckResult::new(
        "replicas_completed",
        ensemble.aborted.is_empty(),
        format!("{} of {replicas} replicas completed", ensemble.n_replicas()),
    ));
    let stats = second_moment(&ensemble, cfg.x_average)?;

    let mut outputs = Vec::new();
    let container = out.join("ensemble.bin");
    write_container(&container, &ensemble)?;
    let bytes = std::fs::read(&container)?;
    outputs.push(crate::manifest::OutputFile {
        name: "ensemble.bin".into(),
        sha256: crate::manifest::sha256_hex(&bytes),
        bytes: bytes.len() as u64,
    });
    outputs.push(record_output(out, "moments.csv", stats.csv().as_bytes())?);

    // oracle gate for the exactly solvable configuration
    if matches!(params.noise, NoiseSpec::White) && params.sigma.is_identity() {
        let horizon = grid.horizon;
        let (closed, _) = pam_second_moment_white(&kernel, cfg.u0_const, horizon, grid.dt())?;
        let mut worst_dev = 0.0f64;
        let mut detail = String::new();
        for (i, &t) in stats.times.iter().enumerate() {
            let want = closed.value_at(t).context("oracle grid misaligned")?;
            let dev = (stats.mean[i] - want).abs() / stats.se[i].max(1e-300);
            worst_dev = worst_dev.max(dev);
            detail.push_str(&format!("t={t}: mc {:.6} oracle {want:.6} ({dev:.2} se); ", stats.mean[i]));
        }
        checks.push(CheckResult::new("mc_vs_oracle_2se", worst_dev < 2.0, detail));
    }

    Ok(ModeOutcome { outputs, checks })
}
