//! Experiment orchestration for the subdiffusive stochastic heat
//! laboratory: kernel lemma batches, moment oracles, Monte Carlo runs,
//! excitation-index and temporal-regularity fits.
//!
//! Every run owns its output directory, writes CSV/JSON artifacts plus a
//! manifest (config hash, versions, seeds, wall time, per-file content
//! hashes), and exits 0 only if all enabled assertions pass.  A rerun
//! with an unchanged config hash is skipped unless `--force`.

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fracheat_cli::config::ExperimentConfig;
use fracheat_cli::manifest::{now_unix, sha256_hex, up_to_date, write_manifest, Manifest};
use fracheat_cli::modes;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "fracheat", version, about = "numerical laboratory for subdiffusive stochastic heat equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    KernelVerify,
    MomentOracle,
    Simulate,
    Excitation,
    Hoelder,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::KernelVerify => "kernel-verify",
            Mode::MomentOracle => "moment-oracle",
            Mode::Simulate => "simulate",
            Mode::Excitation => "excitation",
            Mode::Hoelder => "hoelder",
        }
    }
}

#[derive(clap::Args)]
struct CommonArgs {
    /// experiment configuration (flat TOML, unknown keys rejected)
    #[arg(long)]
    config: PathBuf,
    /// output directory (created if missing; owns the run's artifacts)
    #[arg(long)]
    out: PathBuf,
    /// overrides the config's base seed
    #[arg(long)]
    seed: Option<u64>,
    /// overrides the config's replica count
    #[arg(long)]
    replicas: Option<u64>,
    /// rerun even when the manifest says the config hash is unchanged
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// verify the kernel estimates for one parameter set
    KernelVerify(CommonArgs),
    /// flat-data Volterra oracle vs the closed moment curve
    MomentOracle(CommonArgs),
    /// Monte Carlo ensemble with moment statistics
    Simulate(CommonArgs),
    /// excitation-index fit across the noise-level grid
    Excitation(CommonArgs),
    /// temporal regularity fit for the colored equation
    Hoelder(CommonArgs),
}

fn main() {
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::KernelVerify(a) => (Mode::KernelVerify, a),
        Command::MomentOracle(a) => (Mode::MomentOracle, a),
        Command::Simulate(a) => (Mode::Simulate, a),
        Command::Excitation(a) => (Mode::Excitation, a),
        Command::Hoelder(a) => (Mode::Hoelder, a),
    };
    match run(mode, &args) {
        Ok(pass) => {
            if !pass {
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(mode: Mode, args: &CommonArgs) -> Result<bool> {
    let (cfg, raw) = ExperimentConfig::from_path(&args.config)?;
    cfg.check_mode(mode.name())?;
    // seed/replica overrides participate in the identity of the run
    let mut hash_input = raw.clone();
    if let Some(s) = args.seed {
        hash_input.extend_from_slice(format!("\n#seed-override={s}").as_bytes());
    }
    if let Some(r) = args.replicas {
        hash_input.extend_from_slice(format!("\n#replicas-override={r}").as_bytes());
    }
    let config_hash = sha256_hex(&hash_input);
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    if !args.force {
        if let Some(m) = up_to_date(&args.out, &config_hash) {
            println!("up-to-date: {} run with matching config hash (pass = {})", m.mode, m.pass);
            return Ok(m.pass);
        }
    }
    let started = Instant::now();
    let outcome = match mode {
        Mode::KernelVerify => modes::kernel_verify::run(&cfg, &args.out)?,
        Mode::MomentOracle => modes::moment_oracle::run(&cfg, &args.out)?,
        Mode::Simulate => modes::simulate_mode::run(&cfg, &args.out, args.seed, args.replicas)?,
        Mode::Excitation => modes::excitation::run(&cfg, &args.out, args.seed, args.replicas)?,
        Mode::Hoelder => modes::hoelder::run(&cfg, &args.out, args.seed, args.replicas)?,
    };
    let pass = outcome.pass();
    for c in &outcome.checks {
        println!("[{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    let manifest = Manifest {
        config_sha256: config_hash,
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        mode: mode.name().to_string(),
        seed: args.seed.or(cfg.seed),
        replicas: args.replicas.or(cfg.replicas),
        started_unix: now_unix(),
        wall_seconds: started.elapsed().as_secs_f64(),
        outputs: outcome.outputs,
        checks: outcome.checks,
        pass,
    };
    write_manifest(&args.out, &manifest)?;
    println!("{}: {} ({}s)", mode.name(), if pass { "all checks passed" } else { "CHECKS FAILED" }, manifest.wall_seconds.round());
    Ok(pass)
}
