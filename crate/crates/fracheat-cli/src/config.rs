//! Flat, strictly-typed experiment configuration.
//!
//! The file format is TOML restricted to a single flat table; unknown
//! keys are hard errors (silent typos are the dominant failure mode in
//! numerics configs).  Field names carry their units: `horizon_t` and
//! `fit_time_t` are model time, `domain_len` is the spatial period.

use anyhow::{bail, Context};
use fracheat::kernel::{InitialData, ModelParams, NoiseSpec, SigmaSpec};
use fracheat::mcsim::GridSpec;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// must match the invoked subcommand when present
    pub mode: Option<String>,

    // model
    pub beta: f64,
    pub alpha: f64,
    pub nu: f64,
    pub dim: usize,
    /// "white" | "colored"
    pub noise: String,
    pub riesz_gamma: Option<f64>,
    pub lambda: Option<f64>,
    /// "linear" | "clipped-affine"
    #[serde(default = "default_sigma")]
    pub sigma: String,
    #[serde(default = "default_one")]
    pub sigma_slope: f64,
    pub sigma_clip: Option<f64>,
    #[serde(default = "default_one")]
    pub u0_const: f64,

    // grid (simulation modes)
    pub domain_len: Option<f64>,
    pub nx: Option<usize>,
    pub horizon_t: Option<f64>,
    pub nt: Option<usize>,
    pub snapshot_times: Option<Vec<f64>>,
    pub replicas: Option<u64>,
    pub seed: Option<u64>,

    // deterministic-oracle controls
    pub dt_oracle: Option<f64>,

    // excitation controls
    pub lambdas: Option<Vec<f64>>,
    pub fit_time_t: Option<f64>,
    /// admissibility threshold on log(M/u0²); the double log is
    /// meaningless near zero, so small-moment points are cut and the cut
    /// is recorded in the estimate
    pub double_log_cut: Option<f64>,
    /// "oracle" | "mc"
    pub excitation_pipeline: Option<String>,

    // temporal-regularity controls
    pub holder_base_t: Option<f64>,
    pub holder_lags: Option<usize>,
    pub holder_probe_index: Option<usize>,

    #[serde(default = "default_true")]
    pub x_average: bool,
}

fn default_sigma() -> String {
    "linear".into()
}

fn default_one() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn from_path(path: &std::path::Path) -> anyhow::Result<(ExperimentConfig, Vec<u8>)> {
        let bytes = std::fs::read(path).with_context(|| format!("reading config {}", path.display()))?;
        let text = std::str::from_utf8(&bytes).context("config is not UTF-8")?;
        let cfg: ExperimentConfig = toml::from_str(text).context("parsing config")?;
        Ok((cfg, bytes))
    }

    pub fn sigma_spec(&self) -> anyhow::Result<SigmaSpec> {
        match self.sigma.as_str() {
            "linear" => Ok(SigmaSpec::linear(self.sigma_slope)),
            "clipped-affine" => {
                let clip = self.sigma_clip.context("clipped-affine sigma needs sigma_clip")?;
                Ok(SigmaSpec::clipped_affine(self.sigma_slope, clip))
            }
            other => bail!("unknown sigma kind {other:?} (expected \"linear\" or \"clipped-affine\")"),
        }
    }

    pub fn noise_spec(&self) -> anyhow::Result<NoiseSpec> {
        match self.noise.as_str() {
            "white" => Ok(NoiseSpec::White),
            "colored" => {
                let gamma = self.riesz_gamma.context("colored noise needs riesz_gamma")?;
                Ok(NoiseSpec::Colored { gamma })
            }
            other => bail!("unknown noise kind {other:?} (expected \"white\" or \"colored\")"),
        }
    }

    /// Model parameters with the validity predicates applied; a failed
    /// predicate surfaces with the violated inequality named.
    pub fn model(&self, lambda_override: Option<f64>) -> anyhow::Result<ModelParams> {
        let lambda = lambda_override.or(self.lambda).unwrap_or(1.0);
        let params = ModelParams::new(
            self.beta,
            self.alpha,
            self.nu,
            self.dim,
            self.noise_spec()?,
            lambda,
            self.sigma_spec()?,
        )?;
        Ok(params)
    }

    pub fn grid(&self) -> anyhow::Result<GridSpec> {
        let g = GridSpec::new(
            self.domain_len.context("simulation modes need domain_len")?,
            self.nx.context("simulation modes need nx")?,
            self.horizon_t.context("simulation modes need horizon_t")?,
            self.nt.context("simulation modes need nt")?,
        )?;
        Ok(g)
    }

    pub fn initial_data(&self) -> InitialData {
        InitialData::Const(self.u0_const)
    }

    pub fn check_mode(&self, invoked: &str) -> anyhow::Result<()> {
        if let Some(m) = &self.mode {
            if m != invoked {
                bail!("config declares mode {m:?} but the {invoked:?} subcommand was invoked");
            }
        }
        Ok(())
    }
}
