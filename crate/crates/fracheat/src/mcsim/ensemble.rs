//! Ensemble statistics and the binary snapshot container.

use super::GridSpec;
use crate::error::{Error, Result};
use crate::kernel::{ModelParams, NoiseSpec};
use crate::moments::MomentCurve;
use crate::util::fit;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

/// Monte Carlo replicas of the discretized mild solution.
#[derive(Clone, Debug)]
pub struct FieldEnsemble {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub base_seed: u64,
    pub requested_replicas: u64,
    pub snapshot_times: Vec<f64>,
    /// fields[replica][snapshot][x]
    pub fields: Vec<Vec<Vec<f64>>>,
    /// replicas dropped by the blow-up guard, with their reports
    pub aborted: Vec<(u64, String)>,
}

impl FieldEnsemble {
    pub fn n_replicas(&self) -> usize {
        self.fields.len()
    }

    /// Partial ensembles (aborted replicas) carry a bias flag.
    pub fn biased(&self) -> bool {
        !self.aborted.is_empty()
    }
}

/// Second-moment estimates with bootstrap standard errors and the
/// discrete energy ℰ_t = sqrt(Σ_x E|u_t(x)|² dx).
#[derive(Clone, Debug, Serialize)]
pub struct SecondMomentStats {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub se: Vec<f64>,
    pub energy: Vec<f64>,
    pub energy_se: Vec<f64>,
    pub x_averaged: bool,
    pub n_replicas: usize,
    pub biased: bool,
}

impl SecondMomentStats {
    pub fn curve(&self) -> MomentCurve {
        MomentCurve {
            times: self.times.clone(),
            values: self.mean.clone(),
            log_values: self.mean.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect(),
            meta: if self.x_averaged { "mc_xavg".into() } else { "mc_point".into() },
        }
    }

    /// CSV body `t,moment,se,energy,energy_se`.
    pub fn csv(&self) -> String {
        let mut out = String::from("t,moment,se,energy,energy_se\n");
        for i in 0..self.times.len() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                self.times[i], self.mean[i], self.se[i], self.energy[i], self.energy_se[i]
            ));
        }
        out
    }
}

/// Pointwise (grid midpoint) or space-averaged second moments with
/// replica-bootstrap errors.  All reductions run in replica order, so the
/// output is reproducible bit for bit.
pub fn second_moment(ensemble: &FieldEnsemble, x_average: bool) -> Result<SecondMomentStats> {
    let n_rep = ensemble.n_replicas();
    if n_rep == 0 {
        return Err(Error::Ensemble("empty ensemble".into()));
    }
    let n_t = ensemble.snapshot_times.len();
    let dx = ensemble.grid.dx();
    let probe = ensemble.grid.nx / 2;
    // per-replica statistics per snapshot: (moment estimate, Σ_x |u|² dx)
    let mut per_rep: Vec<Vec<(f64, f64)>> = Vec::with_capacity(n_rep);
    for rep in &ensemble.fields {
        let mut row = Vec::with_capacity(n_t);
        for snap in rep {
            let sum_sq: f64 = snap.iter().map(|v| v * v).sum();
            let est = if x_average { sum_sq / snap.len() as f64 } else { snap[probe] * snap[probe] };
            row.push((est, sum_sq * dx));
        }
        per_rep.push(row);
    }
    let mut mean = vec![0.0; n_t];
    let mut energy_sq = vec![0.0; n_t];
    for row in &per_rep {
        for (i, &(m, e)) in row.iter().enumerate() {
            mean[i] += m;
            energy_sq[i] += e;
        }
    }
    for i in 0..n_t {
        mean[i] /= n_rep as f64;
        energy_sq[i] /= n_rep as f64;
    }
    let energy: Vec<f64> = energy_sq.iter().map(|e| e.sqrt()).collect();
    // replica bootstrap with a deterministic resampling stream
    const BOOT: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(ensemble.base_seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut se = vec![0.0; n_t];
    let mut energy_se = vec![0.0; n_t];
    let mut boot_mean = vec![vec![0.0f64; BOOT]; n_t];
    let mut boot_energy = vec![vec![0.0f64; BOOT]; n_t];
    for b in 0..BOOT {
        let mut acc = vec![(0.0f64, 0.0f64); n_t];
        for _ in 0..n_rep {
            let pick = rng.random_range(0..n_rep);
            for (i, a) in acc.iter_mut().enumerate() {
                a.0 += per_rep[pick][i].0;
                a.1 += per_rep[pick][i].1;
            }
        }
        for i in 0..n_t {
            boot_mean[i][b] = acc[i].0 / n_rep as f64;
            boot_energy[i][b] = (acc[i].1 / n_rep as f64).sqrt();
        }
    }
    for i in 0..n_t {
        se[i] = std_dev(&boot_mean[i]);
        energy_se[i] = std_dev(&boot_energy[i]);
    }
    Ok(SecondMomentStats {
        times: ensemble.snapshot_times.clone(),
        mean,
        se,
        energy,
        energy_se,
        x_averaged: x_average,
        n_replicas: n_rep,
        biased: ensemble.biased(),
    })
}

fn std_dev(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Fitted temporal regularity from mean-square increments.
#[derive(Clone, Debug, Serialize)]
pub struct HolderFit {
    pub lags: Vec<f64>,
    pub mean_sq_increment: Vec<f64>,
    /// fitted exponent = slope of log E|Δu|² on log h, divided by 2
    pub exponent: f64,
    pub exponent_se: f64,
    /// (α - βγ)/(2α), the admissible-exponent supremum
    pub theoretical: f64,
}

/// Temporal increment regression at one spatial point.  Snapshot 0 is the
/// base time; the remaining snapshots are the lags.  Colored noise only
/// (the estimate targets the colored-noise regularity statement), and at
/// least 32 lags are required.
pub fn holder_increments(ensemble: &FieldEnsemble, x_index: usize) -> Result<HolderFit> {
    let p = &ensemble.params;
    let NoiseSpec::Colored { gamma } = p.noise else {
        return Err(Error::Validity {
            violated: "colored noise",
            detail: "temporal regularity fit targets the colored equation".into(),
        });
    };
    let n_lags = ensemble.snapshot_times.len().saturating_sub(1);
    if n_lags < 32 {
        return Err(Error::InsufficientLags { got: n_lags, need: 32 });
    }
    if ensemble.n_replicas() == 0 {
        return Err(Error::Ensemble("empty ensemble".into()));
    }
    let base_t = ensemble.snapshot_times[0];
    let mut lags = Vec::with_capacity(n_lags);
    let mut msq = vec![0.0f64; n_lags];
    for i in 1..=n_lags {
        lags.push(ensemble.snapshot_times[i] - base_t);
    }
    if lags.iter().any(|&h| h <= 0.0) {
        return Err(Error::Ensemble("lag times must exceed the base snapshot time".into()));
    }
    for rep in &ensemble.fields {
        let base = rep[0][x_index];
        for i in 1..=n_lags {
            let d = rep[i][x_index] - base;
            msq[i - 1] += d * d;
        }
    }
    for v in msq.iter_mut() {
        *v /= ensemble.n_replicas() as f64;
    }
    let f = fit::log_log_slope(&lags, &msq);
    let theoretical = (p.alpha() - p.beta() * gamma) / (2.0 * p.alpha());
    Ok(HolderFit {
        lags,
        mean_sq_increment: msq,
        exponent: f.slope / 2.0,
        exponent_se: f.slope_se / 2.0,
        theoretical,
    })
}

#[derive(Serialize, Deserialize)]
struct ContainerHeader {
    magic: String,
    version: u32,
    params: ModelParams,
    grid: GridSpec,
    base_seed: u64,
    requested_replicas: u64,
    snapshot_times: Vec<f64>,
    stored_replicas: u64,
    aborted: Vec<(u64, String)>,
}

const MAGIC: &str = "fracheat-ensemble";

/// Persist an ensemble: a JSON header (length-prefixed) followed by the
/// row-major little-endian f64 payload [replica][snapshot][x].
pub fn write_container(path: &Path, ensemble: &FieldEnsemble) -> Result<()> {
    let header = ContainerHeader {
        magic: MAGIC.into(),
        version: 1,
        params: ensemble.params.clone(),
        grid: ensemble.grid,
        base_seed: ensemble.base_seed,
        requested_replicas: ensemble.requested_replicas,
        snapshot_times: ensemble.snapshot_times.clone(),
        stored_replicas: ensemble.fields.len() as u64,
        aborted: ensemble.aborted.clone(),
    };
    let header_bytes = serde_json::to_vec(&header).map_err(|e| Error::Container(e.to_string()))?;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(&(header_bytes.len() as u64).to_le_bytes())?;
    f.write_all(&header_bytes)?;
    for rep in &ensemble.fields {
        for snap in rep {
            for &v in snap {
                f.write_all(&v.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn read_container(path: &Path) -> Result<FieldEnsemble> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut len8 = [0u8; 8];
    f.read_exact(&mut len8)?;
    let hlen = u64::from_le_bytes(len8) as usize;
    if hlen > 1 << 24 {
        return Err(Error::Container(format!("implausible header length {hlen}")));
    }
    let mut hbytes = vec![0u8; hlen];
    f.read_exact(&mut hbytes)?;
    let header: ContainerHeader =
        serde_json::from_slice(&hbytes).map_err(|e| Error::Container(format!("bad header: {e}")))?;
    if header.magic != MAGIC {
        return Err(Error::Container(format!("bad magic {:?}", header.magic)));
    }
    if header.version != 1 {
        return Err(Error::Container(format!("unsupported version {}", header.version)));
    }
    let n_t = header.snapshot_times.len();
    let nx = header.grid.nx;
    let mut fields = Vec::with_capacity(header.stored_replicas as usize);
    let mut buf = vec![0u8; nx * 8];
    for _ in 0..header.stored_replicas {
        let mut rep = Vec::with_capacity(n_t);
        for _ in 0..n_t {
            f.read_exact(&mut buf)?;
            let snap: Vec<f64> =
                buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
            rep.push(snap);
        }
        fields.push(rep);
    }
    Ok(FieldEnsemble {
        params: header.params,
        grid: header.grid,
        base_seed: header.base_seed,
        requested_replicas: header.requested_replicas,
        snapshot_times: header.snapshot_times,
        fields,
        aborted: header.aborted,
    })
}
