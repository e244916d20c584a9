//! The history-sum time stepper, its classical Markovian collapse, the
//! coupled coarse/fine refinement driver, and the exact discrete
//! second-moment recursion used to quantify scheme bias without
//! sampling.

use super::ensemble::FieldEnsemble;
use super::noise::{sample_white, ColoredNoiseSynth};
use super::{GridSpec, LagRule, SpectralKernelCache};
use crate::error::{Error, Result};
use crate::kernel::{HeatKernel, InitialData, NoiseSpec};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

#[derive(Clone, Copy, Debug)]
pub struct SimOptions {
    pub lag_rule: LagRule,
    /// field magnitude cap; a replica crossing it aborts with a report
    pub blow_up_cap: f64,
    /// replica budget per base seed (stream ids beyond it error out)
    pub stream_budget: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { lag_rule: LagRule::PanelRms, blow_up_cap: 1e12, stream_budget: 1 << 32 }
    }
}

struct SchemeContext {
    cache: SpectralKernelCache,
    u0_hat: Vec<Complex64>,
    u0_grid: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    colored: Option<ColoredNoiseSynth>,
    white_std: f64,
    lambda_over_dx: f64,
    snapshot_indices: Vec<usize>,
}

fn build_context(
    kernel: &HeatKernel,
    grid: &GridSpec,
    u0: &InitialData,
    snapshot_times: &[f64],
    options: &SimOptions,
) -> Result<SchemeContext> {
    u0.validate()?;
    let p = kernel.params();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(grid.nx);
    let ifft = planner.plan_fft_inverse(grid.nx);
    let cache = SpectralKernelCache::build(kernel, grid, options.lag_rule)?;
    let dx = grid.dx();
    let u0_grid: Vec<f64> = (0..grid.nx)
        .map(|j| u0.eval(-0.5 * grid.domain_len + (j as f64 + 0.5) * dx))
        .collect();
    let mut u0_hat: Vec<Complex64> = u0_grid.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft.process(&mut u0_hat);
    let colored = match p.noise {
        NoiseSpec::White => None,
        NoiseSpec::Colored { gamma } => {
            Some(ColoredNoiseSynth::new(grid, gamma, grid.dt(), ifft.clone())?)
        }
    };
    let snapshot_indices = snapshot_indices(grid, snapshot_times)?;
    Ok(SchemeContext {
        cache,
        u0_hat,
        u0_grid,
        fft,
        ifft,
        colored,
        white_std: (grid.dt() * dx).sqrt(),
        lambda_over_dx: p.lambda / dx,
        snapshot_indices,
    })
}

fn snapshot_indices(grid: &GridSpec, times: &[f64]) -> Result<Vec<usize>> {
    let dt = grid.dt();
    times
        .iter()
        .map(|&t| {
            let idx = (t / dt).round() as i64;
            if idx < 1 || idx as usize > grid.nt {
                return Err(Error::Grid(format!("snapshot time {t} outside (0, T]")));
            }
            if ((idx as f64) * dt - t).abs() > 1e-9 * dt.max(t) {
                return Err(Error::Grid(format!("snapshot time {t} not on the step grid (dt = {dt})")));
            }
            Ok(idx as usize)
        })
        .collect()
}

fn replica_rng(base_seed: u64, replica: u64, budget: u64) -> Result<ChaCha8Rng> {
    if replica >= budget {
        return Err(Error::SeedStreamExhausted { requested: replica, budget });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(replica + 1);
    Ok(rng)
}

/// One replica of the history-sum scheme; returns the requested snapshots.
fn run_replica(
    ctx: &SchemeContext,
    grid: &GridSpec,
    sigma: &crate::kernel::SigmaSpec,
    replica: u64,
    base_seed: u64,
    options: &SimOptions,
) -> Result<Vec<Vec<f64>>> {
    let nx = grid.nx;
    let nt = grid.nt;
    let half = nx / 2;
    let mut rng = replica_rng(base_seed, replica, options.stream_budget)?;
    // real fields have Hermitian spectra: the history keeps bins 0..=nx/2
    // and the upper half is reconstructed by conjugation before inverting
    let mut hist: Vec<Vec<Complex64>> = Vec::with_capacity(nt);
    let mut u = ctx.u0_grid.clone();
    let mut noise = vec![0.0f64; nx];
    let mut scratch = vec![Complex64::new(0.0, 0.0); nx];
    let mut acc_half = vec![Complex64::new(0.0, 0.0); half + 1];
    let mut full = vec![Complex64::new(0.0, 0.0); nx];
    let mut snaps: Vec<Vec<f64>> = vec![Vec::new(); ctx.snapshot_indices.len()];
    let inv_nx = 1.0 / nx as f64;
    for n in 1..=nt {
        // noise mass of panel n-1 against the current field
        match &ctx.colored {
            None => sample_white(&mut rng, ctx.white_std, &mut noise),
            Some(c) => c.sample(&mut rng, &mut scratch, &mut noise),
        }
        let mut w: Vec<Complex64> =
            u.iter().zip(&noise).map(|(&ui, &si)| Complex64::new(sigma.eval(ui) * si, 0.0)).collect();
        ctx.fft.process(&mut w);
        w.truncate(half + 1);
        hist.push(w);
        // frequency-space history sum on the half spectrum
        let det = ctx.cache.det_symbol(n);
        for k in 0..=half {
            acc_half[k] = ctx.u0_hat[k] * det[k];
        }
        for (m, w_m) in hist.iter().enumerate() {
            let amp = ctx.cache.amp(n - m);
            let lam = ctx.lambda_over_dx;
            for k in 0..=half {
                acc_half[k] += w_m[k] * (amp[k] * lam);
            }
        }
        full[..=half].copy_from_slice(&acc_half);
        for k in 1..half {
            full[nx - k] = acc_half[k].conj();
        }
        ctx.ifft.process(&mut full);
        let mut max_abs = 0.0f64;
        for (uj, a) in u.iter_mut().zip(&full) {
            *uj = a.re * inv_nx;
            max_abs = max_abs.max(uj.abs());
        }
        if !max_abs.is_finite() || max_abs > options.blow_up_cap {
            return Err(Error::BlowUp { replica, step: n, magnitude: max_abs, cap: options.blow_up_cap });
        }
        for (slot, &idx) in ctx.snapshot_indices.iter().enumerate() {
            if idx == n {
                snaps[slot] = u.clone();
            }
        }
    }
    Ok(snaps)
}

/// Monte Carlo ensemble of the discretized mild solution.
///
/// Replicas run in parallel (ordered collection keeps results and any
/// downstream reductions bit-identical across thread counts); replicas
/// that trip the blow-up guard are dropped from the ensemble and listed
/// in `aborted`.
pub fn simulate(
    kernel: &HeatKernel,
    grid: &GridSpec,
    u0: &InitialData,
    replicas: u64,
    base_seed: u64,
    snapshot_times: &[f64],
    options: &SimOptions,
) -> Result<FieldEnsemble> {
    grid.validate()?;
    kernel.params().validate()?;
    let ctx = build_context(kernel, grid, u0, snapshot_times, options)?;
    let sigma = kernel.params().sigma.clone();
    let results: Vec<std::result::Result<Vec<Vec<f64>>, String>> =
        crate::parallel::indexed_map(replicas as usize, |r| {
            run_replica(&ctx, grid, &sigma, r as u64, base_seed, options).map_err(|e| e.to_string())
        });
    let mut fields = Vec::with_capacity(replicas as usize);
    let mut aborted = Vec::new();
    for (r, res) in results.into_iter().enumerate() {
        match res {
            Ok(snaps) => fields.push(snaps),
            Err(msg) => aborted.push((r as u64, msg)),
        }
    }
    if fields.is_empty() && replicas > 0 {
        let (r, msg) = aborted.remove(0);
        return Err(Error::Ensemble(format!("all replicas aborted (first: replica {r}: {msg})")));
    }
    Ok(FieldEnsemble {
        params: kernel.params().clone(),
        grid: *grid,
        base_seed,
        requested_replicas: replicas,
        snapshot_times: snapshot_times.to_vec(),
        fields,
        aborted,
    })
}

/// Classical-limit (β = 1) Markovian stepper: a single-lag update that is
/// algebraically identical to the history sum when the symbol is an
/// exponential in the lag.  Exists to certify that collapse numerically.
pub fn simulate_markov_classical(
    kernel: &HeatKernel,
    grid: &GridSpec,
    u0: &InitialData,
    replicas: u64,
    base_seed: u64,
    snapshot_times: &[f64],
    options: &SimOptions,
) -> Result<FieldEnsemble> {
    let p = kernel.params();
    if !p.classical_limit() {
        return Err(Error::Validity {
            violated: "β = 1 (classical limit)",
            detail: format!("beta = {}", p.beta()),
        });
    }
    grid.validate()?;
    let ctx = build_context(kernel, grid, u0, snapshot_times, options)?;
    let sigma = p.sigma.clone();
    let nx = grid.nx;
    let dt = grid.dt();
    // one-step decay factors e^{-ν ξ² dt} (α = 2) or e^{-ν|ξ|^α dt}
    let step_sym: Vec<f64> = (0..nx)
        .map(|k| (-p.nu * grid.freq(k).abs().powf(p.alpha()) * dt).exp())
        .collect();
    let fresh = ctx.cache.amp(1).to_vec();
    let results: Vec<std::result::Result<Vec<Vec<f64>>, String>> =
        crate::parallel::indexed_map(replicas as usize, |r| {
            let mut rng = replica_rng(base_seed, r as u64, options.stream_budget).map_err(|e| e.to_string())?;
            let mut u = ctx.u0_grid.clone();
            let mut noise = vec![0.0f64; nx];
            let mut scratch = vec![Complex64::new(0.0, 0.0); nx];
            let mut u_hat_noise = vec![Complex64::new(0.0, 0.0); nx];
            let mut snaps: Vec<Vec<f64>> = vec![Vec::new(); ctx.snapshot_indices.len()];
            let inv_nx = 1.0 / nx as f64;
            for n in 1..=grid.nt {
                match &ctx.colored {
                    None => sample_white(&mut rng, ctx.white_std, &mut noise),
                    Some(c) => c.sample(&mut rng, &mut scratch, &mut noise),
                }
                let mut w: Vec<Complex64> = u
                    .iter()
                    .zip(&noise)
                    .map(|(&ui, &si)| Complex64::new(sigma.eval(ui) * si, 0.0))
                    .collect();
                ctx.fft.process(&mut w);
                for k in 0..nx {
                    u_hat_noise[k] = u_hat_noise[k] * step_sym[k] + w[k] * (fresh[k] * ctx.lambda_over_dx);
                }
                let det = ctx.cache.det_symbol(n);
                let mut out: Vec<Complex64> =
                    (0..nx).map(|k| ctx.u0_hat[k] * det[k] + u_hat_noise[k]).collect();
                ctx.ifft.process(&mut out);
                for (uj, a) in u.iter_mut().zip(&out) {
                    *uj = a.re * inv_nx;
                }
                for (slot, &idx) in ctx.snapshot_indices.iter().enumerate() {
                    if idx == n {
                        snaps[slot] = u.clone();
                    }
                }
            }
            Ok(snaps)
        });
    let mut fields = Vec::new();
    let mut aborted = Vec::new();
    for (r, res) in results.into_iter().enumerate() {
        match res {
            Ok(s) => fields.push(s),
            Err(msg) => aborted.push((r as u64, msg)),
        }
    }
    Ok(FieldEnsemble {
        params: p.clone(),
        grid: *grid,
        base_seed,
        requested_replicas: replicas,
        snapshot_times: snapshot_times.to_vec(),
        fields,
        aborted,
    })
}

/// Coupled coarse/fine pair: the fine grid doubles (nt, nx); each coarse
/// noise mass is the sum of its 2×2 block of fine masses, so the two
/// discretizations share one underlying noise realization and their
/// moment discrepancies are strongly correlated.
pub fn simulate_coupled(
    kernel: &HeatKernel,
    coarse: &GridSpec,
    u0: &InitialData,
    replicas: u64,
    base_seed: u64,
    snapshot_times: &[f64],
    options: &SimOptions,
) -> Result<(FieldEnsemble, FieldEnsemble)> {
    let p = kernel.params();
    if !matches!(p.noise, NoiseSpec::White) {
        return Err(Error::Validity {
            violated: "white noise",
            detail: "the coupled refinement aggregates white cell masses".into(),
        });
    }
    let fine = GridSpec { domain_len: coarse.domain_len, nx: coarse.nx * 2, horizon: coarse.horizon, nt: coarse.nt * 2, dim: 1 };
    let ctx_c = build_context(kernel, coarse, u0, snapshot_times, options)?;
    let ctx_f = build_context(kernel, &fine, u0, snapshot_times, options)?;
    let sigma = p.sigma.clone();
    type Snaps = Vec<Vec<f64>>;
    let results: Vec<std::result::Result<(Snaps, Snaps), String>> =
        crate::parallel::indexed_map(replicas as usize, |r| {
            run_coupled_replica(&ctx_c, &ctx_f, coarse, &fine, &sigma, r as u64, base_seed, options)
                .map_err(|e| e.to_string())
        });
    let mut fields_c = Vec::new();
    let mut fields_f = Vec::new();
    let mut aborted = Vec::new();
    for (r, res) in results.into_iter().enumerate() {
        match res {
            Ok((c, f)) => {
                fields_c.push(c);
                fields_f.push(f);
            }
            Err(msg) => aborted.push((r as u64, msg)),
        }
    }
    let mk = |fields: Vec<Snaps>, grid: &GridSpec, aborted: Vec<(u64, String)>| FieldEnsemble {
        params: p.clone(),
        grid: *grid,
        base_seed,
        requested_replicas: replicas,
        snapshot_times: snapshot_times.to_vec(),
        fields,
        aborted,
    };
    Ok((mk(fields_c, coarse, aborted.clone()), mk(fields_f, &fine, aborted)))
}

#[allow(clippy::too_many_arguments)]
fn run_coupled_replica(
    ctx_c: &SchemeContext,
    ctx_f: &SchemeContext,
    coarse: &GridSpec,
    fine: &GridSpec,
    sigma: &crate::kernel::SigmaSpec,
    replica: u64,
    base_seed: u64,
    options: &SimOptions,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let mut rng = replica_rng(base_seed, replica, options.stream_budget)?;
    let nxc = coarse.nx;
    let mut state_f = HalfSpectrumState::new(ctx_f, fine);
    let mut state_c = HalfSpectrumState::new(ctx_c, coarse);
    let mut noise_f = vec![0.0f64; fine.nx];
    let mut coarse_mass = vec![0.0f64; nxc];
    for nf in 1..=fine.nt {
        sample_white(&mut rng, ctx_f.white_std, &mut noise_f);
        // aggregate fine masses into the enclosing coarse cells
        for j in 0..nxc {
            coarse_mass[j] += noise_f[2 * j] + noise_f[2 * j + 1];
        }
        state_f.step(ctx_f, sigma, &noise_f, nf, replica, options)?;
        // on coarse boundaries, advance the coarse scheme with block sums
        if nf % 2 == 0 {
            let nc = nf / 2;
            state_c.step(ctx_c, sigma, &coarse_mass, nc, replica, options)?;
            coarse_mass.fill(0.0);
        }
    }
    Ok((state_c.snaps, state_f.snaps))
}

/// Shared half-spectrum stepping state for one scheme instance.
struct HalfSpectrumState {
    u: Vec<f64>,
    hist: Vec<Vec<Complex64>>,
    acc_half: Vec<Complex64>,
    full: Vec<Complex64>,
    snaps: Vec<Vec<f64>>,
    nx: usize,
}

impl HalfSpectrumState {
    fn new(ctx: &SchemeContext, grid: &GridSpec) -> HalfSpectrumState {
        HalfSpectrumState {
            u: ctx.u0_grid.clone(),
            hist: Vec::with_capacity(grid.nt),
            acc_half: vec![Complex64::new(0.0, 0.0); grid.nx / 2 + 1],
            full: vec![Complex64::new(0.0, 0.0); grid.nx],
            snaps: vec![Vec::new(); ctx.snapshot_indices.len()],
            nx: grid.nx,
        }
    }

    fn step(
        &mut self,
        ctx: &SchemeContext,
        sigma: &crate::kernel::SigmaSpec,
        noise: &[f64],
        n: usize,
        replica: u64,
        options: &SimOptions,
    ) -> Result<()> {
        let nx = self.nx;
        let half = nx / 2;
        let inv_nx = 1.0 / nx as f64;
        let mut w: Vec<Complex64> = self
            .u
            .iter()
            .zip(noise)
            .map(|(&ui, &si)| Complex64::new(sigma.eval(ui) * si, 0.0))
            .collect();
        ctx.fft.process(&mut w);
        w.truncate(half + 1);
        self.hist.push(w);
        let det = ctx.cache.det_symbol(n);
        for k in 0..=half {
            self.acc_half[k] = ctx.u0_hat[k] * det[k];
        }
        for (m, w_m) in self.hist.iter().enumerate() {
            let amp = ctx.cache.amp(n - m);
            let lam = ctx.lambda_over_dx;
            for k in 0..=half {
                self.acc_half[k] += w_m[k] * (amp[k] * lam);
            }
        }
        self.full[..=half].copy_from_slice(&self.acc_half);
        for k in 1..half {
            self.full[nx - k] = self.acc_half[k].conj();
        }
        ctx.ifft.process(&mut self.full);
        let mut max_abs = 0.0f64;
        for (uj, a) in self.u.iter_mut().zip(&self.full) {
            *uj = a.re * inv_nx;
            max_abs = max_abs.max(uj.abs());
        }
        if !max_abs.is_finite() || max_abs > options.blow_up_cap {
            return Err(Error::BlowUp { replica, step: n, magnitude: max_abs, cap: options.blow_up_cap });
        }
        for (slot, &idx) in ctx.snapshot_indices.iter().enumerate() {
            if idx == n {
                self.snaps[slot] = self.u.clone();
            }
        }
        Ok(())
    }
}

/// Exact second-moment recursion of the *discrete* scheme for linear σ
/// and flat data under white noise:
/// M_n = u0² + λ² Σ_{m<n} Q_{n-m} M_m with
/// Q_l = dt/(dx·nx) Σ_k amp_l[k]², the lattice Walsh isometry.
/// Quantifies time/space discretization bias with no sampling at all.
pub fn discrete_flat_moment(
    kernel: &HeatKernel,
    grid: &GridSpec,
    u0: f64,
    options: &SimOptions,
) -> Result<Vec<f64>> {
    let p = kernel.params();
    if !matches!(p.noise, NoiseSpec::White) {
        return Err(Error::Validity { violated: "white noise", detail: "colored recursion not closed".into() });
    }
    if !p.sigma.is_identity() {
        return Err(Error::Validity { violated: "σ(x) = x", detail: "recursion closes for linear σ".into() });
    }
    let cache = SpectralKernelCache::build(kernel, grid, options.lag_rule)?;
    let factor = grid.dt() / (grid.dx() * grid.nx as f64);
    let q: Vec<f64> = (1..=grid.nt)
        .map(|l| factor * cache.amp(l).iter().map(|a| a * a).sum::<f64>())
        .collect();
    let lam2 = p.lambda * p.lambda;
    let mut m = vec![u0 * u0; grid.nt + 1];
    for n in 1..=grid.nt {
        let mut conv = 0.0;
        for j in 0..n {
            conv += q[n - j - 1] * m[j];
        }
        m[n] = u0 * u0 + lam2 * conv;
    }
    Ok(m)
}
