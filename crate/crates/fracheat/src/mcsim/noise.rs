//! Noise synthesis on the periodic grid.
//!
//! White noise: i.i.d. cell masses N(0, dt·dx).
//!
//! Colored noise: each step carries an independent stationary Gaussian
//! field whose covariance is the periodized, cell-regularized Riesz
//! kernel; sampling goes through the circulant spectral factorization,
//! which is exact on the torus.  Cell regularization: the covariance of
//! integrated cell masses is the double cell integral of |x-y|^{-γ},
//! a second difference of the even antiderivative G(a) = |a|^{2-γ}/((1-γ)(2-γ)).

use super::GridSpec;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::Fft;
use std::sync::Arc;

/// Number of torus images summed on each side of the principal term.
const IMAGES: i64 = 3;

/// Cell-integrated covariance targets dt·D(j) of the colored cell masses,
/// exposed so tests can compare empirical covariances against the same
/// periodization the sampler uses.
pub fn colored_covariance_targets(grid: &GridSpec, gamma: f64, dt: f64) -> Vec<f64> {
    let dx = grid.dx();
    let big_g = |a: f64| a.abs().powf(2.0 - gamma) / ((1.0 - gamma) * (2.0 - gamma));
    let cell_pair = |r: f64| big_g(r + dx) - 2.0 * big_g(r) + big_g(r - dx);
    (0..grid.nx)
        .map(|j| {
            let mut c = 0.0;
            for m in -IMAGES..=IMAGES {
                let r = j as f64 * dx + m as f64 * grid.domain_len;
                c += cell_pair(r);
            }
            dt * c
        })
        .collect()
}

/// Circulant sampler for the colored per-step field.
pub struct ColoredNoiseSynth {
    sqrt_eigs: Vec<f64>,
    ifft: Arc<dyn Fft<f64>>,
    nx: usize,
}

impl ColoredNoiseSynth {
    pub fn new(grid: &GridSpec, gamma: f64, dt: f64, ifft: Arc<dyn Fft<f64>>) -> Result<ColoredNoiseSynth> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::domain("colored_noise", format!("gamma = {gamma} not in (0,1) for d = 1")));
        }
        let targets = colored_covariance_targets(grid, gamma, dt);
        // eigenvalues of the circulant: the DFT of the first row (real and
        // symmetric, so the eigenvalues are real)
        let nx = grid.nx;
        let mut buf: Vec<Complex64> = targets.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        // forward DFT via conj-ifft trick is unnecessary; compute directly
        let fft = rustfft::FftPlanner::new().plan_fft_forward(nx);
        fft.process(&mut buf);
        let max_eig = buf.iter().map(|z| z.re).fold(0.0f64, f64::max);
        let min_eig = buf.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        if min_eig < -1e-8 * max_eig {
            return Err(Error::EmbeddingNotPsd { min_eig, needed: -min_eig });
        }
        let sqrt_eigs = buf.iter().map(|z| z.re.max(0.0).sqrt()).collect();
        Ok(ColoredNoiseSynth { sqrt_eigs, ifft, nx })
    }

    /// Draw one per-step field of cell masses into `out`; consumes exactly
    /// `nx` standard normals from `rng` in a fixed order.
    pub fn sample<R: Rng>(&self, rng: &mut R, scratch: &mut [Complex64], out: &mut [f64]) {
        let nx = self.nx;
        let half = nx / 2;
        let inv_sqrt_nx = 1.0 / (nx as f64).sqrt();
        // Hermitian spectral draw: bins 0 and nx/2 real, the rest paired
        let z0: f64 = rng.sample(StandardNormal);
        let zh: f64 = rng.sample(StandardNormal);
        scratch[0] = Complex64::new(self.sqrt_eigs[0] * z0, 0.0);
        scratch[half] = Complex64::new(self.sqrt_eigs[half] * zh, 0.0);
        for k in 1..half {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            let w = Complex64::new(a, b) * (0.5f64).sqrt() * self.sqrt_eigs[k];
            scratch[k] = w;
            scratch[nx - k] = w.conj();
        }
        self.ifft.process(scratch);
        for (o, z) in out.iter_mut().zip(scratch.iter()) {
            *o = z.re * inv_sqrt_nx;
        }
    }
}

/// One step of white cell masses: i.i.d. N(0, dt·dx), `nx` draws.
pub fn sample_white<R: Rng>(rng: &mut R, std: f64, out: &mut [f64]) {
    for o in out.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *o = std * z;
    }
}
