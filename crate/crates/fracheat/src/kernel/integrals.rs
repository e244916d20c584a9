//! Squared and Riesz-weighted kernel integrals with their closed-form
//! scaling constants, the temporal increment functional, and the
//! covariance smoothing double integral.
//!
//! Fourier convention throughout: forward transform e^{-iξx}, inverse
//! carries (2π)^{-d}.  Under that convention
//!
//! ```text
//! ∫ G_t² dx            = (2π)^{-d} ∫ Ĝ_t² dξ          = C*  t^{-βd/α},
//! ∫ Ĝ_t² |ξ|^{γ-d} dξ  (no (2π)^{-d} — already ξ-side) = C*₁ t^{-βγ/α}.
//! ```

use super::{riesz_fourier_constant, sphere_area, HeatKernel};
use crate::error::{Error, Result};
use crate::specfun::{gamma_fn, ml_neg_value, recip_gamma};
use crate::util::quad;
use std::f64::consts::PI;

/// Where the algebraic symbol expansion takes over from quadrature.
const Z_ASM: f64 = 150.0;
const K_ASM: usize = 6;

impl HeatKernel {
    /// M(c) = ∫_0^∞ z^{c-1} E_β(-z)² dz for 0 < c < 2.
    pub fn ml_squared_integral(&self, c: f64) -> Result<f64> {
        if !(c > 0.0 && c < 2.0) {
            return Err(Error::Divergence {
                op: "ml_squared_integral",
                condition: format!("0 < c < 2 (got c = {c})"),
            });
        }
        let beta = self.params().beta();
        if beta == 1.0 {
            // ∫ z^{c-1} e^{-2z} dz = Γ(c) / 2^c
            return Ok(gamma_fn(c) / 2f64.powf(c));
        }
        let f = |z: f64| {
            if z <= 0.0 {
                return 0.0;
            }
            let e = ml_neg_value(beta, z);
            z.powf(c - 1.0) * e * e
        };
        let mut pts: Vec<f64> = vec![0.0];
        let mut z = 1e-6;
        while z < Z_ASM {
            pts.push(z);
            z *= 2.0;
        }
        pts.push(Z_ASM);
        let head = quad::adaptive_with_breakpoints(&f, &pts, 1e-14, 1e-11).value;
        // tail: (Σ_k a_k z^{-k})² integrated termwise, a_k = (-1)^{k+1}/Γ(1-βk)
        let mut tail = 0.0;
        let a: Vec<f64> = (1..=K_ASM)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * recip_gamma(1.0 - beta * k as f64)
            })
            .collect();
        for m in 2..=(2 * K_ASM) {
            let mut b_m = 0.0;
            for j in 1..m {
                let k = m - j;
                if j <= K_ASM && k <= K_ASM {
                    b_m += a[j - 1] * a[k - 1];
                }
            }
            if b_m != 0.0 {
                tail += b_m * Z_ASM.powf(c - m as f64) / (m as f64 - c);
            }
        }
        Ok(head + tail)
    }

    /// C* of ∫G_t² dx = C* t^{-βd/α}; requires d < 2α.
    pub fn c_star(&self) -> Result<f64> {
        let d = self.params().dim as f64;
        let alpha = self.params().alpha();
        if !(d < 2.0 * alpha) {
            return Err(Error::Divergence { op: "l2_norm", condition: format!("d < 2α (d = {d}, α = {alpha})") });
        }
        let m = self.ml_squared_integral(d / alpha)?;
        Ok(self.params().nu.powf(-d / alpha) * sphere_area(self.params().dim)
            / (alpha * (2.0 * PI).powf(d))
            * m)
    }

    /// ∫G_t² dx two ways: (direct Plancherel quadrature, C* t^{-βd/α}).
    pub fn l2_norm(&self, t: f64) -> Result<(f64, f64)> {
        let d = self.params().dim as f64;
        let alpha = self.params().alpha();
        let beta = self.params().beta();
        if !(d < 2.0 * alpha) {
            return Err(Error::Divergence { op: "l2_norm", condition: format!("d < 2α (d = {d}, α = {alpha})") });
        }
        let direct = self.weighted_symbol_sq_integral(t, d)? / (2.0 * PI).powf(d);
        let closed = self.c_star()? * t.powf(-beta * d / alpha);
        Ok((direct, closed))
    }

    /// C*₁ of ∫Ĝ_t²|ξ|^{γ-d}dξ = C*₁ t^{-βγ/α}; requires γ < 2α.
    pub fn c_star_gamma(&self) -> Result<f64> {
        let gamma = self.params().gamma().ok_or_else(|| Error::Domain {
            op: "riesz_weighted_l2",
            msg: "colored-noise parameters required".into(),
        })?;
        let alpha = self.params().alpha();
        if !(gamma < 2.0 * alpha) {
            return Err(Error::Divergence {
                op: "riesz_weighted_l2",
                condition: format!("γ < 2α (γ = {gamma}, α = {alpha})"),
            });
        }
        let m = self.ml_squared_integral(gamma / alpha)?;
        Ok(self.params().nu.powf(-gamma / alpha) * sphere_area(self.params().dim) / alpha * m)
    }

    /// ∫Ĝ_t²|ξ|^{γ-d}dξ two ways: (direct quadrature, C*₁ t^{-βγ/α}).
    pub fn riesz_weighted_l2(&self, t: f64) -> Result<(f64, f64)> {
        let gamma = self.params().gamma().ok_or_else(|| Error::Domain {
            op: "riesz_weighted_l2",
            msg: "colored-noise parameters required".into(),
        })?;
        let alpha = self.params().alpha();
        let beta = self.params().beta();
        if !(gamma < 2.0 * alpha) {
            return Err(Error::Divergence {
                op: "riesz_weighted_l2",
                condition: format!("γ < 2α (γ = {gamma}, α = {alpha})"),
            });
        }
        let direct = self.weighted_symbol_sq_integral(t, gamma)?;
        let closed = self.c_star_gamma()? * t.powf(-beta * gamma / alpha);
        Ok((direct, closed))
    }

    /// ω_d ∫_0^∞ r^{w-1} Ĝ_t(r)² dr by direct quadrature in the radial
    /// frequency variable (fresh per t; the z-substituted closed form is
    /// the cross-check, not this code path).
    fn weighted_symbol_sq_integral(&self, t: f64, w: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain("weighted_symbol_sq_integral", format!("t = {t} <= 0")));
        }
        let beta = self.params().beta();
        let alpha = self.params().alpha();
        let nu_tb = self.params().nu * t.powf(beta);
        let omega = sphere_area(self.params().dim);
        let f = |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            let e = ml_neg_value(beta, nu_tb * r.powf(alpha));
            r.powf(w - 1.0) * e * e
        };
        let r_scale = nu_tb.powf(-1.0 / alpha);
        if beta == 1.0 {
            // exponential symbol: cut where 2 ν t r^α = 45
            let hi = (22.5f64).powf(1.0 / alpha) * r_scale;
            let mut pts: Vec<f64> = vec![0.0];
            let mut r = 1e-6 * r_scale;
            while r < hi {
                pts.push(r);
                r *= 2.0;
            }
            pts.push(hi);
            return Ok(omega * quad::adaptive_with_breakpoints(&f, &pts, 1e-14, 1e-11).value);
        }
        let r_asm = (Z_ASM / nu_tb).powf(1.0 / alpha);
        let mut pts: Vec<f64> = vec![0.0];
        let mut r = 1e-6 * r_scale;
        while r < r_asm {
            pts.push(r);
            r *= 2.0;
        }
        pts.push(r_asm);
        let head = quad::adaptive_with_breakpoints(&f, &pts, 1e-14, 1e-11).value;
        // algebraic tail of E² against r^{w-1}
        let a: Vec<f64> = (1..=K_ASM)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * recip_gamma(1.0 - beta * k as f64) * nu_tb.powi(-(k as i32))
            })
            .collect();
        let mut tail = 0.0;
        for m in 2..=(2 * K_ASM) {
            let mut b_m = 0.0;
            for j in 1..m {
                let k = m - j;
                if j <= K_ASM && k <= K_ASM {
                    b_m += a[j - 1] * a[k - 1];
                }
            }
            if b_m != 0.0 {
                let s = alpha * m as f64 - w; // ∫ r^{w-1-αm} = r^{-s-1+...}
                tail += b_m * r_asm.powf(-s) / s;
            }
        }
        Ok(omega * (head + tail))
    }

    /// ∫_0^t ∫ |Ĝ_{τ+h} - Ĝ_τ|² |ξ|^{γ-d} dξ dτ for h in (0,1); bounded
    /// by a constant times h^{1-βγ/α}.
    pub fn temporal_increment(&self, t: f64, h: f64) -> Result<f64> {
        let gamma = self.params().gamma().ok_or_else(|| Error::Domain {
            op: "temporal_increment",
            msg: "colored-noise parameters required".into(),
        })?;
        let alpha = self.params().alpha();
        let beta = self.params().beta();
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::domain("temporal_increment", format!("h = {h} not in (0,1)")));
        }
        if !(gamma < (2.0f64).min(1.0 / beta) * alpha) {
            return Err(Error::Divergence {
                op: "temporal_increment",
                condition: format!("γ < (2 ∧ β⁻¹)·α (γ = {gamma})"),
            });
        }
        let inner = |tau: f64| -> f64 {
            if tau < 0.0 {
                return 0.0;
            }
            self.increment_symbol_integral(tau, h, gamma)
        };
        // graded panels absorb the integrable τ^{-βγ/α} singularity at τ=0
        let mut pts: Vec<f64> = vec![0.0];
        let mut x = t * 2f64.powi(-42);
        while x < t {
            pts.push(x);
            x *= 2.0;
        }
        pts.push(t);
        Ok(quad::adaptive_with_breakpoints(&inner, &pts, 1e-12, 1e-8).value)
    }

    /// ω_d ∫ r^{γ-1} [E(ν(τ+h)^β r^α) - E(ντ^β r^α)]² dr.
    fn increment_symbol_integral(&self, tau: f64, h: f64, gamma: f64) -> f64 {
        let beta = self.params().beta();
        let alpha = self.params().alpha();
        let nu = self.params().nu;
        let omega = sphere_area(self.params().dim);
        let za = nu * (tau + h).powf(beta);
        let zb = nu * tau.powf(beta);
        let f = |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            let ra = r.powf(alpha);
            let d = ml_neg_value(beta, za * ra) - ml_neg_value(beta, zb * ra);
            r.powf(gamma - 1.0) * d * d
        };
        // both symbols are algebraic past r_asm of the *smaller* scale
        let r_asm = (Z_ASM / zb.max(1e-300).min(za)).powf(1.0 / alpha).min(1e12);
        let r_scale = za.powf(-1.0 / alpha);
        let mut pts: Vec<f64> = vec![0.0];
        let mut r = 1e-6 * r_scale;
        while r < r_asm {
            pts.push(r);
            r *= 2.0;
        }
        pts.push(r_asm);
        let head = quad::adaptive_with_breakpoints(&f, &pts, 1e-14, 1e-10).value;
        // tail with coefficients of E(za·) - E(zb·)
        let a: Vec<f64> = (1..=K_ASM)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * recip_gamma(1.0 - beta * k as f64)
                    * (za.powi(-(k as i32)) - zb.powi(-(k as i32)))
            })
            .collect();
        let mut tail = 0.0;
        for m in 2..=(2 * K_ASM) {
            let mut b_m = 0.0;
            for j in 1..m {
                let k = m - j;
                if j <= K_ASM && k <= K_ASM {
                    b_m += a[j - 1] * a[k - 1];
                }
            }
            if b_m != 0.0 {
                let s = alpha * m as f64 - gamma;
                tail += b_m * r_asm.powf(-s) / s;
            }
        }
        omega * (head + tail)
    }

    /// ∬ G_t(x-w) G_t(y-z) |w-z|^{-γ} dw dz at |x-y| = separation, through
    /// the Riesz-Fourier route
    /// (2π)^{-d} C(d,γ) ∫ Ĝ_t(ξ)² |ξ|^{γ-d} e^{iξ(x-y)} dξ.
    pub fn covariance_double_integral(&self, t: f64, separation: f64) -> Result<f64> {
        let gamma = self.params().gamma().ok_or_else(|| Error::Domain {
            op: "covariance_double_integral",
            msg: "colored-noise parameters required".into(),
        })?;
        let alpha = self.params().alpha();
        let d = self.params().dim;
        if !(gamma < alpha.min(d as f64)) {
            return Err(Error::Divergence {
                op: "covariance_double_integral",
                condition: format!("γ < α ∧ d (γ = {gamma})"),
            });
        }
        if d != 1 {
            return Err(Error::domain(
                "covariance_double_integral",
                format!("separation transform implemented for d = 1 (got d = {d})"),
            ));
        }
        if !(separation >= 0.0) {
            return Err(Error::domain("covariance_double_integral", "separation < 0".to_string()));
        }
        let beta = self.params().beta();
        let nu_tb = self.params().nu * t.powf(beta);
        let c_riesz = riesz_fourier_constant(1, gamma);
        let f = |xi: f64| {
            if xi <= 0.0 {
                return 0.0;
            }
            let e = ml_neg_value(beta, nu_tb * xi.powf(alpha));
            xi.powf(gamma - 1.0) * e * e * (xi * separation).cos()
        };
        let r_asm = (Z_ASM / nu_tb).powf(1.0 / alpha);
        let cut = if separation > 0.0 { r_asm.max(60.0 / separation) } else { r_asm };
        let mut pts: Vec<f64> = vec![0.0];
        if separation > 0.0 && cut * separation > PI {
            let mut m = 0usize;
            let mut extra = 1e-6 * nu_tb.powf(-1.0 / alpha);
            while extra < PI / separation {
                pts.push(extra);
                extra *= 2.0;
            }
            loop {
                let z = (m as f64 + 0.5) * PI / separation;
                if z >= cut {
                    break;
                }
                pts.push(z);
                m += 1;
                if m > 3_000_000 {
                    break;
                }
            }
        } else {
            let mut r = 1e-6 * nu_tb.powf(-1.0 / alpha);
            while r < cut {
                pts.push(r);
                r *= 2.0;
            }
        }
        pts.push(cut);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let head = quad::adaptive_with_breakpoints(&f, &pts, 1e-13, 1e-10).value;
        // tail with E² coefficients against cos(ξ·sep) or plain powers
        let a: Vec<f64> = (1..=K_ASM)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * recip_gamma(1.0 - beta * k as f64) * nu_tb.powi(-(k as i32))
            })
            .collect();
        let mut tail = 0.0;
        for m in 2..=(2 * K_ASM) {
            let mut b_m = 0.0;
            for j in 1..m {
                let k = m - j;
                if j <= K_ASM && k <= K_ASM {
                    b_m += a[j - 1] * a[k - 1];
                }
            }
            if b_m == 0.0 {
                continue;
            }
            let s = alpha * m as f64 - gamma + 1.0; // ξ^{γ-1-αm} = ξ^{-s}
            tail += if separation > 0.0 {
                let (ct, _) = quad::osc_tail_cos_sin(s, cut * separation);
                b_m * separation.powf(s - 1.0) * ct
            } else {
                b_m * cut.powf(1.0 - s) / (s - 1.0)
            };
        }
        // full line = 2 × half line under radial symmetry, then convention
        Ok((head + tail) * 2.0 * c_riesz / (2.0 * PI))
    }

    /// Beta-function sandwich for ∫ z^{c-1} E_β(-z)² dz coming from the
    /// rational bounds on E_β: returns (lower, upper).
    pub fn ml_squared_integral_sandwich(&self, c: f64) -> (f64, f64) {
        let beta = self.params().beta();
        let b = crate::specfun::gamma_fn(c) * crate::specfun::gamma_fn(2.0 - c)
            / crate::specfun::gamma_fn(2.0);
        let lower = b / gamma_fn(1.0 - beta).powf(c);
        let upper = b * gamma_fn(1.0 + beta).powf(c);
        (lower, upper)
    }
}
