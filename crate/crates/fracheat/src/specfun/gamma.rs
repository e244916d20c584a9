//! Thin wrappers around the statrs gamma implementations with pole-safe
//! reciprocals for asymptotic series whose terms hit 1/Γ at non-positive
//! integers.

use statrs::function::gamma;

pub fn gamma_fn(x: f64) -> f64 {
    gamma::gamma(x)
}

pub fn ln_gamma_fn(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

/// 1/Γ(x), returning 0 at the poles x = 0, -1, -2, ...
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 {
        let r = x.round();
        if (x - r).abs() < 1e-12 {
            return 0.0;
        }
        // reflection: 1/Γ(x) = Γ(1-x) sin(πx) / π
        return gamma::gamma(1.0 - x) * (std::f64::consts::PI * x).sin() / std::f64::consts::PI;
    }
    1.0 / gamma::gamma(x)
}
