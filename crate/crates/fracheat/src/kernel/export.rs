//! Kernel profile persistence: a two-column CSV plus a self-describing
//! JSON header carrying the parameters and derived constants.

use super::{KernelProfile, ModelParams};
use serde_json::json;

/// CSV body with columns `r, G_t(r)`.
pub fn profile_csv(profile: &KernelProfile) -> String {
    let mut out = String::from("r,G_t_r\n");
    for (r, v) in profile.radii.iter().zip(&profile.values) {
        out.push_str(&format!("{r:.17e},{v:.17e}\n"));
    }
    out
}

/// JSON header describing the profile provenance.
pub fn profile_json_header(profile: &KernelProfile, params: &ModelParams) -> serde_json::Value {
    json!({
        "t": profile.t,
        "method": format!("{:?}", profile.method),
        "params": params,
        "n_radii": profile.radii.len(),
        "constants": {
            "c_star": profile.c_star,
            "c_star_gamma": profile.c_star_gamma,
            "riesz_constant": profile.riesz_constant,
        },
        "fourier_convention": "forward e^{-i xi x}, inverse (2 pi)^{-d}",
    })
}
