//! Property tests over randomized parameters for the special-function
//! invariants: the two-sided sandwich and monotonicity of the
//! Mittag-Leffler symbol, subordinator positivity and inverse-density
//! scaling, and radial monotonicity of the stable profile.

use fracheat::specfun::{ml_neg, SubordinatorDensity};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ml_sandwich_and_positivity(beta in 0.02f64..0.999, lx in -6.0f64..6.0) {
        let x = 10f64.powf(lx);
        let v = ml_neg(beta, x).unwrap();
        prop_assert!(v.value > 0.0 && v.value <= 1.0);
        prop_assert!(v.lower_bound <= v.value, "lower {} > value {}", v.lower_bound, v.value);
        prop_assert!(v.value <= v.upper_bound, "value {} > upper {}", v.value, v.upper_bound);
        // strict inside for x > 0
        prop_assert!(v.lower_bound < v.upper_bound);
    }

    #[test]
    fn ml_monotone_in_x(beta in 0.05f64..0.999, lx in -4.0f64..4.0) {
        let x = 10f64.powf(lx);
        let a = ml_neg(beta, x).unwrap().value;
        let b = ml_neg(beta, x * 1.3).unwrap().value;
        prop_assert!(b < a, "E({}) = {a} not above E({}) = {b}", x, x * 1.3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn subordinator_positive_and_first_passage_scales(beta in 0.25f64..0.85, lu in -0.8f64..1.5) {
        let d = SubordinatorDensity::new(beta).unwrap();
        let u = 10f64.powf(lu);
        let g = d.eval(u).unwrap();
        prop_assert!(g >= 0.0 && g.is_finite());
        // f_{E_{ct}}(c^β x) c^β = f_{E_t}(x) at c = 2
        let (t, x) = (0.9, u);
        let c = 2f64;
        let lhs = d.first_passage(c * t, c.powf(beta) * x).unwrap() * c.powf(beta);
        let rhs = d.first_passage(t, x).unwrap();
        if rhs > 1e-290 {
            prop_assert!((lhs - rhs).abs() / rhs < 1e-8, "{lhs} vs {rhs}");
        }
    }
}

#[test]
fn stable_profile_radially_non_increasing_randomized() {
    // one profile per α; scan dense radii (cheaper than per-case builds)
    for &alpha in &[0.9, 1.3, 1.7] {
        let p = fracheat::specfun::StableDensity::new(alpha, 1.0, 1).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let r = i as f64 * 0.11;
            let v = p.eval(0.8, r).unwrap();
            assert!(v <= prev * (1.0 + 1e-9), "alpha={alpha} r={r}");
            prev = v;
        }
    }
}
