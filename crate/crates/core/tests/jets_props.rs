mod common;

use common::{close, exact_differences, rational, Expr};
use fracmin::jets::{ComplexJet, RealJet};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn expression(seed: u64) -> Expr {
    Expr::random(&mut ChaCha8Rng::seed_from_u64(seed), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jet_matches_exact_differences(seed in any::<u64>(), k in 0i64..=1024) {
        let e = expression(seed);
        let t = 1.0 + k as f64 / 1024.0;
        let exact_t = rational(1024 + k, 1024);
        let h = rational(1, 100_000);
        if let (Some(j), Some((d1, d2))) = (e.eval(RealJet::seed(t)), exact_differences(&e, &exact_t, &h)) {
            prop_assert!(close(j.d1, d1, 1e-6), "d1 {} vs {} for {:?}", j.d1, d1, e);
            prop_assert!(close(j.d2, d2, 1e-6), "d2 {} vs {} for {:?}", j.d2, d2, e);
        }
    }

    #[test]
    fn complex_jet_on_real_axis_matches_real_jet(seed in any::<u64>(), t in 1.0f64..2.0) {
        let e = expression(seed);
        let real = e.eval(RealJet::seed(t));
        let complex = e.eval(ComplexJet::seed(Complex64::new(t, 0.0)));
        if let (Some(r), Some(c)) = (real, complex) {
            let c = c.real_part();
            // complex division rounds as (ac + bd)/(c^2 + d^2), so agreement
            // is to a few hundred ulps rather than bitwise
            for (a, b) in [(r.v, c.v), (r.d1, c.d1), (r.d2, c.d2)] {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn division_inverts_multiplication(a in 0.5f64..3.0, b in 0.5f64..3.0, da in -2.0f64..2.0, db in -2.0f64..2.0) {
        let f = RealJet::new(a, da, 0.3);
        let g = RealJet::new(b, db, -0.7);
        let back = (f / g) * g;
        for (x, y) in [(back.v, f.v), (back.d1, f.d1), (back.d2, f.d2)] {
            prop_assert!((x - y).abs() <= 64.0 * f64::EPSILON * (1.0 + y.abs() + a + b));
        }
    }
}

#[test]
fn log_jet_against_difference_oracle() {
    // log(t^2) at t = 2
    let j = (RealJet::seed(2.0) * RealJet::seed(2.0)).try_ln().unwrap();
    let h = 1e-5;
    let f = |t: f64| (t * t).ln();
    let d1 = (f(2.0 + h) - f(2.0 - h)) / (2.0 * h);
    let d2 = (f(2.0 + h) - 2.0 * f(2.0) + f(2.0 - h)) / (h * h);
    assert!((j.v - 4f64.ln()).abs() < 1e-15);
    assert!((j.d1 - d1).abs() < 1e-9);
    assert!((j.d2 - d2).abs() < 1e-5);
}
