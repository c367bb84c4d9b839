use fracmin::asymptotics::{brute_force_envelope, main_family};
use fracmin::envelope::{CrossingMethod, Envelope};
use fracmin::trajectory::evolve;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// No curve point lies below the envelope.
    #[test]
    fn envelope_dominated_by_every_curve(n in 1usize..=40, t in 1.0f64..2.0) {
        let s = evolve(t, n).unwrap();
        let x = s.xi - 1.0;
        prop_assume!(x > 0.0);
        let f = Envelope::new().value(x).unwrap().value;
        prop_assert!(f <= s.eta - 1.0 + 1e-10 * s.eta, "n = {n}, t = {t}: {f} vs {}", s.eta - 1.0);
    }

    #[test]
    fn envelope_is_increasing_and_concave(x in 0.01f64..1e5, r in 1.001f64..1.5) {
        let env = Envelope::new();
        let (a, b) = (env.value(x).unwrap().value, env.value(x * r).unwrap().value);
        prop_assert!(b > a);
        prop_assert!(env.slope(x * r).unwrap() <= env.slope(x).unwrap() + 1e-12);
    }
}

#[test]
fn newton_and_bisection_crossings_agree() {
    let newton = Envelope::with_method(CrossingMethod::Newton);
    let bisect = Envelope::with_method(CrossingMethod::Bisection);
    for n in [3, 7, 12, 25, 60] {
        let (a, b) = (newton.crossing(n).unwrap(), bisect.crossing(n).unwrap());
        assert!((a.x_cross / b.x_cross - 1.0).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn envelope_matches_brute_force_on_the_main_family() {
    let family = main_family((1.0, 2.0));
    let env = Envelope::new();
    for u in [6.0, 9.5, 13.25] {
        let brute = brute_force_envelope(&family, 1..=40, u).unwrap() - 1.0;
        let f = env.value(u.exp() - 1.0).unwrap().value;
        assert!((f - brute).abs() < 1e-9, "u = {u}: {f} vs {brute}");
    }
}
