use fracmin::contour::{
    contour, delta_star, direct_sum, integral_b, partial_delta_pp, raw_moduli, winding_number, ArcGroup,
    CONTOUR_ANCHOR,
};
use fracmin::trajectory::evolve;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn tail_bound_dominates_direct_sums() {
    let pieces = contour();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let p = pieces[rng.gen_range(0..pieces.len())];
        let z = p.point(rng.gen());
        let bound = delta_star(z, p.group.bounds().ratio, 1e-14).unwrap();
        assert!(direct_sum(z, 60).unwrap() <= bound, "z = {z}");
    }
}

#[test]
fn pointwise_table_holds_at_every_node() {
    for p in contour() {
        let b = p.group.bounds();
        for i in 0..=200 {
            let (a, x) = raw_moduli(p.point(i as f64 / 200.0)).unwrap();
            assert!(a > b.alpha_floor && x < b.xi_ceiling, "{} node {i}", p.name);
        }
    }
}

#[test]
fn outer_arc_extremum_sits_at_the_corner() {
    let corner = Complex64::from_polar(3.5, std::f64::consts::FRAC_PI_4);
    let (a, _) = raw_moduli(corner).unwrap();
    assert!((a - 1.853_645_785).abs() < 1e-9);
}

#[test]
fn cauchy_bound_covers_the_second_derivative() {
    let b = integral_b().unwrap();
    for t in [1.0, 1.5, 2.0] {
        let lhs = partial_delta_pp(t, 41, 1e-3).unwrap().abs();
        let rhs = 2f64.powf(1.5) / (std::f64::consts::PI * t.powi(3)) * b.value;
        assert!(lhs <= rhs, "t = {t}: {lhs} > {rhs}");
    }
    // conjugate halves of the loop contribute equally
    assert!((b.group_total(ArcGroup::LowerMiddle) - b.group_total(ArcGroup::UpperMiddle)).abs() < 1e-12);
}

#[test]
fn ratio_at_the_anchor_has_no_zeros_or_poles_inside() {
    let w = winding_number(|z| evolve(z, CONTOUR_ANCHOR).unwrap().alpha).unwrap();
    assert_eq!(w, 0);
}
