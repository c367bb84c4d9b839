//! Complex-plane bounds for the growth ratios on a contour around [1, 2].
//!
//! The loop runs counterclockwise: out along the ray `arg z = -pi/4` from
//! radius 0.25 to 3.5, round the outer arc, back in along `arg z = pi/4` and
//! clockwise round the inner arc. Each ray is split at radii 1.15 and 2.3.
//!
//! All quantities here use the trajectory at [`CONTOUR_ANCHOR`], the first
//! index where the table anchor used by the tail estimate is sharp enough on
//! the whole loop.

use std::f64::consts::{FRAC_PI_4, PI};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use thiserror::Error;

use crate::jets::RealJet;
use crate::roots;
use crate::trajectory::{evolve, TailEstimate, TrajectoryError};

pub const CONTOUR_ANCHOR: usize = 5;
pub const INNER_RADIUS: f64 = 0.25;
pub const OUTER_RADIUS: f64 = 3.5;
/// Radii bounding the middle part of each ray.
pub const MIDDLE_RAY: (f64, f64) = (1.15, 2.3);
/// Nodes per piece when extremizing.
pub const EXTREMA_NODES: usize = 2001;
pub const QUAD_PANELS: usize = 32;
pub const QUAD_ORDER: usize = 8;
/// Largest accepted difference between a quadrature and its panel-doubled
/// repeat.
pub const QUAD_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContourError {
    #[error("tail condition fails at {z} with ratio {a}")]
    TailCondition { z: Complex64, a: f64 },
    #[error("quadrature on {piece} did not settle: change {change}")]
    Quadrature { piece: &'static str, change: f64 },
    #[error("function nearly vanishes on the loop: |f| = {0}")]
    NearZero(f64),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `r e^{i theta}` for theta running from `from` to `to`.
    Circle { r: f64, from: f64, to: f64 },
    /// `r e^{i phi}` for r running from `from` to `to`.
    Ray { phi: f64, from: f64, to: f64 },
}

/// A smooth piece of the loop, parametrized by `s` in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub name: &'static str,
    pub group: ArcGroup,
    pub shape: Shape,
}

impl Piece {
    pub fn point(&self, s: f64) -> Complex64 {
        match self.shape {
            Shape::Circle { r, from, to } => Complex64::from_polar(r, from + s * (to - from)),
            Shape::Ray { phi, from, to } => Complex64::from_polar(from + s * (to - from), phi),
        }
    }

    /// `dz/ds`.
    pub fn tangent(&self, s: f64) -> Complex64 {
        match self.shape {
            Shape::Circle { r, from, to } => {
                let th = from + s * (to - from);
                Complex64::new(0.0, 1.0) * Complex64::from_polar(r * (to - from), th)
            }
            Shape::Ray { phi, from, to } => Complex64::from_polar(to - from, phi),
        }
    }

    pub fn length(&self) -> f64 {
        match self.shape {
            Shape::Circle { r, from, to } => r * (to - from).abs(),
            Shape::Ray { from, to, .. } => (to - from).abs(),
        }
    }
}

/// The six groups carrying separate pointwise bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcGroup {
    Inner,
    Outer,
    LowerMiddle,
    LowerEnds,
    UpperMiddle,
    UpperEnds,
}

/// Pointwise bounds claimed on a group and the budget for its share of the
/// integral of the tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupBounds {
    /// Lower bound for `|alpha|^{1/2}`.
    pub alpha_floor: f64,
    /// Upper bound for `|xi|^{-1/2}`.
    pub xi_ceiling: f64,
    /// Ratio used in the tail estimate.
    pub ratio: f64,
    pub budget: f64,
}

impl ArcGroup {
    pub const ALL: [ArcGroup; 6] = [
        ArcGroup::Inner,
        ArcGroup::Outer,
        ArcGroup::LowerMiddle,
        ArcGroup::LowerEnds,
        ArcGroup::UpperMiddle,
        ArcGroup::UpperEnds,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ArcGroup::Inner => "gamma1",
            ArcGroup::Outer => "gamma3",
            ArcGroup::LowerMiddle => "gamma20",
            ArcGroup::LowerEnds => "gamma2_minus_gamma20",
            ArcGroup::UpperMiddle => "gamma40",
            ArcGroup::UpperEnds => "gamma4_minus_gamma40",
        }
    }

    pub fn bounds(self) -> GroupBounds {
        match self {
            ArcGroup::Inner => GroupBounds {
                alpha_floor: 2.2,
                xi_ceiling: 0.1,
                ratio: 2.2,
                budget: 0.008,
            },
            ArcGroup::Outer => GroupBounds {
                alpha_floor: 1.85,
                xi_ceiling: 0.05,
                ratio: 1.85,
                budget: 0.03,
            },
            ArcGroup::LowerMiddle | ArcGroup::UpperMiddle => GroupBounds {
                alpha_floor: 1.31,
                xi_ceiling: 0.28,
                ratio: 1.3,
                budget: 0.54,
            },
            ArcGroup::LowerEnds | ArcGroup::UpperEnds => GroupBounds {
                alpha_floor: 1.47,
                xi_ceiling: 0.27,
                ratio: 1.47,
                budget: 0.68,
            },
        }
    }
}

/// The loop as eight pieces in counterclockwise order.
pub fn contour() -> Vec<Piece> {
    let (m0, m1) = MIDDLE_RAY;
    let ray = |name, group, phi, from, to| Piece {
        name,
        group,
        shape: Shape::Ray { phi, from, to },
    };
    vec![
        ray("gamma2_inner", ArcGroup::LowerEnds, -FRAC_PI_4, INNER_RADIUS, m0),
        ray("gamma20", ArcGroup::LowerMiddle, -FRAC_PI_4, m0, m1),
        ray("gamma2_outer", ArcGroup::LowerEnds, -FRAC_PI_4, m1, OUTER_RADIUS),
        Piece {
            name: "gamma3",
            group: ArcGroup::Outer,
            shape: Shape::Circle {
                r: OUTER_RADIUS,
                from: -FRAC_PI_4,
                to: FRAC_PI_4,
            },
        },
        ray("gamma4_outer", ArcGroup::UpperEnds, FRAC_PI_4, OUTER_RADIUS, m1),
        ray("gamma40", ArcGroup::UpperMiddle, FRAC_PI_4, m1, m0),
        ray("gamma4_inner", ArcGroup::UpperEnds, FRAC_PI_4, m0, INNER_RADIUS),
        Piece {
            name: "gamma1",
            group: ArcGroup::Inner,
            shape: Shape::Circle {
                r: INNER_RADIUS,
                from: FRAC_PI_4,
                to: -FRAC_PI_4,
            },
        },
    ]
}

pub fn pieces_of(group: ArcGroup) -> Vec<Piece> {
    contour().into_iter().filter(|p| p.group == group).collect()
}

/// `(|alpha|^{1/2}, |xi|^{-1/2})` at the contour anchor.
pub fn raw_moduli(z: Complex64) -> Result<(f64, f64), ContourError> {
    let s = evolve(z, CONTOUR_ANCHOR)?;
    Ok((s.alpha.norm().sqrt(), s.xi.norm().powf(-0.5)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub alpha_min: f64,
    pub alpha_argmin: Complex64,
    pub xi_max: f64,
    pub xi_argmax: Complex64,
}

/// Minimum of `|alpha|^{1/2}` and maximum of `|xi|^{-1/2}` over a group.
pub fn arc_extrema(group: ArcGroup) -> Result<Extrema, ContourError> {
    let mut out = Extrema {
        alpha_min: f64::INFINITY,
        alpha_argmin: Complex64::default(),
        xi_max: f64::NEG_INFINITY,
        xi_argmax: Complex64::default(),
    };
    for piece in pieces_of(group) {
        // surface trajectory failures before the search swallows them
        raw_moduli(piece.point(0.5))?;
        let moduli = |s: f64| raw_moduli(piece.point(s)).unwrap_or((f64::NAN, f64::NAN));
        let (sa, a) = roots::sampled_min(|s| moduli(s).0, 0.0, 1.0, EXTREMA_NODES);
        let (sx, x) = roots::sampled_min(|s| -moduli(s).1, 0.0, 1.0, EXTREMA_NODES);
        if a < out.alpha_min {
            out.alpha_min = a;
            out.alpha_argmin = piece.point(sa);
        }
        if -x > out.xi_max {
            out.xi_max = -x;
            out.xi_argmax = piece.point(sx);
        }
    }
    Ok(out)
}

/// Upper bound for `sum_{j >= anchor} 1/|xi_j(z)|`: a partial sum closed by
/// the geometric tail estimate with ratio `a`.
pub fn delta_star(z: Complex64, a: f64, tol: f64) -> Result<f64, ContourError> {
    let anchor = evolve(z, CONTOUR_ANCHOR)?;
    let tail = TailEstimate::with_ratio(&anchor, a).ok_or(ContourError::TailCondition { z, a })?;
    let mut state = anchor;
    let mut sum = 0.0;
    while tail.bound(state.n) > tol {
        sum += 1.0 / state.xi.norm();
        state = state.step()?;
    }
    Ok(sum + tail.bound(state.n))
}

/// `sum_{anchor <= j < anchor + terms} 1/|xi_j(z)|` with no tail.
pub fn direct_sum(z: Complex64, terms: usize) -> Result<f64, ContourError> {
    let mut state = evolve(z, CONTOUR_ANCHOR)?;
    let mut sum = 0.0;
    for _ in 0..terms {
        sum += 1.0 / state.xi.norm();
        state = state.step()?;
    }
    Ok(sum)
}

const DELTA_TOL: f64 = 1e-14;

/// `|z - 1|^{-2}`, the extra weight in the first-derivative integral.
pub fn unit_distance_weight(z: Complex64) -> f64 {
    1.0 / (z - 1.0).norm_sqr()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourIntegral {
    pub value: f64,
    /// Change between the quadrature and its panel-doubled repeat.
    pub error: f64,
    pub by_piece: Vec<(&'static str, ArcGroup, f64)>,
}

impl ContourIntegral {
    pub fn group_total(&self, group: ArcGroup) -> f64 {
        self.by_piece
            .iter()
            .filter(|(_, g, _)| *g == group)
            .map(|(_, _, v)| v)
            .sum()
    }
}

fn composite_gl<F: FnMut(f64) -> f64>(rule: &GaussLegendre, panels: usize, mut f: F) -> f64 {
    let h = 1.0 / panels as f64;
    (0..panels)
        .map(|k| rule.integrate(k as f64 * h, (k + 1) as f64 * h, &mut f))
        .sum()
}

fn integrate_piece<W>(piece: &Piece, weight: &W) -> Result<(f64, f64), ContourError>
where
    W: Fn(Complex64) -> f64,
{
    let a = piece.group.bounds().ratio;
    // fail loudly on the tail condition rather than integrate NaN
    delta_star(piece.point(0.0), a, DELTA_TOL)?;
    let rule = GaussLegendre::new(QUAD_ORDER).expect("order is at least 2");
    let integrand = |s: f64| {
        let z = piece.point(s);
        match delta_star(z, a, DELTA_TOL) {
            Ok(d) => d * weight(z) * piece.tangent(s).norm(),
            Err(_) => f64::NAN,
        }
    };
    let coarse = composite_gl(&rule, QUAD_PANELS, integrand);
    let fine = composite_gl(&rule, 2 * QUAD_PANELS, integrand);
    if !fine.is_finite() {
        return Err(ContourError::TailCondition { z: piece.point(0.5), a });
    }
    let change = (fine - coarse).abs();
    if change > QUAD_TOL {
        return Err(ContourError::Quadrature {
            piece: piece.name,
            change,
        });
    }
    Ok((fine, change))
}

/// `int |dz| w(z) delta_star(z)` over the loop, pieces in parallel.
pub fn weighted_integral<W>(weight: W) -> Result<ContourIntegral, ContourError>
where
    W: Fn(Complex64) -> f64 + Sync,
{
    let pieces = contour();
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = pieces
            .iter()
            .map(|p| scope.spawn(|| integrate_piece(p, &weight)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("quadrature thread panicked"))
            .collect()
    });
    let mut out = ContourIntegral {
        value: 0.0,
        error: 0.0,
        by_piece: Vec::with_capacity(pieces.len()),
    };
    for (piece, r) in pieces.iter().zip(results) {
        let (v, e) = r?;
        out.value += v;
        out.error += e;
        out.by_piece.push((piece.name, piece.group, v));
    }
    Ok(out)
}

pub fn integral_b() -> Result<ContourIntegral, ContourError> {
    weighted_integral(|_| 1.0)
}

pub fn integral_b1() -> Result<ContourIntegral, ContourError> {
    weighted_integral(unit_distance_weight)
}

/// Bound on `|f''(t)|` for `f` analytic inside the loop with `int |f| |dz|
/// <= b`, using `|z - t| >= t/sqrt 2` on the loop.
pub fn cauchy_second_derivative_bound(t: f64, b: f64) -> f64 {
    2f64.powf(1.5) / (PI * t.powi(3)) * b
}

pub fn alpha_jet(t: f64) -> Result<RealJet, ContourError> {
    Ok(evolve(RealJet::seed(t), CONTOUR_ANCHOR)?.alpha)
}

/// `(argmin, min)` of `t^3 alpha''(t)` over [1, 2].
pub fn min_t3_alpha_pp() -> Result<(f64, f64), ContourError> {
    alpha_jet(1.5)?;
    Ok(roots::sampled_min(
        |t| alpha_jet(t).map_or(f64::NAN, |j| t.powi(3) * j.d2),
        1.0,
        2.0,
        EXTREMA_NODES,
    ))
}

/// Number of sign changes of `alpha'` on a uniform grid of [1, 2].
pub fn alpha_prime_sign_changes(nodes: usize) -> Result<usize, ContourError> {
    let mut changes = 0;
    let mut prev = alpha_jet(1.0)?.d1;
    for i in 1..nodes {
        let d = alpha_jet(1.0 + i as f64 / (nodes - 1) as f64)?.d1;
        if d.signum() != prev.signum() {
            changes += 1;
        }
        prev = d;
    }
    Ok(changes)
}

/// `sum_{anchor <= j < m} 1/xi_j(t)` on the real axis, i.e. `alpha_m - alpha_anchor`.
pub fn partial_delta(t: f64, m: usize) -> Result<f64, ContourError> {
    Ok(evolve(t, m)?.alpha - evolve(t, CONTOUR_ANCHOR)?.alpha)
}

/// Central second difference of [`partial_delta`].
pub fn partial_delta_pp(t: f64, m: usize, h: f64) -> Result<f64, ContourError> {
    let f = |x| partial_delta(x, m);
    Ok((f(t + h)? - 2.0 * f(t)? + f(t - h)?) / (h * h))
}

/// Polynomial with real coefficients, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, &c| acc * z + c)
    }
}

/// Factors of the denominator of `alpha` at the contour anchor.
pub fn denominator_factors() -> [Polynomial; 3] {
    [
        Polynomial(vec![0.0, 1.0, 0.0, 1.0]),
        Polynomial(vec![1.0, 1.0, 2.0, 0.0, 1.0]),
        Polynomial(vec![1.0, 2.0, 6.0, 4.0, 7.0, 2.0, 4.0, 0.0, 1.0]),
    ]
}

/// Nodes per piece when tracking the argument.
pub const WINDING_NODES: usize = 4000;

/// Winding number of `f` along the loop, by accumulated argument.
pub fn winding_number<F>(f: F) -> Result<i64, ContourError>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut total = 0.0;
    let mut min_modulus = f64::INFINITY;
    let mut prev: Option<Complex64> = None;
    for piece in contour() {
        for i in 0..WINDING_NODES {
            let w = f(piece.point(i as f64 / WINDING_NODES as f64));
            min_modulus = min_modulus.min(w.norm());
            if let Some(p) = prev {
                total += (w / p).arg();
            }
            prev = Some(w);
        }
    }
    // close the loop
    let first = f(contour()[0].point(0.0));
    total += (first / prev.expect("loop has nodes")).arg();
    if min_modulus < 1e-9 {
        return Err(ContourError::NearZero(min_modulus));
    }
    Ok((total / (2.0 * PI)).round() as i64)
}
