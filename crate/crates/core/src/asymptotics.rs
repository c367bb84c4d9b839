//! Envelope asymptotics for curve families of the form
//!
//! ```text
//! x_n(t) = n p0(t) + q0(t) + r0(t)/n,   y_n(t) = n p1(t) + q1(t) + r1(t)/n
//! ```
//!
//! whose lower envelope behaves like `a0 u + a1 + (a2 + a3 <(u - q0)/p0>^2)/u`
//! with `<.>` the distance to the nearest integer.
//!
//! Also home of the main-problem constants (`A`, `b` and the reference points
//! `t_a`, `t_o`, `t_b` of `alpha_inf`).

use std::f64::consts::E;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::jets::{Real, RealJet};
use crate::roots::{self, RootError};
use crate::trajectory::{self, TrajectoryError};

/// Grid used to check family hypotheses and to bracket the minimum of beta.
pub const HYPOTHESIS_GRID: usize = 201;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticError {
    #[error("hypothesis {what} fails at t = {t}")]
    Hypothesis { what: &'static str, t: f64 },
    #[error("beta has no interior minimum on [{0}, {1}]")]
    NoInteriorMinimum(f64, f64),
    #[error("beta has several local minima on [{0}, {1}]")]
    SeveralMinima(f64, f64),
    #[error("degenerate minimum: beta'' = {0:e}")]
    Degenerate(f64),
    #[error("no curve reaches abscissa {0}")]
    EmptyCandidates(f64),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

pub type Coefficient = Arc<dyn Fn(RealJet) -> RealJet + Send + Sync>;

/// Exact curves of a family, used by the brute-force oracle.
pub trait ExactCurves: Send + Sync {
    fn abscissa(&self, n: usize, t: f64) -> f64;
    fn ordinate(&self, n: usize, t: f64) -> f64;
}

#[derive(Clone)]
pub struct FamilySpec {
    pub p0: Coefficient,
    pub q0: Coefficient,
    pub r0: Coefficient,
    pub p1: Coefficient,
    pub q1: Coefficient,
    pub r1: Coefficient,
    /// Parameter interval.
    pub interval: (f64, f64),
    pub curves: Option<Arc<dyn ExactCurves>>,
}

impl fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilySpec")
            .field("interval", &self.interval)
            .field("has_curves", &self.curves.is_some())
            .finish_non_exhaustive()
    }
}

fn zero() -> Coefficient {
    Arc::new(|_| RealJet::constant(0.0))
}

impl FamilySpec {
    /// Family with vanishing `q` and `r` coefficients.
    pub fn leading(p0: Coefficient, p1: Coefficient, interval: (f64, f64)) -> Self {
        Self {
            p0,
            q0: zero(),
            r0: zero(),
            p1,
            q1: zero(),
            r1: zero(),
            interval,
            curves: None,
        }
    }

    pub fn with_curves(mut self, curves: Arc<dyn ExactCurves>) -> Self {
        self.curves = Some(curves);
        self
    }

    fn beta(&self, t: f64) -> RealJet {
        let s = RealJet::seed(t);
        (self.p1)(s) / (self.p0)(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoeffs {
    pub t0: f64,
    pub b0: f64,
    pub b2: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    /// `p0 r1 - p1 r0` at `t0`.
    pub delta0: f64,
    /// `q0(t0)`, the phase of the oscillating term.
    pub phase: f64,
    /// `p0(t0)`, its period.
    pub period: f64,
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
pub fn nearest_int_dist(x: f64) -> f64 {
    (x - x.round_ties_even()).abs().min(0.5)
}

pub fn analyze(family: &FamilySpec) -> Result<AsymptoticCoeffs, AsymptoticError> {
    let (lo, hi) = family.interval;
    let grid: Vec<f64> = (0..HYPOTHESIS_GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (HYPOTHESIS_GRID - 1) as f64)
        .collect();
    for &t in &grid {
        let s = RealJet::seed(t);
        let p0 = (family.p0)(s);
        if !(p0.v > 0.0) {
            return Err(AsymptoticError::Hypothesis { what: "p0 > 0", t });
        }
        if !(p0.d1 > 0.0) {
            return Err(AsymptoticError::Hypothesis { what: "p0' > 0", t });
        }
        if !((family.p1)(s).v > 0.0) {
            return Err(AsymptoticError::Hypothesis { what: "p1 > 0", t });
        }
    }

    let slopes: Vec<f64> = grid.iter().map(|&t| family.beta(t).d1).collect();
    let mut brackets = grid
        .windows(2)
        .zip(slopes.windows(2))
        .filter(|(_, s)| s[0] < 0.0 && s[1] >= 0.0)
        .map(|(g, _)| (g[0], g[1]));
    let (a, b) = brackets
        .next()
        .ok_or(AsymptoticError::NoInteriorMinimum(lo, hi))?;
    if brackets.next().is_some() {
        return Err(AsymptoticError::SeveralMinima(lo, hi));
    }
    // a stationary point exactly at the right end is still an endpoint
    if b == hi && slopes[slopes.len() - 1] == 0.0 {
        return Err(AsymptoticError::NoInteriorMinimum(lo, hi));
    }
    let t0 = roots::newton_bisect(
        |t| {
            let b = family.beta(t);
            (b.d1, b.d2)
        },
        a,
        b,
        1e-15,
    )?;

    let beta = family.beta(t0);
    let b2 = beta.d2;
    if !(b2 >= 1e-10) {
        return Err(AsymptoticError::Degenerate(b2));
    }
    let s = RealJet::seed(t0);
    let (p0, q0, r0) = ((family.p0)(s), (family.q0)(s), (family.r0)(s));
    let (p1, q1, r1) = ((family.p1)(s), (family.q1)(s), (family.r1)(s));
    let b0 = beta.v;
    let delta0 = p0.v * r1.v - p1.v * r0.v;
    let slope = q1.d1 - b0 * q0.d1;
    Ok(AsymptoticCoeffs {
        t0,
        b0,
        b2,
        a0: b0,
        a1: q1.v - b0 * q0.v,
        a2: -slope * slope / (2.0 * b2) + delta0,
        a3: 0.5 * b2 * (p0.v * p0.v / p0.d1).powi(2),
        delta0,
        phase: q0.v,
        period: p0.v,
    })
}

impl AsymptoticCoeffs {
    /// `a2 + a3 <(u - q0)/p0>^2`.
    pub fn oscillation(&self, u: f64) -> f64 {
        let d = nearest_int_dist((u - self.phase) / self.period);
        self.a2 + self.a3 * d * d
    }

    pub fn predict(&self, u: f64) -> f64 {
        self.a0 * u + self.a1 + self.oscillation(u) / u
    }
}

pub fn predict(coeffs: &AsymptoticCoeffs, u: f64) -> f64 {
    coeffs.predict(u)
}

/// Number of subintervals scanned for roots of `abscissa(n, t) = u`.
const ROOT_SCAN: usize = 256;

/// Lower envelope at abscissa `u` by direct search over the exact curves.
pub fn brute_force_envelope(
    family: &FamilySpec,
    n_range: std::ops::RangeInclusive<usize>,
    u: f64,
) -> Result<f64, AsymptoticError> {
    let curves = family
        .curves
        .as_ref()
        .ok_or(AsymptoticError::EmptyCandidates(u))?;
    let (lo, hi) = family.interval;
    let h = (hi - lo) / ROOT_SCAN as f64;
    let mut best = f64::INFINITY;
    for n in n_range {
        let g = |t: f64| curves.abscissa(n, t) - u;
        let mut left = (lo, g(lo));
        for i in 1..=ROOT_SCAN {
            let t = if i == ROOT_SCAN { hi } else { lo + h * i as f64 };
            let right = (t, g(t));
            if left.1 == 0.0 || left.1.signum() != right.1.signum() {
                let root = roots::bisect(g, left.0, right.0, 1e-15)?;
                best = best.min(curves.ordinate(n, root));
            }
            left = right;
        }
        if left.1 == 0.0 {
            best = best.min(curves.ordinate(n, hi));
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(AsymptoticError::EmptyCandidates(u))
    }
}

/// Curves `(n t, n e^t)`: the arithmetic-geometric-mean problem in
/// logarithmic coordinates.
pub struct AmGmCurves;

impl ExactCurves for AmGmCurves {
    fn abscissa(&self, n: usize, t: f64) -> f64 {
        n as f64 * t
    }
    fn ordinate(&self, n: usize, t: f64) -> f64 {
        n as f64 * t.exp()
    }
}

pub fn am_gm_family() -> FamilySpec {
    FamilySpec::leading(Arc::new(|t| t), Arc::new(|t: RealJet| t.exp()), (0.5, 1.5))
        .with_curves(Arc::new(AmGmCurves))
}

/// `min_n n e^(u/n)`, the value of the unshifted problem at `x = e^u`.
pub fn am_gm_value(u: f64) -> f64 {
    let guess = u.round().max(1.0) as usize;
    (guess.saturating_sub(3).max(1)..=guess + 3)
        .map(|n| n as f64 * (u / n as f64).exp())
        .fold(f64::INFINITY, f64::min)
}

/// Tolerance used for the series behind the main-instance coefficients.
pub const MAIN_SERIES_TOL: f64 = 1e-13;

/// Curves `(log xi_n(t), eta_n(t))` of the main problem.
pub struct MainCurves;

impl ExactCurves for MainCurves {
    fn abscissa(&self, n: usize, t: f64) -> f64 {
        trajectory::evolve(t, n).expect("real trajectory").xi.ln()
    }
    fn ordinate(&self, n: usize, t: f64) -> f64 {
        trajectory::evolve(t, n).expect("real trajectory").eta
    }
}

fn main_series(t: RealJet) -> trajectory::Series<RealJet> {
    trajectory::series(t, MAIN_SERIES_TOL).expect("real parameter in [1, 2]")
}

/// The main problem: `p0 = log alpha_inf`, `q0 = phi`, `p1 = alpha_inf`,
/// `q1 = psi`, no `1/n` terms. `interval` must lie inside `(t_o, 2]`.
pub fn main_family(interval: (f64, f64)) -> FamilySpec {
    FamilySpec {
        p0: Arc::new(|t| main_series(t).alpha_inf.ln()),
        q0: Arc::new(|t| main_series(t).phi),
        r0: zero(),
        p1: Arc::new(|t| main_series(t).alpha_inf),
        q1: Arc::new(|t| main_series(t).psi),
        r1: zero(),
        interval,
        curves: Some(Arc::new(MainCurves)),
    }
}

/// Constants of the main problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainConstants {
    /// Minimizer of `alpha_inf` on [1, 2].
    pub t_o: f64,
    /// Left solution of `alpha_inf(t) = e`.
    pub t_a: f64,
    /// Right solution of `alpha_inf(t) = e`.
    pub t_b: f64,
    pub alpha_at_t_o: f64,
    pub alpha_at_1: f64,
    pub alpha_at_2: f64,
    pub phi_at_t_b: f64,
    pub psi_at_t_b: f64,
    /// `psi - beta phi` at `t_b`.
    pub zeta_at_t_b: f64,
    pub zeta_slope_at_t_b: f64,
    /// Intercept: `F(x) ~ e log x - a_intercept`.
    pub a_intercept: f64,
    /// Phase shift of the oscillating term.
    pub b_shift: f64,
    /// `beta''(t_b) (p0^2/p0')^2`, which should equal e.
    pub curvature_identity: f64,
}

impl MainConstants {
    pub fn compute() -> Result<Self, AsymptoticError> {
        let tol = MAIN_SERIES_TOL;
        let alpha = |t: f64| trajectory::alpha_inf(RealJet::seed(t), tol);
        let t_o = roots::newton_bisect(
            |t| {
                let a = alpha(t).expect("real parameter");
                (a.d1, a.d2)
            },
            1.2,
            1.7,
            1e-15,
        )?;
        let level = |t: f64| {
            let a = alpha(t).expect("real parameter");
            (a.v - E, a.d1)
        };
        let t_a = roots::newton_bisect(level, 1.0, t_o, 1e-15)?;
        let t_b = roots::newton_bisect(level, t_o, 2.0, 1e-15)?;

        let s = trajectory::series(RealJet::seed(t_b), tol)?;
        let zeta = s.zeta();
        let p0 = s.alpha_inf.ln();
        let beta = s.beta();
        Ok(Self {
            t_o,
            t_a,
            t_b,
            alpha_at_t_o: trajectory::alpha_inf(t_o, tol)?,
            alpha_at_1: trajectory::alpha_inf(1.0, tol)?,
            alpha_at_2: trajectory::alpha_inf(2.0, tol)?,
            phi_at_t_b: s.phi.v,
            psi_at_t_b: s.psi.v,
            zeta_at_t_b: zeta.v,
            zeta_slope_at_t_b: zeta.d1,
            a_intercept: 1.0 - zeta.v,
            b_shift: -s.phi.v,
            curvature_identity: beta.d2 * (p0.v * p0.v / p0.d1).powi(2),
        })
    }

    /// `e log x - A + (e/2) <log x + b>^2 / log x`.
    pub fn predict_value(&self, x: f64) -> f64 {
        let u = x.ln();
        let d = nearest_int_dist(u + self.b_shift);
        E * u - self.a_intercept + 0.5 * E * d * d / u
    }

    /// Parameter interval used for the main family.
    pub fn family_interval(&self) -> (f64, f64) {
        (self.t_o + 0.05, 1.95)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_int_distance() {
        assert_eq!(nearest_int_dist(3.0), 0.0);
        assert_eq!(nearest_int_dist(2.5), 0.5);
        assert_eq!(nearest_int_dist(-1.5), 0.5);
        assert!((nearest_int_dist(7.8) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn am_gm_coefficients() {
        let c = analyze(&am_gm_family()).unwrap();
        assert!((c.t0 - 1.0).abs() < 1e-12);
        assert!((c.a0 - E).abs() < 1e-12);
        assert!(c.a1.abs() < 1e-12 && c.a2.abs() < 1e-12);
        assert!((c.a3 - E / 2.0).abs() < 1e-12);
        let want = E * 10.5 + E / 2.0 * 0.25 / 10.5;
        assert!((c.predict(10.5) - want).abs() < 1e-12);
    }

    #[test]
    fn am_gm_oracle_scan() {
        let f = brute_force_envelope(&am_gm_family(), 1..=40, 10.0).unwrap();
        let direct = (1..=40)
            .map(|n| n as f64 * (10.0 / n as f64).exp())
            .fold(f64::INFINITY, f64::min);
        assert!((f - direct).abs() < 1e-12);
        assert!((f - 10.0 * E).abs() < 1e-12);
        assert_eq!(am_gm_value(10.0), direct);
    }

    fn synthetic() -> FamilySpec {
        struct Lin;
        impl ExactCurves for Lin {
            fn abscissa(&self, n: usize, t: f64) -> f64 {
                n as f64 * t
            }
            fn ordinate(&self, n: usize, t: f64) -> f64 {
                n as f64 * (2.0 * t + t * (t - 1.0).powi(2))
            }
        }
        let one = RealJet::constant(1.0);
        let two = RealJet::constant(2.0);
        FamilySpec::leading(
            Arc::new(|t| t),
            Arc::new(move |t| two * t + t * (t - one) * (t - one)),
            (0.5, 1.5),
        )
        .with_curves(Arc::new(Lin))
    }

    #[test]
    fn synthetic_family() {
        let c = analyze(&synthetic()).unwrap();
        assert!((c.t0 - 1.0).abs() < 1e-10);
        assert!((c.b0 - 2.0).abs() < 1e-12 && (c.a0 - 2.0).abs() < 1e-12);
        assert!(c.a1.abs() < 1e-12);
        assert!((c.b2 - 2.0).abs() < 1e-9 && (c.a3 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn synthetic_remainder_is_second_order() {
        let fam = synthetic();
        let c = analyze(&fam).unwrap();
        let worst = |u0: f64| {
            (0..50)
                .map(|k| {
                    let u = u0 + k as f64 / 50.0;
                    let f = brute_force_envelope(&fam, 1..=200, u).unwrap();
                    u * u * (f - c.predict(u)).abs()
                })
                .fold(0.0, f64::max)
        };
        let (c40, c80) = (worst(40.0), worst(80.0));
        assert!(c40 < 1.0 && c80 < 1.0);
        assert!((c40 - c80).abs() < 0.1 * c40.max(c80));
    }

    #[test]
    fn shifted_parabola_family_is_rejected() {
        // p0 = 1 + (t-1)^2 decreases left of t = 1
        let one = RealJet::constant(1.0);
        let two = RealJet::constant(2.0);
        let fam = FamilySpec::leading(
            Arc::new(move |t| one + (t - one) * (t - one)),
            Arc::new(move |t| two + (t - one) * (t - one)),
            (0.0, 2.0),
        );
        assert!(matches!(
            analyze(&fam),
            Err(AsymptoticError::Hypothesis { what: "p0' > 0", .. })
        ));
    }

    #[test]
    fn endpoint_minimum_is_rejected() {
        let fam = FamilySpec::leading(
            Arc::new(|t| t),
            Arc::new(|t: RealJet| t * t.exp()),
            (0.5, 1.5),
        );
        // beta = e^t increases throughout
        assert_eq!(
            analyze(&fam),
            Err(AsymptoticError::NoInteriorMinimum(0.5, 1.5))
        );
    }

    #[test]
    fn main_constants() {
        let k = MainConstants::compute().unwrap();
        assert!((k.a_intercept - 1.704_656_037_2).abs() < 1e-8);
        assert!((k.b_shift - 0.697_388_560_1).abs() < 1e-8);
        assert!((k.phi_at_t_b + 0.697_388_560_1).abs() < 1e-8);
        assert!((k.zeta_at_t_b + 0.704_656).abs() < 1e-5);
        assert!((k.t_a - 1.185_591_828).abs() < 1e-6);
        assert!((k.t_b - 1.742_084_284).abs() < 1e-6);
        assert!((k.t_o - 1.447_847).abs() < 1e-5);
        assert!(k.zeta_slope_at_t_b.abs() < 1e-8);
        assert!((k.curvature_identity - E).abs() < 1e-8);
        assert!(k.alpha_at_t_o < E && E < k.alpha_at_1);
    }

    #[test]
    fn main_family_coefficients() {
        let k = MainConstants::compute().unwrap();
        let c = analyze(&main_family(k.family_interval())).unwrap();
        assert!((c.t0 - k.t_b).abs() < 1e-7);
        assert!((c.a0 - E).abs() < 1e-9);
        assert!((c.a3 - E / 2.0).abs() < 1e-8);
        assert!(c.a2.abs() < 1e-7);
        assert!((c.a1 - k.zeta_at_t_b).abs() < 1e-9);
        assert!((c.period - 1.0).abs() < 1e-9);
        // prediction collapses to e u - A + 1 on the lattice <u + b> = 0
        let u = 30.0 - k.b_shift;
        assert!((c.predict(u) - (E * u + c.a1)).abs() < 1e-6);
    }
}
