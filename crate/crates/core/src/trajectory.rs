//! The extremal-trajectory recurrences and their limits.
//!
//! States are indexed so that `n = 0` holds `(t - 1, 1, 1)` and each step
//! applies
//!
//! ```text
//! alpha' = alpha + 1/xi,   xi' = alpha' * xi,   eta' = eta + alpha
//! ```
//!
//! Everything is generic over [`Scalar`], so the same code evaluates plain
//! values, real jets and complex jets.

use thiserror::Error;

use crate::jets::{Real, RealJet, Scalar};

/// Hard cap on the number of recurrence steps used for a limit.
pub const MAX_TERMS: usize = 200;
/// Extra steps taken past the value criterion so derivative tails settle.
pub const DERIVATIVE_MARGIN: usize = 20;
/// Anchor index for the real-axis tail estimate.
pub const REAL_ANCHOR: usize = 4;
/// Last anchor tried when looking for tail control at complex points.
pub const MAX_COMPLEX_ANCHOR: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("singular trajectory: |xi_{n}| = {modulus:e}")]
    Singular { n: usize, modulus: f64 },
    #[error("tail condition fails for every anchor up to {0}")]
    NoTailControl(usize),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState<S> {
    pub n: usize,
    pub alpha: S,
    pub xi: S,
    pub eta: S,
}

impl<S: Scalar> TrajectoryState<S> {
    pub fn initial(t: S) -> Self {
        Self {
            n: 0,
            alpha: t - S::from_f64(1.0),
            xi: S::from_f64(1.0),
            eta: S::from_f64(1.0),
        }
    }

    pub fn step(&self) -> Result<Self, TrajectoryError> {
        let m = self.xi.modulus();
        if !(m >= 1e-300) {
            return Err(TrajectoryError::Singular { n: self.n, modulus: m });
        }
        let alpha = self.alpha + self.xi.recip();
        Ok(Self {
            n: self.n + 1,
            alpha,
            xi: alpha * self.xi,
            eta: self.eta + self.alpha,
        })
    }

    /// Iterator over this state and all its successors.
    pub fn successors(self) -> impl Iterator<Item = Result<Self, TrajectoryError>> {
        let mut cur = Some(Ok(self));
        std::iter::from_fn(move || {
            let out = cur.take()?;
            if let Ok(s) = &out {
                cur = Some(s.step());
            }
            Some(out)
        })
    }
}

pub fn evolve<S: Scalar>(t: S, n: usize) -> Result<TrajectoryState<S>, TrajectoryError> {
    let mut s = TrajectoryState::initial(t);
    while s.n < n {
        s = s.step()?;
    }
    Ok(s)
}

/// States 0..=n.
pub fn path<S: Scalar>(t: S, n: usize) -> Result<Vec<TrajectoryState<S>>, TrajectoryError> {
    TrajectoryState::initial(t).successors().take(n + 1).collect()
}

/// Geometric tail control `|xi_n| >= |xi_n0| a^(n - n0)` for `n >= n0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub n0: usize,
    pub a: f64,
    /// `|xi_n0|`.
    pub xi_anchor: f64,
}

impl TailEstimate {
    /// Upper bound for `sum_{j >= n} 1/|xi_j|`, valid for `n >= n0`.
    pub fn bound(&self, n: usize) -> f64 {
        let k = n as f64 - self.n0 as f64;
        self.a.powf(-k) / (self.xi_anchor * (1.0 - 1.0 / self.a))
    }

    /// Real parameters `t >= 1`: every `alpha_j` with `j >= 2` is at least 2,
    /// so the ratio 2 works from any anchor `n0 >= 2`.
    pub fn real_axis<S: Scalar>(anchor: &TrajectoryState<S>) -> Self {
        debug_assert!(anchor.n >= 2);
        Self {
            n0: anchor.n,
            a: 2.0,
            xi_anchor: anchor.xi.modulus(),
        }
    }

    /// Whether `1 + |xi|^(-1/2) <= a < |alpha|^(1/2)` holds at the anchor.
    pub fn condition_holds<S: Scalar>(anchor: &TrajectoryState<S>, a: f64) -> bool {
        let lo = 1.0 + anchor.xi.modulus().powf(-0.5);
        lo <= a && a < anchor.alpha.modulus().sqrt()
    }

    /// Tail control at a general (complex) point with a prescribed ratio.
    pub fn with_ratio<S: Scalar>(anchor: &TrajectoryState<S>, a: f64) -> Option<Self> {
        Self::condition_holds(anchor, a).then(|| Self {
            n0: anchor.n,
            a,
            xi_anchor: anchor.xi.modulus(),
        })
    }

    /// Tail control at a general point, picking the ratio halfway inside the
    /// admissible window.
    pub fn at_anchor<S: Scalar>(anchor: &TrajectoryState<S>) -> Option<Self> {
        let lo = 1.0 + anchor.xi.modulus().powf(-0.5);
        let hi = anchor.alpha.modulus().sqrt();
        (hi > lo).then(|| Self {
            n0: anchor.n,
            a: 0.5 * (lo + hi),
            xi_anchor: anchor.xi.modulus(),
        })
    }
}

fn on_real_axis<S: Scalar>(t: S) -> bool {
    t.im() == 0.0 && t.re() >= 1.0
}

/// The first anchor at or after `REAL_ANCHOR` with tail control, and the
/// estimate it gives.
pub fn tail_anchor<S: Scalar>(t: S) -> Result<(TrajectoryState<S>, TailEstimate), TrajectoryError> {
    let mut s = evolve(t, REAL_ANCHOR)?;
    if on_real_axis(t) {
        let est = TailEstimate::real_axis(&s);
        return Ok((s, est));
    }
    loop {
        if let Some(est) = TailEstimate::at_anchor(&s) {
            return Ok((s, est));
        }
        if s.n >= MAX_COMPLEX_ANCHOR {
            return Err(TrajectoryError::NoTailControl(MAX_COMPLEX_ANCHOR));
        }
        s = s.step()?;
    }
}

/// Smallest `n >= est.n0` with `scale * est.bound(n) < tol`.
fn terms_for(est: &TailEstimate, tol: f64, scale: f64) -> usize {
    let mut n = est.n0;
    while scale * est.bound(n) >= tol && n < MAX_TERMS {
        n += 1;
    }
    n
}

/// A truncated limit together with the bookkeeping that justifies it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limit<S> {
    pub value: S,
    /// Index of the state whose `alpha` was returned.
    pub terms: usize,
    pub tail: TailEstimate,
}

impl<S> Limit<S> {
    /// Bound on the truncation error of the value.
    pub fn error_bound(&self) -> f64 {
        self.tail.bound(self.terms)
    }
}

pub fn alpha_inf_detailed<S: Scalar>(t: S, tol: f64) -> Result<Limit<S>, TrajectoryError> {
    if !(tol > 0.0) {
        return Err(TrajectoryError::BadTolerance(tol));
    }
    let (mut s, tail) = tail_anchor(t)?;
    let n = (terms_for(&tail, tol, 1.0) + DERIVATIVE_MARGIN).min(MAX_TERMS);
    while s.n < n {
        s = s.step()?;
    }
    Ok(Limit {
        value: s.alpha,
        terms: n,
        tail,
    })
}

/// `lim alpha_n(t)` to within `tol`.
pub fn alpha_inf<S: Scalar>(t: S, tol: f64) -> Result<S, TrajectoryError> {
    alpha_inf_detailed(t, tol).map(|l| l.value)
}

/// The correction series evaluated in one pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series<R> {
    pub alpha_inf: R,
    /// `sum_{j>=1} log(1 - delta_j / alpha_inf)`.
    pub phi: R,
    /// `t - alpha_inf - sum_{j>=1} delta_j`.
    pub psi: R,
    /// Number of series terms summed.
    pub terms: usize,
}

impl<R: Real> Series<R> {
    /// `alpha_inf / log alpha_inf`.
    pub fn beta(&self) -> R {
        self.alpha_inf / self.alpha_inf.ln()
    }

    /// `psi - beta * phi`.
    pub fn zeta(&self) -> R {
        self.psi - self.beta() * self.phi
    }
}

pub fn series<R: Real>(t: R, tol: f64) -> Result<Series<R>, TrajectoryError> {
    if !(tol > 0.0) {
        return Err(TrajectoryError::BadTolerance(tol));
    }
    let (_, tail) = tail_anchor(t)?;
    let n_alpha = (terms_for(&tail, tol * 1e-3, 1.0) + DERIVATIVE_MARGIN).min(MAX_TERMS);
    // Each remaining term of either series is at most delta_j, and the
    // deltas past n sum to at most 2 * bound(n).
    let n_series = (terms_for(&tail, tol, 2.0) + DERIVATIVE_MARGIN).min(n_alpha);
    let states = path(t, n_alpha)?;
    let a_inf = states.last().expect("non-empty path").alpha;
    let mut phi = R::from_f64(0.0);
    let mut delta_sum = R::from_f64(0.0);
    for s in &states[1..n_series] {
        let delta = a_inf - s.alpha;
        phi += (-(delta / a_inf)).ln_1p();
        delta_sum += delta;
    }
    Ok(Series {
        alpha_inf: a_inf,
        phi,
        psi: t - a_inf - delta_sum,
        terms: n_series - 1,
    })
}

pub fn phi(t: f64, tol: f64) -> Result<RealJet, TrajectoryError> {
    series(RealJet::seed(t), tol).map(|s| s.phi)
}

pub fn psi(t: f64, tol: f64) -> Result<RealJet, TrajectoryError> {
    series(RealJet::seed(t), tol).map(|s| s.psi)
}

pub fn zeta(t: f64, tol: f64) -> Result<RealJet, TrajectoryError> {
    series(RealJet::seed(t), tol).map(|s| s.zeta())
}

/// `sum_{j>=1} delta_j alpha_j' / alpha_j - (1 - alpha_inf')`, which
/// vanishes identically.
pub fn abel_identity_residual(t: f64, tol: f64) -> Result<f64, TrajectoryError> {
    let lim = alpha_inf_detailed(RealJet::seed(t), tol * 1e-3)?;
    let states = path(RealJet::seed(t), lim.terms)?;
    let a_inf = lim.value;
    let sum: f64 = states[1..]
        .iter()
        .map(|s| (a_inf.v - s.alpha.v) * s.alpha.d1 / s.alpha.v)
        .sum();
    Ok(sum - (1.0 - a_inf.d1))
}

/// Differences `(xi_n(1) - xi_{n-1}(2), eta_n(1) - eta_{n-1}(2),
/// alpha_n(1) - alpha_{n-1}(2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftResidual {
    pub xi: f64,
    pub eta: f64,
    pub alpha: f64,
}

impl ShiftResidual {
    /// Largest component relative to the size of the compared values.
    pub fn max_relative(&self, n: usize) -> f64 {
        let s = evolve(1.0, n).expect("real trajectory");
        (self.xi / s.xi)
            .abs()
            .max((self.eta / s.eta).abs())
            .max((self.alpha / s.alpha).abs())
    }
}

pub fn shift_identity_check(n: usize) -> Result<ShiftResidual, TrajectoryError> {
    assert!(n >= 1, "shift identity needs n >= 1");
    let a = evolve(1.0, n)?;
    let b = evolve(2.0, n - 1)?;
    Ok(ShiftResidual {
        xi: a.xi - b.xi,
        eta: a.eta - b.eta,
        alpha: a.alpha - b.alpha,
    })
}

/// `eta_n'(t) - xi_n'(t) / xi_{n-1}(t)`, which vanishes for `n >= 1`.
pub fn derivative_identity_residual(n: usize, t: f64) -> Result<f64, TrajectoryError> {
    assert!(n >= 1, "derivative identity needs n >= 1");
    let prev = evolve(RealJet::seed(t), n - 1)?;
    let cur = prev.step()?;
    Ok(cur.eta.d1 - cur.xi.d1 / prev.xi.v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn first_rows() {
        for t in [1.0, 1.5, 2.0] {
            let s = evolve(t, 1).unwrap();
            assert_eq!((s.alpha, s.xi, s.eta), (t, t, t));
            let s = evolve(t, 2).unwrap();
            assert!(rel(s.alpha, t + 1.0 / t) < 1e-15);
            assert!(rel(s.xi, t * t + 1.0) < 1e-15);
            assert!(rel(s.eta, 2.0 * t) < 1e-15);
            let s = evolve(t, 3).unwrap();
            assert!(rel(s.eta, 3.0 * t + 1.0 / t) < 1e-12);
            assert!(rel(s.xi, t.powi(3) + 2.0 * t + 1.0 + 1.0 / t) < 1e-12);
        }
    }

    #[test]
    fn rational_values_at_two() {
        let s = evolve(2.0, 3).unwrap();
        assert!(rel(s.alpha, 2.7) < 1e-15);
        assert!(rel(s.xi, 13.5) < 1e-15);
        assert_eq!(evolve(2.0, 2).unwrap().eta, 4.0);
        assert!(rel(evolve(2.0, 4).unwrap().alpha, 749.0 / 270.0) < 1e-15);
        assert!(rel(evolve(1.5, 3).unwrap().xi, 193.0 / 24.0) < 1e-15);
    }

    #[test]
    fn xi7_slope_at_one() {
        let d = evolve(RealJet::seed(1.0), 7).unwrap().xi.d1;
        assert!(rel(d, -19_661_554_943_536.0 / 328_636_389_375.0) < 1e-9);
    }

    #[test]
    fn singular_trajectory_is_reported() {
        // xi_2 = t^2 + 1 vanishes at t = i
        let err = evolve(Complex64::new(0.0, 1.0), 4).unwrap_err();
        assert!(matches!(err, TrajectoryError::Singular { n: 2, .. }));
    }

    #[test]
    fn alpha_inf_reference_values() {
        let a1 = alpha_inf(1.0, 1e-9).unwrap();
        let a2 = alpha_inf(2.0, 1e-9).unwrap();
        assert!((a1 - 2.815_572_650).abs() < 1e-8);
        assert!((a2 - 2.815_572_650).abs() < 1e-8);
        assert!((alpha_inf(1.447_847, 1e-9).unwrap() - 2.673_953_412).abs() < 1e-6);
    }

    #[test]
    fn truncation_is_honest() {
        for t in [1.0, 1.3, 1.75, 2.0] {
            let lim = alpha_inf_detailed(t, 1e-9).unwrap();
            let far = evolve(t, MAX_TERMS).unwrap().alpha;
            assert!((far - lim.value).abs() <= lim.error_bound() + 4e-16);
            assert!(lim.terms <= MAX_TERMS);
        }
    }

    #[test]
    fn bad_tolerance() {
        assert_eq!(alpha_inf(1.0, 0.0), Err(TrajectoryError::BadTolerance(0.0)));
    }

    #[test]
    fn shift_identities() {
        let r = shift_identity_check(3).unwrap();
        assert!(r.xi.abs() < 1e-12 && r.eta.abs() < 1e-12 && r.alpha.abs() < 1e-12);
        assert!(shift_identity_check(7).unwrap().max_relative(7) < 1e-9);
        assert!(derivative_identity_residual(5, 1.7).unwrap().abs() < 1e-10);
    }

    #[test]
    fn abel_identity_off_the_special_point() {
        for t in [1.0, 1.5] {
            assert!(abel_identity_residual(t, 1e-10).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn series_derivatives_match_finite_differences() {
        let h = 1e-5;
        for (t, pick) in [(1.6, 0), (1.3, 1)] {
            let get = |x: f64| {
                let s = series(x, 1e-13).unwrap();
                [s.phi, s.psi][pick]
            };
            let fd = (get(t + h) - get(t - h)) / (2.0 * h);
            let s = series(RealJet::seed(t), 1e-13).unwrap();
            let jet = [s.phi, s.psi][pick];
            assert!((jet.d1 - fd).abs() < 1e-6, "{} vs {}", jet.d1, fd);
        }
    }

    #[test]
    fn complex_tail_control_inside_loop() {
        let z = Complex64::new(1.2, 0.4);
        let lim = alpha_inf_detailed(z, 1e-10).unwrap();
        assert!(lim.tail.a > 1.0);
        let far = evolve(z, lim.terms + 30).unwrap().alpha;
        assert!((far - lim.value).norm() <= lim.error_bound());
    }
}
