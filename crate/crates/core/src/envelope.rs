//! `F(x)` as the lower envelope of the curves
//! `gamma_n: t -> (xi_n(t) - 1, eta_n(t) - 1)`.
//!
//! For `n <= 6` the map `t -> xi_n(t)` increases on [1, 2]; from `n = 7` on it
//! first dips to a cusp value `X0_n` at `t0_n` and the curve gets two
//! branches over `[X0_n, xi_n(1)]`. Consecutive curves hand over the
//! envelope at crossing abscissas `Xc_n`, in shifted coordinates
//! `X = x + 1`.

use std::sync::RwLock;

use thiserror::Error;

use crate::jets::RealJet;
use crate::roots::{self, RootError};
use crate::table::CsvTable;
use crate::trajectory::{self, TrajectoryError, TrajectoryState};

/// Upper limit on the curve index the envelope will construct.
pub const MAX_INDEX: usize = 600;
/// Samples used to detect sign changes of the crossing gap.
const GAP_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Parameters at or right of the cusp.
    Plus,
    /// Parameters at or left of the cusp.
    Minus,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvelopeError {
    #[error("xi_{n} never equals {x}: its minimum is {min}")]
    NoSolution { n: usize, x: f64, min: f64 },
    #[error("minus branch of curve {n} does not reach {x}")]
    BranchUndefined { n: usize, x: f64 },
    #[error("curves {n} and {} do not cross", n - 1)]
    NoCrossing { n: usize },
    #[error("gap between curves {n} and {} changes sign {count} times", n - 1)]
    MultipleCrossings { n: usize, count: usize },
    #[error("argument {0} outside the supported domain")]
    Domain(f64),
    #[error("curve index would exceed {MAX_INDEX}")]
    IndexLimit,
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

fn state(n: usize, t: f64) -> TrajectoryState<f64> {
    trajectory::evolve(t, n).expect("real trajectory")
}

fn jet_pair(n: usize, t: f64) -> (TrajectoryState<RealJet>, TrajectoryState<RealJet>) {
    let prev = trajectory::evolve(RealJet::seed(t), n.saturating_sub(1)).expect("real trajectory");
    let cur = if n == 0 { prev } else { prev.step().expect("real trajectory") };
    (prev, cur)
}

/// Bottom of curve `n`: the minimizer `t0` of `xi_n` on [1, 2] and `X0 =
/// xi_n(t0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cusp {
    pub n: usize,
    pub t0: f64,
    pub x0: f64,
}

pub fn cusp(n: usize) -> Result<Cusp, EnvelopeError> {
    let slope = |t: f64| {
        let s = trajectory::evolve(RealJet::seed(t), n).expect("real trajectory");
        (s.xi.d1, s.xi.d2)
    };
    let t0 = if slope(1.0).0 >= 0.0 {
        1.0
    } else {
        roots::newton_bisect(slope, 1.0, 2.0, 1e-15)?
    };
    Ok(Cusp {
        n,
        t0,
        x0: state(n, t0).xi,
    })
}

fn solve_on(n: usize, x: f64, lo: f64, hi: f64) -> Result<f64, EnvelopeError> {
    let lx = x.ln();
    let t = roots::newton_bisect(
        |t| {
            let s = trajectory::evolve(RealJet::seed(t), n).expect("real trajectory");
            (s.xi.v.ln() - lx, s.xi.d1 / s.xi.v)
        },
        lo,
        hi,
        1e-15,
    )?;
    Ok(t)
}

fn solve_with_cusp(c: &Cusp, x: f64, branch: Branch) -> Result<f64, EnvelopeError> {
    let n = c.n;
    if x < c.x0 {
        if x >= c.x0 * (1.0 - 1e-14) {
            return Ok(c.t0);
        }
        return Err(EnvelopeError::NoSolution { n, x, min: c.x0 });
    }
    match branch {
        Branch::Minus => {
            let at_one = state(n, 1.0).xi;
            if x > at_one {
                return Err(EnvelopeError::BranchUndefined { n, x });
            }
            if c.t0 == 1.0 {
                return Ok(1.0);
            }
            solve_on(n, x, 1.0, c.t0)
        }
        Branch::Plus => {
            let mut hi = 2.0f64.max(c.t0);
            while state(n, hi).xi < x {
                hi *= 2.0;
                if !hi.is_finite() || hi > 1e300 {
                    return Err(EnvelopeError::Domain(x));
                }
            }
            let lo = if hi > 2.0 { hi / 2.0 } else { c.t0 };
            solve_on(n, x, lo, hi)
        }
    }
}

/// Parameter `t` on the chosen branch with `xi_n(t) = x`.
pub fn solve_branch(n: usize, x: f64, branch: Branch) -> Result<f64, EnvelopeError> {
    solve_with_cusp(&cusp(n)?, x, branch)
}

/// Handover from curve `n - 1` to curve `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub n: usize,
    /// Parameter on curve `n` (left end of its window).
    pub t_left: f64,
    /// Parameter on curve `n - 1` (right end of its window).
    pub t_right_prev: f64,
    /// Shifted abscissa `Xc_n`.
    pub x_cross: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingMethod {
    /// 2D Newton seeded by the previous crossing, with the scalar search as
    /// fallback.
    Newton,
    /// Scalar search on the gap between the plus branches only.
    Bisection,
}

fn crossing_newton(
    cur: &Cusp,
    prev: &Cusp,
    seed: (f64, f64),
) -> Option<Crossing> {
    let n = cur.n;
    let (mut a, mut b) = seed;
    for _ in 0..100 {
        let (pa, sa) = jet_pair(n, a);
        let (pb, sb) = jet_pair(n - 1, b);
        let f1 = sa.xi.v.ln() - sb.xi.v.ln();
        let f2 = sa.eta.v - sb.eta.v;
        // eta' = xi' / xi_{n-1}
        let j11 = sa.xi.d1 / sa.xi.v;
        let j12 = -sb.xi.d1 / sb.xi.v;
        let j21 = sa.xi.d1 / pa.xi.v;
        let j22 = -sb.xi.d1 / pb.xi.v;
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let da = (f1 * j22 - f2 * j12) / det;
        let db = (j11 * f2 - j21 * f1) / det;
        a -= da;
        b -= db;
        if !(a.is_finite() && b.is_finite()) || a < 0.5 || b < 0.5 || a > 3.0 || b > 3.0 {
            return None;
        }
        if da.abs().max(db.abs()) < 1e-15 {
            break;
        }
    }
    let valid_a = a >= cur.t0 - 1e-12 && a <= 2.0;
    let valid_b = b >= prev.t0 - 1e-12 && b <= 2.0 + 1e-12;
    let sa = state(n, a);
    let sb = state(n - 1, b);
    let matched = ((sa.xi - sb.xi) / sa.xi).abs() < 1e-11 && ((sa.eta - sb.eta) / sa.eta).abs() < 1e-11;
    (valid_a && valid_b && matched).then_some(Crossing {
        n,
        t_left: a,
        t_right_prev: b,
        x_cross: sa.xi,
    })
}

fn crossing_bisection(cur: &Cusp, prev: &Cusp) -> Result<Crossing, EnvelopeError> {
    let n = cur.n;
    let lo = cur.x0;
    let hi = state(n - 1, 2.0).xi;
    let gap = |lx: f64| -> Result<f64, EnvelopeError> {
        let x = lx.exp().clamp(lo, hi);
        let a = solve_with_cusp(cur, x, Branch::Plus)?;
        let b = solve_with_cusp(prev, x, Branch::Plus)?;
        Ok(state(n, a).eta - state(n - 1, b).eta)
    };
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut samples = Vec::with_capacity(GAP_SAMPLES + 1);
    for i in 0..=GAP_SAMPLES {
        let lx = llo + (lhi - llo) * i as f64 / GAP_SAMPLES as f64;
        samples.push((lx, gap(lx)?));
    }
    let changes: Vec<(f64, f64)> = samples
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0].0, w[1].0))
        .collect();
    let (a, b) = match changes.as_slice() {
        [] => return Err(EnvelopeError::NoCrossing { n }),
        [one] => *one,
        many => {
            return Err(EnvelopeError::MultipleCrossings {
                n,
                count: many.len(),
            })
        }
    };
    let lx = roots::bisect(|lx| gap(lx).unwrap_or(f64::NAN), a, b, 1e-16)?;
    let x = lx.exp().clamp(lo, hi);
    Ok(Crossing {
        n,
        t_left: solve_with_cusp(cur, x, Branch::Plus)?,
        t_right_prev: solve_with_cusp(prev, x, Branch::Plus)?,
        x_cross: x,
    })
}

fn crossing(
    cur: &Cusp,
    prev: &Cusp,
    seed: Option<&Crossing>,
    method: CrossingMethod,
) -> Result<Crossing, EnvelopeError> {
    let n = cur.n;
    if cur.t0 == 1.0 {
        return Ok(Crossing {
            n,
            t_left: 1.0,
            t_right_prev: 2.0,
            x_cross: state(n, 1.0).xi,
        });
    }
    if method == CrossingMethod::Newton {
        let start = seed.map_or((cur.t0, 2.0), |c| (c.t_left.max(cur.t0), c.t_right_prev));
        if let Some(c) = crossing_newton(cur, prev, start) {
            return Ok(c);
        }
    }
    crossing_bisection(cur, prev)
}

/// Per-curve data: cusp plus both ends of the envelope window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialPoints {
    pub n: usize,
    pub t0: f64,
    pub x0: f64,
    /// Left end of the parameter window; 1 when the curve has no cusp.
    pub t_ell: f64,
    pub t_r: f64,
    /// Shifted abscissa where curve `n` takes over.
    pub x_cross: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSegment {
    pub n: usize,
    pub t_window: (f64, f64),
    /// Window in shifted abscissa `X = x + 1`.
    pub x_window: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePoint {
    pub value: f64,
    /// Critical index.
    pub n: usize,
    /// Curve parameter realizing the value.
    pub t: f64,
}

#[derive(Debug, Default)]
struct Cache {
    /// `cusps[n - 1]` for curve `n`.
    cusps: Vec<Cusp>,
    /// `crossings[n - 2]` for the handover to curve `n`.
    crossings: Vec<Crossing>,
}

/// Incrementally built envelope. Special points are computed on demand and
/// memoized.
#[derive(Debug)]
pub struct Envelope {
    method: CrossingMethod,
    cache: RwLock<Cache>,
}

impl Default for Envelope {
    fn default() -> Self {
        Self::new()
    }
}

impl Envelope {
    pub fn new() -> Self {
        Self::with_method(CrossingMethod::Newton)
    }

    pub fn with_method(method: CrossingMethod) -> Self {
        Self {
            method,
            cache: RwLock::new(Cache::default()),
        }
    }

    /// Makes sure crossings up to curve `n` exist.
    fn ensure(&self, n: usize) -> Result<(), EnvelopeError> {
        if n > MAX_INDEX {
            return Err(EnvelopeError::IndexLimit);
        }
        if self.cache.read().expect("cache lock").crossings.len() + 1 >= n {
            return Ok(());
        }
        let mut cache = self.cache.write().expect("cache lock");
        while cache.cusps.len() < n {
            let k = cache.cusps.len() + 1;
            cache.cusps.push(cusp(k)?);
        }
        while cache.crossings.len() + 1 < n {
            let k = cache.crossings.len() + 2;
            let c = crossing(
                &cache.cusps[k - 1],
                &cache.cusps[k - 2],
                cache.crossings.last(),
                self.method,
            )?;
            if !c.x_cross.is_finite() {
                return Err(EnvelopeError::IndexLimit);
            }
            cache.crossings.push(c);
        }
        Ok(())
    }

    pub fn cusp(&self, n: usize) -> Result<Cusp, EnvelopeError> {
        self.ensure(n.max(2))?;
        Ok(self.cache.read().expect("cache lock").cusps[n - 1])
    }

    /// Handover to curve `n >= 2`.
    pub fn crossing(&self, n: usize) -> Result<Crossing, EnvelopeError> {
        assert!(n >= 2, "crossings start at curve 2");
        self.ensure(n)?;
        Ok(self.cache.read().expect("cache lock").crossings[n - 2])
    }

    pub fn special_points(&self, n: usize) -> Result<SpecialPoints, EnvelopeError> {
        assert!(n >= 1, "curves start at 1");
        self.ensure(n + 1)?;
        let cache = self.cache.read().expect("cache lock");
        let c = cache.cusps[n - 1];
        let (t_ell, x_cross) = if n == 1 {
            (1.0, 1.0)
        } else {
            let k = cache.crossings[n - 2];
            (k.t_left, k.x_cross)
        };
        Ok(SpecialPoints {
            n,
            t0: c.t0,
            x0: c.x0,
            t_ell,
            t_r: cache.crossings[n - 1].t_right_prev,
            x_cross,
        })
    }

    pub fn segment(&self, n: usize) -> Result<EnvelopeSegment, EnvelopeError> {
        let sp = self.special_points(n)?;
        let next = self.crossing(n + 1)?;
        Ok(EnvelopeSegment {
            n,
            t_window: (sp.t_ell, sp.t_r),
            x_window: (sp.x_cross, next.x_cross),
        })
    }

    /// Index `n` with `x + 1` in `(Xc_n, Xc_{n+1}]`.
    pub fn critical_index(&self, x: f64) -> Result<usize, EnvelopeError> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(EnvelopeError::Domain(x));
        }
        let big_x = x + 1.0;
        if big_x <= 2.0 {
            return Ok(1);
        }
        let mut hi = 4;
        loop {
            self.ensure(hi)?;
            if self.crossing(hi)?.x_cross >= big_x {
                break;
            }
            hi *= 2;
        }
        let cache = self.cache.read().expect("cache lock");
        // crossings[k - 2].x_cross = Xc_k; want the largest k with Xc_k < X
        let below = cache.crossings[..hi - 1].partition_point(|c| c.x_cross < big_x);
        Ok(below + 1)
    }

    pub fn value(&self, x: f64) -> Result<EnvelopePoint, EnvelopeError> {
        let n = self.critical_index(x)?;
        Ok(match n {
            1 => EnvelopePoint { value: x, n, t: x + 1.0 },
            2 => {
                let t = x.sqrt();
                EnvelopePoint { value: 2.0 * t - 1.0, n, t }
            }
            _ => {
                let c = self.cusp(n)?;
                let t = solve_with_cusp(&c, x + 1.0, Branch::Plus)?;
                EnvelopePoint {
                    value: state(n, t).eta - 1.0,
                    n,
                    t,
                }
            }
        })
    }

    /// `F'(x)`, one-sided to the left at crossing abscissas.
    pub fn slope(&self, x: f64) -> Result<f64, EnvelopeError> {
        let p = self.value(x)?;
        Ok(curve_slope(p.n, p.t))
    }

    /// Envelope trace `(x, F, nu)` on a log grid.
    pub fn trace(&self, x_min: f64, x_max: f64, points: usize) -> Result<CsvTable, EnvelopeError> {
        let mut table = CsvTable::new(&["x", "F", "nu"]);
        for x in log_grid(x_min, x_max, points) {
            let p = self.value(x)?;
            table.push(vec![x, p.value, p.n as f64]);
        }
        Ok(table)
    }
}

/// Slope `d eta_n / d xi_n = 1 / xi_{n-1}(t)` of curve `n`.
pub fn curve_slope(n: usize, t: f64) -> f64 {
    1.0 / state(n - 1, t).xi
}

pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

/// Curve traces `(n, t, xi_n, eta_n)` on a uniform parameter grid.
pub fn curve_trace(
    n_range: std::ops::RangeInclusive<usize>,
    t_range: (f64, f64),
    points: usize,
) -> CsvTable {
    let mut table = CsvTable::new(&["n", "t", "xi", "eta"]);
    for n in n_range {
        for i in 0..points {
            let t = t_range.0 + (t_range.1 - t_range.0) * i as f64 / (points - 1) as f64;
            let s = state(n, t);
            table.push(vec![n as f64, t, s.xi, s.eta]);
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_examples() {
        assert!((solve_branch(1, 5.0, Branch::Plus).unwrap() - 5.0).abs() < 1e-12);
        assert!((solve_branch(2, 5.0, Branch::Plus).unwrap() - 2.0).abs() < 1e-12);
        let c = cusp(7).unwrap();
        let p = solve_branch(7, c.x0, Branch::Plus).unwrap();
        let m = solve_branch(7, c.x0, Branch::Minus).unwrap();
        assert!((p - m).abs() < 1e-9 && (p - c.t0).abs() < 1e-9);
    }

    #[test]
    fn branch_errors() {
        assert!(matches!(
            solve_branch(3, 4.0, Branch::Plus),
            Err(EnvelopeError::NoSolution { .. })
        ));
        assert!(matches!(
            solve_branch(4, 100.0, Branch::Minus),
            Err(EnvelopeError::BranchUndefined { .. })
        ));
    }

    #[test]
    fn branches_hit_their_target() {
        for n in [8, 15] {
            let c = cusp(n).unwrap();
            let top = state(n, 1.0).xi;
            let x = 0.5 * (c.x0 + top);
            for b in [Branch::Plus, Branch::Minus] {
                let t = solve_branch(n, x, b).unwrap();
                assert!(((state(n, t).xi - x) / x).abs() < 1e-12);
                assert_eq!(t >= c.t0, b == Branch::Plus);
            }
        }
    }

    #[test]
    fn small_index_special_points() {
        let env = Envelope::new();
        let sp = env.special_points(3).unwrap();
        assert_eq!(sp.t0, 1.0);
        assert!((sp.x0 - 5.0).abs() < 1e-12);
        assert!((env.special_points(6).unwrap().t_r - 1.9975).abs() < 1e-3);
        let sp7 = env.special_points(7).unwrap();
        assert!(1.0 < sp7.t0 && sp7.t0 < sp7.t_ell && sp7.t_ell < sp7.t_r && sp7.t_r < 2.0);
        assert!(sp7.x_cross < state(7, 1.0).xi);
    }

    #[test]
    fn newton_and_bisection_agree() {
        let a = Envelope::new();
        let b = Envelope::with_method(CrossingMethod::Bisection);
        for n in [7, 9, 13, 25] {
            let (ca, cb) = (a.crossing(n).unwrap(), b.crossing(n).unwrap());
            assert!((ca.t_left - cb.t_left).abs() < 1e-9, "{ca:?} {cb:?}");
            assert!((ca.t_right_prev - cb.t_right_prev).abs() < 1e-9);
            assert!(((ca.x_cross - cb.x_cross) / ca.x_cross).abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_examples() {
        let env = Envelope::new();
        assert_eq!(env.value(0.5).unwrap().value, 0.5);
        assert_eq!(env.critical_index(0.5).unwrap(), 1);
        assert!((env.value(4.0).unwrap().value - 3.0).abs() < 1e-12);
        assert!(matches!(env.value(-1.0), Err(EnvelopeError::Domain(_))));
    }

    #[test]
    fn continuity_across_crossings() {
        let env = Envelope::new();
        for n in 3..30 {
            let x = env.crossing(n).unwrap().x_cross - 1.0;
            let left = env.value(x * (1.0 - 1e-12)).unwrap().value;
            let right = env.value(x * (1.0 + 1e-12)).unwrap().value;
            assert!((left - right).abs() < 1e-9 * x.max(1.0), "n={n}");
        }
    }

    #[test]
    fn trace_columns() {
        let t = Envelope::new().trace(0.1, 100.0, 5).unwrap();
        assert_eq!(t.header, ["x", "F", "nu"]);
        assert_eq!(t.rows.len(), 5);
        assert_eq!(t.rows[4][0], 100.0);
    }
}
