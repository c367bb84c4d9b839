//! The shifted problem `F^(p)` and its intercept `A(p)`:
//! `F^(p)(x) = e log x - A(p) + o(1)`.
//!
//! For `p > 1` the intercept is `A + e log p`. For `p <= 1` it is tabulated
//! by the recurrence
//!
//! ```text
//! x_n = e x_{n-1} - x_{n-1}^2 y_{n-1}
//! y_n = 1 - 1/x_{n-1} + e/x_n
//! z_n = z_{n-1} + x_n + theta(e - x_{n-1} y_{n-1}),   theta(s) = e log s - s
//! ```
//!
//! whose rows are `(p, A'(p), A(p))`, started near zero from the slope law
//! `A(p) ~ k0 p`, `k0 = 1/(1 - 1/e)`.

use std::f64::consts::E;

use thiserror::Error;

use crate::roots;
use crate::table::CsvTable;

/// Slope of `A` at zero.
pub const K0: f64 = 1.0 / (1.0 - 1.0 / E);
pub const DEFAULT_X1: f64 = 1e-6;
/// Orbits merged into an [`ApTable`] by default.
pub const DEFAULT_ORBITS: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenparError {
    #[error("iterate left (0, 3) at step {step}: x = {x}")]
    Divergence { step: usize, x: f64 },
    #[error("theta argument non-positive at step {0}")]
    ThetaDomain(usize),
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("table covers [{lo}, {hi}], need {p}")]
    Coverage { p: f64, lo: f64, hi: f64 },
    #[error("argument {0} outside the domain")]
    Domain(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApTableRow {
    /// The shift `p`.
    pub x: f64,
    /// `A'(p)`.
    pub y: f64,
    /// `A(p)`.
    pub z: f64,
}

pub fn theta(s: f64) -> f64 {
    E * s.ln() - s
}

/// A row together with its sensitivity to the starting point, used to
/// detect the fold past which the recurrence stops describing `A`.
#[derive(Debug, Clone, Copy)]
struct Tracked {
    row: ApTableRow,
    dx: f64,
    dy: f64,
}

enum Step {
    Valid(Tracked),
    /// The maximizer left [1, e] or the orbit folded back.
    Folded,
}

fn step(prev: &Tracked, n: usize) -> Result<Step, GenparError> {
    let ApTableRow { x, y, z } = prev.row;
    let u = E - x * y;
    if !(u > 0.0) {
        return Err(GenparError::ThetaDomain(n));
    }
    let nx = x * u;
    if !(nx > 0.0 && nx < 3.0) {
        return Err(GenparError::Divergence { step: n, x: nx });
    }
    let dx = (E - 2.0 * x * y) * prev.dx - x * x * prev.dy;
    if u < 1.0 || !(dx > 0.0) {
        return Ok(Step::Folded);
    }
    Ok(Step::Valid(Tracked {
        row: ApTableRow {
            x: nx,
            y: 1.0 - 1.0 / x + E / nx,
            z: z + nx + theta(u),
        },
        dx,
        dy: prev.dx / (x * x) - E * dx / (nx * nx),
    }))
}

fn start(x1: f64) -> Tracked {
    Tracked {
        row: ApTableRow {
            x: x1,
            y: K0,
            z: K0 * x1,
        },
        dx: 1.0,
        dy: 0.0,
    }
}

/// Valid rows of the orbit from `x1`, at most `max_steps` of them, ending at
/// the first row with `x > 1` or just before the orbit folds back.
fn orbit(x1: f64, max_steps: usize) -> Result<Vec<ApTableRow>, GenparError> {
    let mut cur = start(x1);
    let mut rows = vec![cur.row];
    while rows.len() < max_steps && cur.row.x <= 1.0 {
        match step(&cur, rows.len() + 1)? {
            Step::Valid(next) => {
                cur = next;
                rows.push(cur.row);
            }
            Step::Folded => break,
        }
    }
    Ok(rows)
}

/// Rows from `x1` until the first row with `x > 1`, which is included but is
/// not a value of `A`. Orbits that fold back before reaching 1 end early.
pub fn tabulate_ap(x1: f64, max_steps: usize) -> Result<Vec<ApTableRow>, GenparError> {
    if !(x1 > 0.0 && x1 <= 1e-4) {
        return Err(GenparError::Config("x1 must lie in (0, 1e-4]"));
    }
    if max_steps < 10 {
        return Err(GenparError::Config("max_steps must be at least 10"));
    }
    orbit(x1, max_steps)
}

/// Start points scanned per factor `e` when shooting.
const SHOOT_SCAN: usize = 64;

/// Orbit whose last row lands on `p` exactly, started in `(x1/e, x1]`.
pub fn shoot(p: f64, x1: f64) -> Result<Vec<ApTableRow>, GenparError> {
    if !(p > x1 && p <= 1.0) {
        return Err(GenparError::Domain(p));
    }
    // index of the first row at or past p, if the orbit gets there
    let reach = |s: f64| -> Result<Option<(usize, Vec<ApTableRow>)>, GenparError> {
        let rows = orbit(s, 400)?;
        Ok(rows.iter().position(|r| r.x >= p).map(|i| (i, rows)))
    };
    let scan: Vec<f64> = (0..=SHOOT_SCAN)
        .map(|k| x1 * (-(k as f64) / SHOOT_SCAN as f64).exp())
        .collect();
    for w in scan.windows(2) {
        let (hi, lo) = (w[0], w[1]);
        let Some((n, _)) = reach(hi)? else { continue };
        let below = orbit(lo, n + 1)?;
        if below.len() <= n || below[n].x >= p {
            continue;
        }
        let gap = |s: f64| match orbit(s, n + 1) {
            Ok(rows) if rows.len() > n => rows[n].x - p,
            _ => f64::NAN,
        };
        let s = roots::bisect(gap, lo, hi, lo * 1e-15).map_err(|_| GenparError::Domain(p))?;
        let mut rows = orbit(s, n + 1)?;
        rows.truncate(n + 1);
        if rows.len() == n + 1 {
            return Ok(rows);
        }
    }
    Err(GenparError::Coverage {
        p,
        lo: x1 / E,
        hi: x1,
    })
}

/// Dense table of `A` on `(x1 / e, 1]` with monotone cubic interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct ApTable {
    rows: Vec<ApTableRow>,
}

impl ApTable {
    /// Merges `orbits` orbits with starting points spread over one step, plus
    /// one orbit shot to end at `p = 1`.
    pub fn build(x1: f64, orbits: usize) -> Result<Self, GenparError> {
        if orbits == 0 {
            return Err(GenparError::Config("need at least one orbit"));
        }
        let mut rows = Vec::new();
        for k in 0..orbits {
            let s = x1 * (-(k as f64) / orbits as f64).exp();
            rows.extend(orbit(s, 400)?.into_iter().filter(|r| r.x <= 1.0));
        }
        rows.extend(shoot(1.0, x1)?);
        rows.sort_by(|a, b| a.x.total_cmp(&b.x));
        rows.dedup_by(|a, b| a.x == b.x);
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[ApTableRow] {
        &self.rows
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.rows[0].x, self.rows[self.rows.len() - 1].x)
    }

    fn check(&self, p: f64) -> Result<usize, GenparError> {
        let (lo, hi) = self.domain();
        if !(p >= lo && p <= hi) {
            return Err(GenparError::Coverage { p, lo, hi });
        }
        Ok(self.rows.partition_point(|r| r.x <= p).clamp(1, self.rows.len() - 1) - 1)
    }

    /// Hermite data on cell `k` with the slopes limited so the interpolant
    /// stays monotone.
    fn cell(&self, k: usize) -> (f64, f64, f64, f64, f64, f64) {
        let (a, b) = (self.rows[k], self.rows[k + 1]);
        let h = b.x - a.x;
        let secant = (b.z - a.z) / h;
        let (mut m0, mut m1) = (a.y, b.y);
        if secant > 0.0 {
            let (al, be) = (m0 / secant, m1 / secant);
            let r = al * al + be * be;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                m0 *= tau;
                m1 *= tau;
            }
        }
        (a.x, h, a.z, b.z, m0, m1)
    }

    pub fn value(&self, p: f64) -> Result<f64, GenparError> {
        let (x0, h, z0, z1, m0, m1) = self.cell(self.check(p)?);
        let s = (p - x0) / h;
        let (s2, s3) = (s * s, s * s * s);
        Ok((2.0 * s3 - 3.0 * s2 + 1.0) * z0
            + (s3 - 2.0 * s2 + s) * h * m0
            + (-2.0 * s3 + 3.0 * s2) * z1
            + (s3 - s2) * h * m1)
    }

    pub fn slope(&self, p: f64) -> Result<f64, GenparError> {
        let (x0, h, z0, z1, m0, m1) = self.cell(self.check(p)?);
        let s = (p - x0) / h;
        let s2 = s * s;
        Ok(((6.0 * s2 - 6.0 * s) * z0 + (-6.0 * s2 + 6.0 * s) * z1) / h
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (3.0 * s2 - 2.0 * s) * m1)
    }

    pub fn to_csv(&self) -> CsvTable {
        rows_to_csv(&self.rows)
    }
}

pub fn rows_to_csv(rows: &[ApTableRow]) -> CsvTable {
    let mut t = CsvTable::new(&["p", "A_prime", "A"]);
    for r in rows {
        t.push(vec![r.x, r.y, r.z]);
    }
    t
}

/// `A + e log p` for `p > 1`.
pub fn ap_closed_form(p: f64, a_intercept: f64) -> Result<f64, GenparError> {
    if !(p > 1.0) {
        return Err(GenparError::Domain(p));
    }
    Ok(a_intercept + E * p.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeqResidual {
    pub residual: f64,
    /// Maximizing `u` in [1, e].
    pub argmax: f64,
}

/// `A(p) - max_{1 <= u <= e} (A(p/u) - u + e log u) - p`.
pub fn feq_residual(p: f64, table: &ApTable) -> Result<FeqResidual, GenparError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(GenparError::Domain(p));
    }
    table.check(p / E)?;
    let ap = table.value(p)?;
    let (u, neg) = roots::sampled_min(
        |u| -(table.value(p / u).unwrap_or(f64::NEG_INFINITY) - u + E * u.ln()),
        1.0,
        E,
        401,
    );
    Ok(FeqResidual {
        residual: ap - (-neg) - p,
        argmax: u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: f64 = 1.704_656_037_2;

    #[test]
    fn single_orbit_shape() {
        let rows = tabulate_ap(DEFAULT_X1, 400).unwrap();
        assert!(rows.windows(2).all(|w| w[1].x > w[0].x && w[1].z > w[0].z));
        let r = rows[1];
        assert!(r.z / r.x > K0 - 1e-3 && r.z / r.x < K0 + 1e-2);
    }

    #[test]
    fn folding_orbits_stop_early() {
        // from here the step past 0.93 would turn back
        let rows = tabulate_ap(5e-7, 400).unwrap();
        assert!(rows.windows(2).all(|w| w[1].x > w[0].x));
        assert!(rows[rows.len() - 1].x <= 1.0);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(tabulate_ap(1e-2, 100), Err(GenparError::Config(_))));
        assert!(matches!(tabulate_ap(1e-6, 3), Err(GenparError::Config(_))));
    }

    #[test]
    fn shot_orbit_lands_on_one() {
        let rows = shoot(1.0, DEFAULT_X1).unwrap();
        let end = rows[rows.len() - 1];
        assert!((end.x - 1.0).abs() < 1e-9, "{end:?}");
        assert!((end.z - A).abs() < 1e-4);
        assert!(rows[0].x <= DEFAULT_X1);
    }

    #[test]
    fn halving_the_start_barely_moves_a1() {
        let a = shoot(1.0, DEFAULT_X1).unwrap();
        let b = shoot(1.0, DEFAULT_X1 / 2.0).unwrap();
        let (za, zb) = (a[a.len() - 1].z, b[b.len() - 1].z);
        assert!((za - zb).abs() < 1e-5, "{za} {zb}");
    }

    #[test]
    fn interpolant_reproduces_nodes_and_slopes() {
        let t = ApTable::build(DEFAULT_X1, 8).unwrap();
        let r = t.rows()[t.rows().len() / 2];
        assert!((t.value(r.x).unwrap() - r.z).abs() < 1e-14);
        assert!((t.slope(r.x).unwrap() - r.y).abs() < 1e-9);
        assert!(matches!(t.value(2.0), Err(GenparError::Coverage { .. })));
    }

    #[test]
    fn closed_form_branch() {
        assert!((ap_closed_form(E, A).unwrap() - 4.422_937_865_6).abs() < 1e-7);
        assert_eq!(ap_closed_form(1.0, A), Err(GenparError::Domain(1.0)));
    }

    #[test]
    fn functional_equation_holds() {
        let t = ApTable::build(DEFAULT_X1, DEFAULT_ORBITS).unwrap();
        for p in [0.1, 0.5] {
            assert!(feq_residual(p, &t).unwrap().residual.abs() < 1e-3);
        }
        assert!(feq_residual(1e-3, &t).unwrap().argmax >= E - 0.2);
    }
}
