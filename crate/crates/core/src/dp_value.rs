//! Direct evaluation of the objective sums and of the value functions by
//! dynamic programming:
//!
//! ```text
//! F_1(x) = x,   F_n(x) = min_{y >= 0} F_{n-1}(y) + x/(y + p)
//! ```
//!
//! For `p = 1` the inner search is restricted to `y <= x - 1` when `x > 1`,
//! which loses nothing because optimal predecessors never exceed `x - 1`.

use std::f64::consts::E;

use thiserror::Error;

use crate::roots;
use crate::table::CsvTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DpError {
    #[error("zero denominator at position {0}")]
    ZeroDenominator(usize),
    #[error("negative tuple entry {0}")]
    Negative(f64),
    #[error("simplex point sums to {0}, not 1")]
    NotOnSimplex(f64),
    #[error("simplex coordinates must be positive")]
    NonPositive,
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("level {0} is not in the table")]
    MissingLevel(usize),
    #[error("abscissa {0} is outside the grid")]
    OutsideGrid(f64),
}

/// Interior entries `t_1..t_{n-1}` and the terminal value `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tuple {
    pub t: Vec<f64>,
    pub x: f64,
}

impl Tuple {
    pub fn new(t: Vec<f64>, x: f64) -> Result<Self, DpError> {
        if let Some(&bad) = t.iter().chain([&x]).find(|v| !(**v >= 0.0)) {
            return Err(DpError::Negative(bad));
        }
        Ok(Self { t, x })
    }

    /// Number of summands.
    pub fn len(&self) -> usize {
        self.t.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `t_1 + t_2/(t_1 + p) + ... + x/(t_{n-1} + p)`.
pub fn objective(tuple: &Tuple, p: f64) -> Result<f64, DpError> {
    let mut entries = tuple.t.iter().copied().chain([tuple.x]);
    let mut prev = entries.next().expect("at least the terminal value");
    let mut sum = prev;
    for (k, v) in entries.enumerate() {
        let d = prev + p;
        if d == 0.0 {
            return Err(DpError::ZeroDenominator(k + 1));
        }
        sum += v / d;
        prev = v;
    }
    Ok(sum)
}

/// `sum u_j/u_{j+1} + x u_n` over a simplex point `u_1..u_n`.
pub fn additive_objective(u: &[f64], x: f64) -> f64 {
    u.windows(2).map(|w| w[0] / w[1]).sum::<f64>() + x * u[u.len() - 1]
}

fn check_simplex(u: &[f64]) -> Result<(), DpError> {
    if u.iter().any(|v| !(*v > 0.0)) {
        return Err(DpError::NonPositive);
    }
    let s: f64 = u.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(DpError::NotOnSimplex(s));
    }
    Ok(())
}

/// Simplex point to tuple: `t_j = (u_1 + ... + u_j) / u_{j+1}` for the
/// interior entries.
pub fn simplex_to_tuple(u: &[f64], x: f64) -> Result<Tuple, DpError> {
    check_simplex(u)?;
    let mut partial = 0.0;
    let t = u
        .windows(2)
        .map(|w| {
            partial += w[0];
            partial / w[1]
        })
        .collect();
    Tuple::new(t, x)
}

/// Inverse of [`simplex_to_tuple`], through the partial sums
/// `s_j = u_1 + ... + u_j`: `s_n = 1` and `s_j = t_j (s_{j+1} - s_j)`.
pub fn tuple_to_simplex(tuple: &Tuple) -> Vec<f64> {
    let n = tuple.len();
    let mut s = vec![0.0; n + 1];
    s[n] = 1.0;
    for j in (1..n).rev() {
        let t = tuple.t[j - 1];
        s[j] = t * s[j + 1] / (1.0 + t);
    }
    (1..=n).map(|j| s[j] - s[j - 1]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialCondition {
    /// `F_1(x) = x` everywhere.
    Identity,
    /// `F_1(x) = x` on `[0, 1]` and infinite beyond.
    UnitClamp,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpConfig {
    pub x_max: f64,
    pub levels: usize,
    /// Number of log-spaced grid points besides `y = 0`.
    pub grid_size: usize,
    /// The shift `p` in the denominators.
    pub shift: f64,
    pub y_min: f64,
    pub initial: InitialCondition,
}

impl Default for DpConfig {
    fn default() -> Self {
        Self {
            x_max: 1e3,
            levels: 30,
            grid_size: 20_000,
            shift: 1.0,
            y_min: 1e-6,
            initial: InitialCondition::Identity,
        }
    }
}

/// A minimizer pinned to the top of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryWarning {
    pub level: usize,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    pub grid: Vec<f64>,
    /// `values[n - 1][i] = F_n(grid[i])`.
    pub values: Vec<Vec<f64>>,
    /// `argmins[n - 1][i]`: grid index of the best predecessor; empty for
    /// level 1.
    pub argmins: Vec<Vec<usize>>,
    /// Predecessor after the golden-section polish.
    pub refined_argmins: Vec<Vec<f64>>,
    pub shift: f64,
    pub warnings: Vec<BoundaryWarning>,
}

struct Level<'a> {
    grid: &'a [f64],
    prev: &'a [f64],
    shift: f64,
}

impl Level<'_> {
    fn cost(&self, x: f64, j: usize) -> f64 {
        self.prev[j] + x / (self.grid[j] + self.shift)
    }

    /// Previous level at an off-grid point, by linear interpolation (exact on
    /// the region where the value equals its argument).
    fn prev_at(&self, y: f64) -> f64 {
        let g = self.grid;
        let j = g.partition_point(|v| *v <= y).clamp(1, g.len() - 1) - 1;
        let (a, b) = (g[j], g[j + 1]);
        let w = (y - a) / (b - a);
        let (fa, fb) = (self.prev[j], self.prev[j + 1]);
        if !fb.is_finite() {
            return if w <= 0.0 { fa } else { f64::INFINITY };
        }
        fa + w.clamp(0.0, 1.0) * (fb - fa)
    }

    /// Monotone-argmin divide and conquer over rows `rows`, each row `i`
    /// searching columns `[lo, limit(i)]`.
    fn solve(
        &self,
        rows: std::ops::Range<usize>,
        cols: (usize, usize),
        limit: &dyn Fn(usize) -> usize,
        out: &mut [usize],
    ) {
        if rows.is_empty() {
            return;
        }
        let mid = rows.start + rows.len() / 2;
        let x = self.grid[mid];
        let hi = cols.1.min(limit(mid));
        let mut best = (cols.0, self.cost(x, cols.0));
        for j in cols.0 + 1..=hi {
            let c = self.cost(x, j);
            if c < best.1 {
                best = (j, c);
            }
        }
        out[mid] = best.0;
        self.solve(rows.start..mid, (cols.0, best.0), limit, out);
        self.solve(mid + 1..rows.end, (best.0, cols.1), limit, out);
    }
}

pub fn dp_sweep(cfg: &DpConfig) -> Result<ValueTable, DpError> {
    if !(cfg.x_max > 1.0) {
        return Err(DpError::Config("x_max must exceed 1"));
    }
    if cfg.grid_size < 1000 {
        return Err(DpError::Config("grid needs at least 1000 points"));
    }
    if !(cfg.shift > 0.0) {
        return Err(DpError::Config("shift must be positive"));
    }
    if cfg.levels == 0 {
        return Err(DpError::Config("need at least one level"));
    }
    let m = cfg.grid_size;
    let (la, lb) = (cfg.y_min.ln(), cfg.x_max.ln());
    let mut grid = Vec::with_capacity(m + 1);
    grid.push(0.0);
    grid.extend((0..m).map(|i| {
        if i + 1 == m {
            cfg.x_max
        } else {
            (la + (lb - la) * i as f64 / (m - 1) as f64).exp()
        }
    }));

    let first: Vec<f64> = grid
        .iter()
        .map(|&y| match cfg.initial {
            InitialCondition::UnitClamp if y > 1.0 => f64::INFINITY,
            _ => y,
        })
        .collect();
    let mut values = vec![first];
    let mut argmins = vec![Vec::new()];
    let mut refined_argmins = vec![Vec::new()];
    let mut warnings = Vec::new();

    let restricted = cfg.shift == 1.0;
    // rows where the restriction y <= x - 1 applies
    let split = if restricted {
        grid.partition_point(|&x| x <= 1.0)
    } else {
        grid.len()
    };
    let top = grid.len() - 1;
    let limit_of = |i: usize| -> usize {
        if i < split {
            top
        } else {
            grid.partition_point(|&y| y <= grid[i] - 1.0).max(1) - 1
        }
    };

    for level in 2..=cfg.levels {
        let prev = values.last().expect("level 1 exists");
        let lv = Level {
            grid: &grid,
            prev,
            shift: cfg.shift,
        };
        let mut arg = vec![0usize; grid.len()];
        lv.solve(0..split, (0, top), &|_| top, &mut arg);
        lv.solve(split..grid.len(), (0, top), &limit_of, &mut arg);

        let mut cur = vec![0.0; grid.len()];
        let mut refined = vec![0.0; grid.len()];
        for i in 0..grid.len() {
            let x = grid[i];
            let j = arg[i];
            let discrete = lv.cost(x, j);
            let hi = limit_of(i);
            if j == top && j > 0 {
                warnings.push(BoundaryWarning { level, x });
            }
            let a = grid[j.saturating_sub(1)];
            let mut b = grid[(j + 1).min(hi)];
            if restricted && i >= split {
                b = b.min(x - 1.0).max(a);
            }
            let (y, v) = if b > a {
                roots::golden_min(
                    |y| lv.prev_at(y) + x / (y + cfg.shift),
                    a,
                    b,
                    (b - a) * 1e-9,
                )
            } else {
                (grid[j], discrete)
            };
            // ignore gains at rounding level so exact values like F = x survive
            if v < discrete - 4.0 * f64::EPSILON * discrete.abs() {
                cur[i] = v;
                refined[i] = y;
            } else {
                cur[i] = discrete;
                refined[i] = grid[j];
            }
        }
        values.push(cur);
        argmins.push(arg);
        refined_argmins.push(refined);
    }

    Ok(ValueTable {
        grid,
        values,
        argmins,
        refined_argmins,
        shift: cfg.shift,
        warnings,
    })
}

impl ValueTable {
    pub fn levels(&self) -> usize {
        self.values.len()
    }

    fn level(&self, n: usize) -> Result<&[f64], DpError> {
        if n == 0 || n > self.levels() {
            return Err(DpError::MissingLevel(n));
        }
        Ok(&self.values[n - 1])
    }

    /// `F_n(x)` interpolated linearly between grid points.
    pub fn value(&self, n: usize, x: f64) -> Result<f64, DpError> {
        let v = self.level(n)?;
        let g = &self.grid;
        if !(x >= 0.0) || x > g[g.len() - 1] {
            return Err(DpError::OutsideGrid(x));
        }
        let j = g.partition_point(|y| *y <= x).clamp(1, g.len() - 1) - 1;
        let (a, b) = (g[j], g[j + 1]);
        if x == a {
            return Ok(v[j]);
        }
        let w = (x - a) / (b - a);
        Ok(v[j] + w * (v[j + 1] - v[j]))
    }

    /// Deepest level, the best available approximation of the limit.
    pub fn limit_value(&self, x: f64) -> Result<f64, DpError> {
        self.value(self.levels(), x)
    }

    /// Grid-index minimizer `t_1, ..., t_{n-1}` for `F_n` at `grid[i]`.
    pub fn minimizer_chain(&self, n: usize, i: usize) -> Result<Vec<f64>, DpError> {
        self.level(n)?;
        let mut chain = Vec::with_capacity(n.saturating_sub(1));
        let mut idx = i;
        for level in (2..=n).rev() {
            idx = self.argmins[level - 1][idx];
            chain.push(self.grid[idx]);
        }
        chain.reverse();
        Ok(chain)
    }

    /// Rows `n, x, F_n, argmin_y`; level 1 has no predecessor and reports
    /// `NaN`.
    pub fn to_csv(&self) -> CsvTable {
        let mut table = CsvTable::new(&["n", "x", "F_n", "argmin_y"]);
        for (k, level) in self.values.iter().enumerate() {
            for (i, (&x, &f)) in self.grid.iter().zip(level).enumerate() {
                let y = self.refined_argmins[k].get(i).copied().unwrap_or(f64::NAN);
                table.push(vec![(k + 1) as f64, x, f, y]);
            }
        }
        table
    }
}

/// Smaller root of `2 log((b + 1)/2) = b/e`.
pub fn crude_b1_root() -> f64 {
    roots::bisect(|b| 2.0 * ((b + 1.0) / 2.0).ln() - b / E, 1.0, 2.0, 1e-16)
        .expect("sign change on (1, 2)")
}

/// `max_{0 <= x <= 1} e log(x + 1) + b1/(x + 1) - x`.
pub fn crude_a1(b1: f64) -> f64 {
    let (_, v) = roots::sampled_min(|x| -(E * x.ln_1p() + b1 / (x + 1.0) - x), 0.0, 1.0, 1001);
    -v
}

/// Two-sided bound `e log(x+1) - a1 + b1/(x+1) <= F(x) <= e log(x+1) - a2 +
/// b2/(x+1)` for `x >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrudeBounds {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
}

impl CrudeBounds {
    pub fn compute() -> Self {
        let b1 = crude_b1_root();
        let k = E / (E - 1.0);
        Self {
            a1: crude_a1(b1),
            b1,
            a2: k,
            b2: k,
        }
    }

    pub fn lower(&self, x: f64) -> f64 {
        E * x.ln_1p() - self.a1 + self.b1 / (x + 1.0)
    }

    pub fn upper(&self, x: f64) -> f64 {
        E * x.ln_1p() - self.a2 + self.b2 / (x + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_table(levels: usize) -> ValueTable {
        dp_sweep(&DpConfig {
            x_max: 20.0,
            levels,
            grid_size: 4000,
            ..DpConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn objective_examples() {
        assert_eq!(objective(&Tuple::new(vec![], 5.0).unwrap(), 1.0).unwrap(), 5.0);
        assert_eq!(objective(&Tuple::new(vec![1.0], 4.0).unwrap(), 1.0).unwrap(), 3.0);
        let x: f64 = 8.0;
        let t = Tuple::new(vec![x.cbrt(), x.cbrt().powi(2)], x).unwrap();
        assert!((objective(&t, 0.0).unwrap() - 6.0).abs() < 1e-12);
        let z = Tuple::new(vec![0.0, 1.0], 2.0).unwrap();
        assert_eq!(objective(&z, 0.0), Err(DpError::ZeroDenominator(1)));
        assert!(matches!(Tuple::new(vec![-1.0], 1.0), Err(DpError::Negative(_))));
    }

    #[test]
    fn additive_examples() {
        let t = simplex_to_tuple(&[0.5, 0.5], 3.0).unwrap();
        assert_eq!(t.t, vec![1.0]);
        assert_eq!(objective(&t, 1.0).unwrap(), 2.5);
        assert_eq!(additive_objective(&[0.5, 0.5], 3.0), 2.5);

        let u = [0.2, 0.3, 0.5];
        let t = simplex_to_tuple(&u, 2.0).unwrap();
        let lhs = objective(&t, 1.0).unwrap();
        assert!((lhs - additive_objective(&u, 2.0)).abs() < 1e-12);

        let t = Tuple::new(vec![1.0, 2.0], 1.0).unwrap();
        let u = tuple_to_simplex(&t);
        assert!((u[2] - 1.0 / 3.0).abs() < 1e-15);
        let back = simplex_to_tuple(&u, 1.0).unwrap();
        assert!((back.t[0] - 1.0).abs() < 1e-12 && (back.t[1] - 2.0).abs() < 1e-12);
        assert!(matches!(
            simplex_to_tuple(&[0.2, 0.2], 1.0),
            Err(DpError::NotOnSimplex(_))
        ));
    }

    #[test]
    fn second_level_closed_form() {
        let vt = small_table(2);
        assert!((vt.value(2, 4.0).unwrap() - 3.0).abs() < 2e-4);
        assert_eq!(vt.value(2, 0.5).unwrap(), 0.5);
        assert!(vt.warnings.is_empty());
    }

    #[test]
    fn unit_region_is_exact() {
        let vt = small_table(8);
        for (i, &x) in vt.grid.iter().enumerate().filter(|(_, x)| **x <= 1.0) {
            for n in 1..=8 {
                assert_eq!(vt.values[n - 1][i], x);
                assert!(vt.minimizer_chain(n, i).unwrap().iter().all(|t| *t == 0.0));
            }
        }
    }

    #[test]
    fn stabilizes_past_x() {
        let vt = small_table(14);
        let f10 = vt.value(10, 10.0).unwrap();
        for n in 11..=14 {
            assert!((vt.value(n, 10.0).unwrap() - f10).abs() < 1e-6);
        }
    }

    #[test]
    fn clamped_start_agrees_where_it_should() {
        let a = small_table(10);
        let b = dp_sweep(&DpConfig {
            x_max: 20.0,
            levels: 10,
            grid_size: 4000,
            initial: InitialCondition::UnitClamp,
            ..DpConfig::default()
        })
        .unwrap();
        for x in [0.5, 2.0, 5.0, 9.0] {
            assert!((a.value(10, x).unwrap() - b.value(10, x).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn crude_constants() {
        let b1 = crude_b1_root();
        assert!((b1 - 1.77).abs() < 0.01);
        assert!((2.0 * ((b1 + 1.0) / 2.0).ln() - b1 / E).abs() < 1e-12);
        assert!((crude_a1(b1) - 1.78).abs() < 0.01);
    }

    #[test]
    fn config_errors() {
        let bad = DpConfig {
            grid_size: 10,
            ..DpConfig::default()
        };
        assert!(matches!(dp_sweep(&bad), Err(DpError::Config(_))));
    }

    #[test]
    fn csv_shape() {
        let vt = dp_sweep(&DpConfig {
            x_max: 4.0,
            levels: 2,
            grid_size: 1000,
            ..DpConfig::default()
        })
        .unwrap();
        let t = vt.to_csv();
        assert_eq!(t.header, ["n", "x", "F_n", "argmin_y"]);
        assert_eq!(t.rows.len(), 2 * 1001);
        assert!(t.rows[0][3].is_nan());
    }
}
