//! Data behind the standard plots, as CSV tables.

use std::f64::consts::E;
use std::ops::RangeInclusive;
use std::str::FromStr;

use thiserror::Error;

use crate::asymptotics::{am_gm_value, nearest_int_dist, AsymptoticError, MainConstants};
use crate::envelope::{Envelope, EnvelopeError};
use crate::genpar::{ApTable, GenparError};
use crate::table::CsvTable;
use crate::trajectory::{self, TrajectoryError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FigureError {
    #[error("unknown figure {0:?}; expected f0corr, f1corr, alpha, curves or ap")]
    UnknownFigure(String),
    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Asymptotic(#[from] AsymptoticError),
    #[error(transparent)]
    Genpar(#[from] GenparError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Oscillating correction of the unshifted problem.
    F0Corr,
    /// Oscillating correction of the main problem.
    F1Corr,
    Alpha,
    Curves,
    Ap,
}

impl FromStr for Figure {
    type Err = FigureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "f0corr" => Figure::F0Corr,
            "f1corr" => Figure::F1Corr,
            "alpha" => Figure::Alpha,
            "curves" => Figure::Curves,
            "ap" => Figure::Ap,
            _ => return Err(FigureError::UnknownFigure(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureConfig {
    pub points: usize,
    /// Range of `u = log x` for the correction plots.
    pub u_range: (f64, f64),
    /// Curve indices for [`Figure::Curves`].
    pub n_range: RangeInclusive<usize>,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self {
            points: 501,
            u_range: (2.0, 40.0),
            n_range: 30..=32,
        }
    }
}

fn uniform(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

pub fn emit(figure: Figure, cfg: &FigureConfig) -> Result<CsvTable, FigureError> {
    if cfg.points < 2 {
        return Err(FigureError::TooFewPoints(cfg.points));
    }
    let (u0, u1) = cfg.u_range;
    match figure {
        Figure::F0Corr => {
            let mut t = CsvTable::new(&["u", "F0_minus_eu", "correction"]);
            for u in uniform(u0, u1, cfg.points) {
                let d = nearest_int_dist(u);
                t.push(vec![u, am_gm_value(u) - E * u, 0.5 * E * d * d / u]);
            }
            Ok(t)
        }
        Figure::F1Corr => {
            let c = MainConstants::compute()?;
            let env = Envelope::new();
            let mut t = CsvTable::new(&["u", "F_minus_eu_plus_A", "correction"]);
            for u in uniform(u0, u1, cfg.points) {
                let f = env.value(u.exp())?.value;
                let d = nearest_int_dist(u + c.b_shift);
                t.push(vec![u, f - E * u + c.a_intercept, 0.5 * E * d * d / u]);
            }
            Ok(t)
        }
        Figure::Alpha => {
            let mut t = CsvTable::new(&["t", "alpha_inf"]);
            for s in uniform(1.0, 2.0, cfg.points) {
                t.push(vec![s, trajectory::alpha_inf(s, 1e-14)?]);
            }
            Ok(t)
        }
        Figure::Curves => {
            let mut t = CsvTable::new(&["n", "t", "log_xi", "eta_minus_e_log_xi"]);
            for n in cfg.n_range.clone() {
                for s in uniform(1.0, 2.0, cfg.points) {
                    let st = trajectory::evolve(s, n)?;
                    let lx = st.xi.ln();
                    t.push(vec![n as f64, s, lx, st.eta - E * lx]);
                }
            }
            Ok(t)
        }
        Figure::Ap => Ok(ApTable::build(crate::genpar::DEFAULT_X1, crate::genpar::DEFAULT_ORBITS)?.to_csv()),
    }
}
