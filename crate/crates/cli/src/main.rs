//! Command-line front end: point evaluations, constants, figure data and the
//! verification manifest.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input or I/O trouble.

use std::fs::File;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracmin::asymptotics::MainConstants;
use fracmin::dp_value::{dp_sweep, DpConfig};
use fracmin::envelope::Envelope;
use fracmin::figures::{self, Figure, FigureConfig};
use fracmin::genpar;
use fracmin::table::CsvTable;
use fracmin::verify::{self, reference, Check, Criterion, Suite, VerifyConfig};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "fracmin", version, about = "Nested-fraction minimization: values, constants and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate F^(p)(x).
    Eval {
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Grid size for the dynamic program used when p < 1.
        #[arg(long, default_value_t = 20_000)]
        grid: usize,
    },
    /// Recompute the main constants and compare with the published digits.
    Constants {
        /// Override every tolerance with this one.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write the data behind a figure as CSV.
    Emit {
        /// One of f0corr, f1corr, alpha, curves, ap.
        figure: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Curve indices for `curves`, e.g. 30..32.
        #[arg(long, value_parser = parse_n_range, default_value = "30..32")]
        n_range: RangeInclusive<usize>,
        /// Number of sample points.
        #[arg(long, default_value_t = 501)]
        grid: usize,
    },
    /// Tabulate A(p) on (0, 1] by the step recurrence.
    TabulateAp {
        #[arg(long, default_value_t = genpar::DEFAULT_X1)]
        x1: f64,
        /// Orbits merged into the table; 1 gives the raw single orbit.
        #[arg(long, default_value_t = genpar::DEFAULT_ORBITS)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and print the manifest.
    Verify {
        /// all, identities, asymptotics, envelope, contour or genpar.
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Grid size of the dynamic-programming sweeps.
        #[arg(long, default_value_t = 20_000)]
        grid: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Compute(String),
    /// Checks ran and at least one failed; the manifest is already printed.
    #[error("verification failed")]
    Failed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed => 1,
            _ => 2,
        }
    }
}

fn parse_n_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .or_else(|| s.split_once('-'))
        .ok_or_else(|| format!("expected a range like 30..32, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a == 0 || b < a {
        return Err(format!("empty or zero-based range {s:?}"));
    }
    Ok(a..=b)
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

fn write_csv(table: &CsvTable, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let io_err = |source| CliError::Io {
                path: path.display().to_string(),
                source,
            };
            let file = File::create(path).map_err(io_err)?;
            table.write_to(file).map_err(|e| io_err(e.into()))
        }
        None => table.write_to(io::stdout().lock()).map_err(|e| CliError::Io {
            path: "stdout".into(),
            source: e.into(),
        }),
    }
}

fn eval(x: f64, p: f64, grid: usize) -> Result<(), CliError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(CliError::Usage(format!("x must be positive and finite, got {x}")));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(CliError::Usage(format!("p must be positive and finite, got {p}")));
    }
    let env = Envelope::new();
    if p == 1.0 {
        let v = env.value(x).map_err(compute)?;
        let c = MainConstants::compute().map_err(compute)?;
        let u = x.ln();
        let predicted = c.predict_value(x);
        print!("F={:.6} nu={}", v.value, v.n);
        if u > 1.0 {
            print!(" predicted={predicted:.6} scaled_residual={:.6}", u * u * (v.value - predicted).abs());
        }
        println!();
    } else if p > 1.0 {
        let v = env.value(x / p).map_err(compute)?;
        println!("F={:.6} via=F(x/p)", v.value);
    } else {
        let levels = 30 + 2 * (x + 1.0).ln().ceil() as usize;
        let table = dp_sweep(&DpConfig {
            x_max: (2.0 * x).max(10.0),
            levels,
            grid_size: grid,
            shift: p,
            ..DpConfig::default()
        })
        .map_err(compute)?;
        for w in &table.warnings {
            eprintln!("warning: minimizer at the top of the grid (level {}, x = {})", w.level, w.x);
        }
        let v = table.limit_value(x).map_err(compute)?;
        println!("F={v:.6} via=dp levels={levels} grid={grid}");
    }
    Ok(())
}

fn constants(tol: Option<f64>) -> Result<(), CliError> {
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    let c = MainConstants::compute().map_err(compute)?;
    let row = |name: &str, v: f64, target: f64, default_tol: f64| {
        Check::new(
            name,
            v,
            Criterion::Within {
                target,
                tol: tol.unwrap_or(default_tol),
            },
        )
    };
    let rows = [
        row("A", c.a_intercept, reference::A, 1e-8),
        row("b", c.b_shift, reference::B, 1e-8),
        row("t_a", c.t_a, reference::T_A, 1e-6),
        row("t_b", c.t_b, reference::T_B, 1e-6),
        row("t_o", c.t_o, reference::T_O, 1e-5),
        row("alpha_inf(t_o)", c.alpha_at_t_o, reference::ALPHA_AT_T_O, 1e-7),
        row("alpha_inf(1)", c.alpha_at_1, reference::ALPHA_AT_ENDS, 1e-7),
        row("alpha_inf(2)", c.alpha_at_2, reference::ALPHA_AT_ENDS, 1e-7),
    ];
    for r in &rows {
        println!("{r}");
    }
    if rows.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval { x, p, grid } => eval(x, p, grid),
        Command::Constants { tol } => constants(tol),
        Command::Emit {
            figure,
            out,
            n_range,
            grid,
        } => {
            let figure: Figure = figure.parse().map_err(|e: figures::FigureError| CliError::Usage(e.to_string()))?;
            let cfg = FigureConfig {
                points: grid,
                n_range,
                ..FigureConfig::default()
            };
            let table = figures::emit(figure, &cfg).map_err(|e| match e {
                figures::FigureError::TooFewPoints(_) => CliError::Usage(e.to_string()),
                other => compute(other),
            })?;
            write_csv(&table, out.as_ref())
        }
        Command::TabulateAp { x1, grid, out } => {
            let rows = if grid <= 1 {
                genpar::tabulate_ap(x1, 400).map(|r| genpar::rows_to_csv(&r))
            } else {
                genpar::ApTable::build(x1, grid).map(|t| t.to_csv())
            }
            .map_err(|e| match e {
                genpar::GenparError::Config(_) => CliError::Usage(e.to_string()),
                other => compute(other),
            })?;
            write_csv(&rows, out.as_ref())
        }
        Command::Verify { suite, seed, grid } => {
            let suites = Suite::parse(&suite).ok_or_else(|| CliError::Usage(format!("unknown suite {suite:?}")))?;
            if grid < 1000 {
                return Err(CliError::Usage("--grid must be at least 1000".into()));
            }
            let manifest = verify::run(&suites, &VerifyConfig { seed, dp_grid: grid });
            println!("{manifest}");
            if manifest.all_pass() {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {
            let _ = io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            if !matches!(e, CliError::Failed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_range_forms() {
        assert_eq!(parse_n_range("30..32").unwrap(), 30..=32);
        assert_eq!(parse_n_range("30..=32").unwrap(), 30..=32);
        assert_eq!(parse_n_range("7-9").unwrap(), 7..=9);
        assert!(parse_n_range("9..7").is_err());
        assert!(parse_n_range("0..3").is_err());
        assert!(parse_n_range("x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Failed.code(), 1);
        assert_eq!(CliError::Usage("x".into()).code(), 2);
    }
}
