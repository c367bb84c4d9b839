//! Bracketed scalar root finding and one-dimensional minimization.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("non-finite function value at {0}")]
    NonFinite(f64),
}

/// Newton's method safeguarded by bisection. `f` returns the value and the
/// derivative. The bracket must contain a sign change.
pub fn newton_bisect<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64, RootError>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut a, mut b) = (lo, hi);
    let (fa, _) = f(a);
    let (fb, _) = f(b);
    if !fa.is_finite() {
        return Err(RootError::NonFinite(a));
    }
    if !fb.is_finite() {
        return Err(RootError::NonFinite(b));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoBracket { lo, hi });
    }
    let a_negative = fa < 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if !fx.is_finite() {
            return Err(RootError::NonFinite(x));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == a_negative {
            a = x;
        } else {
            b = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > a.min(b) && newton < a.max(b) {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = (next - x).abs();
        x = next;
        if step <= xtol * (1.0 + x.abs()) || (b - a).abs() <= xtol * (1.0 + x.abs()) {
            return Ok(x);
        }
    }
    Ok(x)
}

/// Plain bisection, for functions without a convenient derivative.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64, RootError>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(RootError::NoBracket { lo, hi });
    }
    let a_negative = fa < 0.0;
    while (b - a).abs() > xtol * (1.0 + a.abs()) {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == a_negative {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Golden-section search for a minimum of a unimodal function on [lo, hi].
/// Returns `(argmin, min)`.
pub fn golden_min<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimum over a uniform sample of `nodes` points followed by a
/// golden-section polish on the two neighbouring cells.
pub fn sampled_min<F>(mut f: F, lo: f64, hi: f64, nodes: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let h = (hi - lo) / (nodes - 1) as f64;
    let mut best = (lo, f(lo));
    let mut best_i = 0;
    for i in 1..nodes {
        let x = if i == nodes - 1 { hi } else { lo + h * i as f64 };
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
            best_i = i;
        }
    }
    let a = lo + h * best_i.saturating_sub(1) as f64;
    let b = (lo + h * (best_i + 1) as f64).min(hi);
    let polished = golden_min(&mut f, a, b, 1e-13 * (1.0 + hi.abs()));
    if polished.1 < best.1 {
        polished
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_finds_sqrt2() {
        let r = newton_bisect(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn newton_survives_flat_derivative() {
        let r = newton_bisect(|x| (x.powi(3), 0.0), -1.0, 2.0, 1e-14).unwrap();
        assert!(r.abs() < 1e-4);
    }

    #[test]
    fn bracket_errors() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(RootError::NoBracket { .. })
        ));
    }

    #[test]
    fn golden_min_parabola() {
        let (x, fx) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -1.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
        let (x, _) = sampled_min(|x| (x - 1.7).cos(), 0.0, 6.0, 101);
        assert!((x - (1.7 + std::f64::consts::PI)).abs() < 1e-6);
    }
}
