//! Shared oracles for the integration tests.

#![allow(dead_code)]

use fracmin::jets::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

/// Random rational expression in one variable.
#[derive(Debug, Clone)]
pub enum Expr {
    T,
    Const(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

/// Divisors closer to zero than this make the expression unusable.
const MIN_DIVISOR: f64 = 0.05;

impl Expr {
    pub fn random<R: Rng>(rng: &mut R, depth: u32) -> Expr {
        if depth == 0 || rng.gen_bool(0.25) {
            return if rng.gen_bool(0.6) {
                Expr::T
            } else {
                Expr::Const(rng.gen_range(-3..=5))
            };
        }
        let a = Box::new(Expr::random(rng, depth - 1));
        let b = Box::new(Expr::random(rng, depth - 1));
        match rng.gen_range(0..4) {
            0 => Expr::Add(a, b),
            1 => Expr::Sub(a, b),
            2 => Expr::Mul(a, b),
            _ => Expr::Div(a, b),
        }
    }

    pub fn eval<S: Scalar>(&self, t: S) -> Option<S> {
        Some(match self {
            Expr::T => t,
            Expr::Const(c) => S::from_f64(*c as f64),
            Expr::Add(a, b) => a.eval(t)? + b.eval(t)?,
            Expr::Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Expr::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Expr::Div(a, b) => {
                let d = b.eval(t)?;
                if d.modulus() < MIN_DIVISOR {
                    return None;
                }
                a.eval(t)? / d
            }
        })
    }

    pub fn eval_exact(&self, t: &BigRational) -> Option<BigRational> {
        Some(match self {
            Expr::T => t.clone(),
            Expr::Const(c) => BigRational::from_integer(BigInt::from(*c)),
            Expr::Add(a, b) => a.eval_exact(t)? + b.eval_exact(t)?,
            Expr::Sub(a, b) => a.eval_exact(t)? - b.eval_exact(t)?,
            Expr::Mul(a, b) => a.eval_exact(t)? * b.eval_exact(t)?,
            Expr::Div(a, b) => {
                let d = b.eval_exact(t)?;
                if d.is_zero() || d.abs().to_f64()? < MIN_DIVISOR {
                    return None;
                }
                a.eval_exact(t)? / d
            }
        })
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Central first and second differences with step `h`, in exact arithmetic,
/// so the only error is truncation.
pub fn exact_differences(e: &Expr, t: &BigRational, h: &BigRational) -> Option<(f64, f64)> {
    let lo = e.eval_exact(&(t - h))?;
    let mid = e.eval_exact(t)?;
    let hi = e.eval_exact(&(t + h))?;
    let two = rational(2, 1);
    let d1 = (&hi - &lo) / (&two * h);
    let d2 = (hi - &two * mid + lo) / (h * h);
    Some((d1.to_f64()?, d2.to_f64()?))
}

/// `|a - b| <= rel (1 + |b|)`.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + b.abs())
}
