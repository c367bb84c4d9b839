//! Second-order forward-mode jets.
//!
//! A [`Jet2`] carries a value together with its first and second derivative
//! with respect to a single parameter. The second component is the raw
//! second derivative, not the Taylor coefficient.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum JetError {
    #[error("logarithm of non-positive value {0}")]
    LogDomain(f64),
    #[error("division by a jet with zero value")]
    ZeroDivisor,
}

/// Numbers the recurrences can run over: plain reals, complex numbers and
/// jets of either.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn from_f64(c: f64) -> Self;
    /// Modulus of the underlying value.
    fn modulus(self) -> f64;
    /// Real part of the underlying value.
    fn re(self) -> f64;
    /// Imaginary part of the underlying value.
    fn im(self) -> f64;

    fn recip(self) -> Self {
        Self::from_f64(1.0) / self
    }
}

/// Real scalars with the elementary functions the series need.
pub trait Real: Scalar + PartialOrd {
    fn value(self) -> f64;
    fn ln(self) -> Self;
    fn ln_1p(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
}

impl Scalar for f64 {
    fn from_f64(c: f64) -> Self {
        c
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
}

impl Real for f64 {
    fn value(self) -> f64 {
        self
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn ln_1p(self) -> Self {
        f64::ln_1p(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

impl Scalar for Complex64 {
    fn from_f64(c: f64) -> Self {
        Complex64::new(c, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2<S> {
    /// Value.
    pub v: S,
    /// First derivative.
    pub d1: S,
    /// Second derivative.
    pub d2: S,
}

pub type RealJet = Jet2<f64>;
pub type ComplexJet = Jet2<Complex64>;

impl<S: Scalar> Jet2<S> {
    pub fn new(v: S, d1: S, d2: S) -> Self {
        Self { v, d1, d2 }
    }

    /// The active parameter itself.
    pub fn seed(t: S) -> Self {
        Self::new(t, S::from_f64(1.0), S::from_f64(0.0))
    }

    pub fn constant(c: S) -> Self {
        Self::new(c, S::from_f64(0.0), S::from_f64(0.0))
    }

    pub fn scale(self, k: S) -> Self {
        Self::new(self.v * k, self.d1 * k, self.d2 * k)
    }

    pub fn try_recip(self) -> Result<Self, JetError> {
        if self.v.modulus() == 0.0 {
            return Err(JetError::ZeroDivisor);
        }
        Ok(self.recip_unchecked())
    }

    fn recip_unchecked(self) -> Self {
        let r = S::from_f64(1.0) / self.v;
        let r2 = r * r;
        Self::new(
            r,
            -(self.d1 * r2),
            (S::from_f64(2.0) * self.d1 * self.d1 * r - self.d2) * r2,
        )
    }

    pub fn try_div(self, rhs: Self) -> Result<Self, JetError> {
        rhs.try_recip()?;
        Ok(self / rhs)
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.v`.
    pub fn chain(self, f: S, f1: S, f2: S) -> Self {
        Self::new(
            f,
            f1 * self.d1,
            f2 * self.d1 * self.d1 + f1 * self.d2,
        )
    }
}

impl Jet2<f64> {
    pub fn try_ln(self) -> Result<Self, JetError> {
        if self.v <= 0.0 {
            return Err(JetError::LogDomain(self.v));
        }
        Ok(Real::ln(self))
    }
}

impl Jet2<Complex64> {
    /// Jet of the real part; exact when the imaginary parts vanish.
    pub fn real_part(self) -> Jet2<f64> {
        Jet2::new(self.v.re, self.d1.re, self.d2.re)
    }

    pub fn from_real(j: Jet2<f64>) -> Self {
        Self::new(j.v.into(), j.d1.into(), j.d2.into())
    }
}

impl<S: Scalar> Add for Jet2<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl<S: Scalar> Sub for Jet2<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl<S: Scalar> Mul for Jet2<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + S::from_f64(2.0) * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl<S: Scalar> Div for Jet2<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        // quotient rule written in terms of q = f/g to keep rounding small
        let g = o.v;
        let q = self.v / g;
        let q1 = (self.d1 - q * o.d1) / g;
        let q2 = (self.d2 - S::from_f64(2.0) * q1 * o.d1 - q * o.d2) / g;
        Self::new(q, q1, q2)
    }
}

impl<S: Scalar> Neg for Jet2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.v, -self.d1, -self.d2)
    }
}

impl<S: Scalar> AddAssign for Jet2<S> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<S: Scalar> SubAssign for Jet2<S> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<S: Scalar> Scalar for Jet2<S> {
    fn from_f64(c: f64) -> Self {
        Self::constant(S::from_f64(c))
    }
    fn modulus(self) -> f64 {
        self.v.modulus()
    }
    fn re(self) -> f64 {
        self.v.re()
    }
    fn im(self) -> f64 {
        self.v.im()
    }
    fn recip(self) -> Self {
        self.recip_unchecked()
    }
}

impl PartialOrd for Jet2<f64> {
    /// Orders by value only.
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.v.partial_cmp(&other.v)
    }
}

impl Real for Jet2<f64> {
    fn value(self) -> f64 {
        self.v
    }
    fn ln(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(self.v.ln(), r, -r * r)
    }
    fn ln_1p(self) -> Self {
        let r = 1.0 / (1.0 + self.v);
        self.chain(self.v.ln_1p(), r, -r * r)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }
}
