//! Precision-generic real-scalar contract.
//!
//! All of the quadrature machinery is written against [`RealScalar`] so that
//! the same code runs in `f64` and in arbitrary-precision arithmetic (see
//! [`crate::mp`]). A scalar type provides the elementary functions the
//! algorithms need, constants, and two queries describing the backing
//! precision: the unit roundoff `u` and the decimal digit count `D ≈ -log10(u)`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number contract the quadrature algorithms are generic over.
///
/// Operations must be deterministic for a fixed backing precision. Values are
/// immutable; all methods take `&self` and return fresh values.
pub trait RealScalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn pi() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact embedding of a binary double; never rounds.
    fn from_f64(v: f64) -> Self;
    /// Lossy conversion for diagnostics and coarse comparisons.
    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn atan(&self) -> Self;
    fn atanh(&self) -> Self;
    fn floor(&self) -> Self;

    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    fn is_negative(&self) -> bool;

    /// Unit roundoff `u` of the backing precision, `0 < u < 1`.
    fn unit_roundoff() -> Self;
    /// Working decimal digits `D ≈ -log10(u)`; stable across calls.
    fn digits() -> u32;

    /// Round-to-nearest decimal string with `sig` significant digits.
    fn to_decimal_string(&self, sig: usize) -> String;
    /// Decimal string carrying enough digits to reproduce the value exactly
    /// at this precision.
    fn to_decimal_string_full(&self) -> String;
    fn parse_decimal(s: &str) -> Option<Self>;

    fn powu(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            n >>= 1;
        }
        acc
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_i64(2)
    }

    fn max_val(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_val(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl RealScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn atan(&self) -> Self {
        f64::atan(*self)
    }
    fn atanh(&self) -> Self {
        f64::atanh(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn unit_roundoff() -> Self {
        f64::EPSILON
    }
    fn digits() -> u32 {
        16
    }

    fn to_decimal_string(&self, sig: usize) -> String {
        format!("{:.*e}", sig.max(1) - 1, self)
    }
    fn to_decimal_string_full(&self) -> String {
        // Rust's shortest round-trip representation.
        let mut s = format!("{}", self);
        if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
            s.push_str(".0");
        }
        s
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        s.parse::<f64>().ok()
    }
}

/// Compensated (Kahan) summation; keeps relative error near one roundoff even
/// for long sums of same-sign terms.
pub fn compensated_sum<S: RealScalar>(terms: impl Iterator<Item = S>) -> S {
    let mut sum = S::zero();
    let mut comp = S::zero();
    for t in terms {
        let y = t - comp.clone();
        let next = sum.clone() + y.clone();
        comp = (next.clone() - sum) - y;
        sum = next;
    }
    sum
}
