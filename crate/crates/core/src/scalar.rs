//! Coefficient fields: exact rationals and tolerance-compared `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default tolerance of the floating-point backend.
pub const DEFAULT_EPSILON: f64 = 1e-9;

// Zero means "unset", i.e. DEFAULT_EPSILON.
static FLOAT_EPSILON_BITS: AtomicU64 = AtomicU64::new(0);

/// Current tolerance used by [`Float`] comparisons.
pub fn float_epsilon() -> f64 {
    match FLOAT_EPSILON_BITS.load(Ordering::Relaxed) {
        0 => DEFAULT_EPSILON,
        bits => f64::from_bits(bits),
    }
}

/// Replace the global float tolerance. Non-positive or non-finite values are ignored.
pub fn set_float_epsilon(eps: f64) {
    if eps.is_finite() && eps > 0.0 {
        FLOAT_EPSILON_BITS.store(eps.to_bits(), Ordering::Relaxed);
    }
}

/// An ordered field element usable as a tensor coefficient.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact zero test on rationals, `|x| <= eps` on floats.
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Canonical text form: `p/q` (or `p`) for rationals, shortest round-trip decimal for floats.
    fn render(&self) -> String;
    /// True when comparisons are exact.
    fn is_exact() -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }

    /// Parse the canonical text form produced by [`Scalar::render`] (plus plain decimals).
    fn parse(text: &str) -> Option<Self>;

    fn from_rational(q: &BigRational) -> Self;
}

/// Exact rational backend.
pub type Rational = BigRational;

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_exact() -> bool {
        true
    }

    fn parse(text: &str) -> Option<Self> {
        parse_rational(text)
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

/// Parse `p`, `p/q` or a finite decimal such as `-0.25` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = parse_integer(num)?;
        let den: BigInt = parse_integer(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) || int_part.len() - int_digits.len() > 1 {
            return None;
        }
        let digits = format!("{int_digits}{frac_part}");
        let mut num: BigInt = digits.parse().ok()?;
        if negative {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Some(BigRational::new(num, den));
    }
    Some(BigRational::from_integer(parse_integer(text)?))
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let body = text.strip_prefix(['-', '+']).unwrap_or(text);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Floating-point backend compared with the global tolerance.
#[derive(Clone, Copy, Debug, Default)]
pub struct Float(pub f64);

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        (self.0 - other.0).abs() <= float_epsilon()
    }
}

impl Add for Float {
    type Output = Float;
    fn add(self, rhs: Float) -> Float {
        Float(self.0 + rhs.0)
    }
}

impl Sub for Float {
    type Output = Float;
    fn sub(self, rhs: Float) -> Float {
        Float(self.0 - rhs.0)
    }
}

impl Mul for Float {
    type Output = Float;
    fn mul(self, rhs: Float) -> Float {
        Float(self.0 * rhs.0)
    }
}

impl Div for Float {
    type Output = Float;
    fn div(self, rhs: Float) -> Float {
        Float(self.0 / rhs.0)
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    fn zero() -> Self {
        Float(0.0)
    }

    fn one() -> Self {
        Float(1.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Float(num as f64 / den as f64)
    }

    fn is_zero(&self) -> bool {
        self.0.abs() <= float_epsilon()
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn render(&self) -> String {
        if self.is_zero() {
            "0".to_string()
        } else {
            format!("{}", self.0)
        }
    }

    fn is_exact() -> bool {
        false
    }

    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Some(q) = parse_rational(text) {
            return Some(Float(Scalar::to_f64(&q)));
        }
        text.parse::<f64>().ok().filter(|v| v.is_finite()).map(Float)
    }

    fn from_rational(q: &BigRational) -> Self {
        Float(Scalar::to_f64(q))
    }
}

/// Absolute value for ordered scalars.
pub fn abs<S: Scalar>(x: &S) -> S {
    if x.to_f64() < 0.0 {
        -x.clone()
    } else {
        x.clone()
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn rational_signum(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}
