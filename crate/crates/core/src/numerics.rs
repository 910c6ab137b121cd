//! Exact rational scalars and the handful of primitives built on them.
//!
//! Everything that ends up deciding a cluster boundary (slopes, collinearity,
//! meeting times) goes through [`Rational`], so no comparison here ever
//! involves rounding.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision signed rational in canonical form.
///
/// The denominator is always positive and coprime to the numerator; zero is
/// stored as `0/1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Parse {
                token: "0".into(),
                reason: "zero denominator",
            });
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    /// Smallest integer not below `self`, computed as `-floor(-self)`.
    pub fn ceil(&self) -> BigInt {
        -(-self.numer()).div_floor(self.denom())
    }

    /// `base^exp` for a non-negative integer exponent.
    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Nearest `f64`; reporting and rendering only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Fixed-point decimal rendering with `digits` fractional digits,
    /// rounded half away from zero. Exact up to the final rounding.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = self.numer().abs() * &scale;
        let (q, r) = scaled.div_rem(self.denom());
        let q = if r * 2 >= *self.denom() { q + 1 } else { q };
        let sign = if self.is_negative() && !q.is_zero() { "-" } else { "" };
        let (int_part, frac_part) = q.div_rem(&scale);
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{:0>width$}", frac_part, width = digits)
        }
    }
}

impl fmt::Display for Rational {
    /// `p/q`, or just `p` when the denominator is one.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn parse_err(token: &str, reason: &'static str) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason,
    }
}

fn parse_digits(token: &str, digits: &str) -> Result<BigInt> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(token, "expected decimal digits"));
    }
    // digits-only input always parses
    Ok(BigInt::parse_bytes(digits.as_bytes(), 10).expect("ascii digits"))
}

/// Parses an integer (`-3`), a fraction (`p/q`) or a finite decimal (`1.25`).
///
/// Decimals are read as exact decimal fractions, never through `f64`.
pub fn rational_parse(text: &str) -> Result<Rational> {
    let token = text.trim();
    if token.is_empty() {
        return Err(parse_err(text, "empty input"));
    }
    let (negative, body) = match token.as_bytes()[0] {
        b'-' => (true, &token[1..]),
        b'+' => (false, &token[1..]),
        _ => (false, token),
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(token, num)?;
        let den = parse_digits(token, den)?;
        if den.is_zero() {
            return Err(parse_err(token, "zero denominator"));
        }
        BigRational::new(num, den)
    } else if let Some((int, frac)) = body.split_once('.') {
        if int.is_empty() && frac.is_empty() {
            return Err(parse_err(token, "expected decimal digits"));
        }
        let int = if int.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(token, int)?
        };
        let frac_value = if frac.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(token, frac)?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        BigRational::new(int * &scale + frac_value, scale)
    } else {
        BigRational::from_integer(parse_digits(token, body)?)
    };
    Ok(Rational(if negative { -value } else { value }))
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        rational_parse(s)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, like the integer types; callers check first.
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// A point in the plane with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Point2D {
    pub x: Rational,
    pub y: Rational,
}

impl Point2D {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        Point2D {
            x: x.into(),
            y: y.into(),
        }
    }
}

/// Slope of the line through `p1` and `p2`. Symmetric in its arguments.
pub fn slope(p1: &Point2D, p2: &Point2D) -> Result<Rational> {
    let run = &p2.x - &p1.x;
    if run.is_zero() {
        return Err(Error::DegenerateSlope {
            x: p1.x.to_string(),
        });
    }
    Ok((&p2.y - &p1.y) / run)
}

/// Sign of the cross product `(b - a) x (c - a)`: positive for a left
/// (counter-clockwise) turn, zero when the three points are collinear.
pub fn orientation(a: &Point2D, b: &Point2D, c: &Point2D) -> Ordering {
    let lhs = (&b.x - &a.x) * (&c.y - &a.y);
    let rhs = (&b.y - &a.y) * (&c.x - &a.x);
    lhs.cmp(&rhs)
}

/// Binomial coefficient extended by zero to negative `k` (and to `k > n`).
pub fn binom_plus(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `2^exp` as an exact integer.
pub fn pow2(exp: u32) -> BigInt {
    BigInt::one() << exp as usize
}
