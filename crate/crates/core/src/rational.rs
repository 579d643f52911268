//! Exact rational numbers backed by arbitrary-precision integers.
//!
//! Every quantity in the model (hours, atomic units, proportions) is a
//! [`Rational`]; nothing is ever rounded except when rendering decimals for
//! display.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact fraction, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

/// The four exact operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(BigRational::new(numer, denom)))
    }

    pub fn integer(value: i64) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
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
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(&self.0 / &rhs.0))
    }

    pub fn apply(&self, op: ArithOp, rhs: &Rational) -> Result<Self> {
        match op {
            ArithOp::Add => Ok(self + rhs),
            ArithOp::Sub => Ok(self - rhs),
            ArithOp::Mul => Ok(self * rhs),
            ArithOp::Div => self.checked_div(rhs),
        }
    }

    /// The integer value if this is a whole number that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Whole multiple of `unit` as an integer, or `None` when `self / unit`
    /// is fractional.
    pub fn div_exact(&self, unit: &Rational) -> Option<i64> {
        self.checked_div(unit).ok()?.to_i64()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `places` digits after the point, rounding half
    /// away from zero.
    pub fn to_fixed(&self, places: u32) -> String {
        let scale = BigInt::from(10u32).pow(places);
        let scaled = round_half_away(&(self.0.clone() * BigRational::from_integer(scale)));
        render_scaled(&scaled, places as usize)
    }

    /// Decimal rendering with `digits` significant figures, rounding half
    /// away from zero. Never uses exponent notation.
    pub fn to_significant(&self, digits: u32) -> String {
        assert!(digits > 0, "need at least one significant digit");
        if self.is_zero() {
            return self.to_fixed(digits - 1);
        }
        let abs = self.0.abs();
        // exponent e with 10^e <= |x| < 10^(e+1)
        let mut exp = (abs.numer().bits() as i64 - abs.denom().bits() as i64) * 3 / 10;
        let ten = BigRational::from_integer(10.into());
        loop {
            let lower = pow10(exp);
            if abs < lower {
                exp -= 1;
            } else if abs >= &lower * &ten {
                exp += 1;
            } else {
                break;
            }
        }
        let mut places = digits as i64 - 1 - exp;
        let mut scaled = round_half_away(&(&self.0 * pow10(places)));
        // rounding up can carry into a new leading digit (9.99995 -> 10.000)
        if scaled.abs() >= BigInt::from(10u32).pow(digits) {
            places -= 1;
            scaled = round_half_away(&(&self.0 * pow10(places)));
        }
        if places >= 0 {
            render_scaled(&scaled, places as usize)
        } else {
            (scaled * BigInt::from(10u32).pow((-places) as u32)).to_string()
        }
    }
}

fn pow10(exp: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(exp.unsigned_abs() as u32);
    if exp >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn round_half_away(x: &BigRational) -> BigInt {
    // BigInt division truncates toward zero
    let two = BigInt::from(2);
    (x.numer() * &two + x.denom() * x.numer().signum()) / (x.denom() * &two)
}

fn render_scaled(scaled: &BigInt, places: usize) -> String {
    let negative = scaled.sign() == Sign::Minus;
    let digits = scaled.abs().to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if places == 0 {
        out.push_str(&digits);
        return out;
    }
    let padded =
        if digits.len() <= places { format!("{}{}", "0".repeat(places + 1 - digits.len()), digits) } else { digits };
    let split = padded.len() - places;
    out.push_str(&padded[..split]);
    out.push('.');
    out.push_str(&padded[split..]);
    out
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Self::integer(value)
    }
}

impl From<u64> for Rational {
    fn from(value: u64) -> Self {
        Self(BigRational::from_integer(value.into()))
    }
}

impl From<usize> for Rational {
    fn from(value: usize) -> Self {
        Self(BigRational::from_integer(value.into()))
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Self(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Accepts `"3"`, `"-7/4"`, `"0.005"` and `"-1.25"`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::ParseRational { input: s.to_string(), reason: reason.to_string() };
        let text = s.trim();
        if text.is_empty() {
            return Err(err("empty"));
        }
        if let Some((num, den)) = text.split_once('/') {
            let num = parse_int(num.trim()).ok_or_else(|| err("bad numerator"))?;
            let den = parse_int(den.trim()).ok_or_else(|| err("bad denominator"))?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Self(BigRational::new(num, den)));
        }
        if let Some((whole, frac)) = text.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("bad fractional part"));
            }
            let (negative, whole) = match whole.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, whole.strip_prefix('+').unwrap_or(whole)),
            };
            if !whole.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("bad integer part"));
            }
            if whole.is_empty() && frac.is_empty() {
                return Err(err("no digits"));
            }
            let digits = format!("{whole}{frac}");
            let mut num: BigInt = digits.parse().map_err(|_| err("bad digits"))?;
            if negative {
                num = -num;
            }
            let den = BigInt::from(10u32).pow(frac.len() as u32);
            return Ok(Self(BigRational::new(num, den)));
        }
        let num = parse_int(text).ok_or_else(|| err("not a number"))?;
        Ok(Self(BigRational::from_integer(num)))
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational as \"num/den\", a decimal string, or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
                Ok(Rational::integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
                Ok(Rational::from(v))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like integer division; use `checked_div` when
// the divisor is untrusted.
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

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer((*other).into())
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer((*other).into()))
    }
}

/// Shorthand for tests and examples: `q("32/21")`.
///
/// Panics on malformed input.
pub fn q(text: &str) -> Rational {
    text.parse().unwrap_or_else(|e| panic!("bad rational literal {text:?}: {e}"))
}
