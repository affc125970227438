//! Monetary amounts with a switchable numeric backend.
//!
//! Every quantity in a network (weights, balance-sheet entries, equities,
//! transmitted losses) is an [`Amount`]. Under the exact backend amounts are
//! arbitrary-precision rationals and every comparison is exact; under the
//! float backend they are `f64` and sign tests honour a tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default comparison tolerance of the float backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Numeric backend used for all derived quantities of a network.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Exact,
    Float { tolerance: f64 },
}

impl Backend {
    pub fn float() -> Self {
        Backend::Float {
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Tolerance used by sign tests; zero for the exact backend.
    pub fn tolerance(&self) -> f64 {
        match self {
            Backend::Exact => 0.0,
            Backend::Float { tolerance } => *tolerance,
        }
    }

    /// Lift an exact parameter into this backend.
    pub fn amount(&self, value: &BigRational) -> Amount {
        match self {
            Backend::Exact => Amount::Exact(value.clone()),
            Backend::Float { .. } => Amount::Float(rational_to_f64(value)),
        }
    }

    pub fn count(&self, n: usize) -> Amount {
        match self {
            Backend::Exact => Amount::Exact(BigRational::from_integer(BigInt::from(n))),
            Backend::Float { .. } => Amount::Float(n as f64),
        }
    }

    pub fn zero(&self) -> Amount {
        self.count(0)
    }
}

/// An exact rational or a binary float.
///
/// Arithmetic between two exact amounts stays exact; mixing an exact amount
/// with a float demotes the result to a float.
#[derive(Clone, Debug)]
pub enum Amount {
    Exact(BigRational),
    Float(f64),
}

impl Amount {
    pub fn exact(r: BigRational) -> Self {
        Amount::Exact(r)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Amount::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Amount::Exact(r) => rational_to_f64(r),
            Amount::Float(x) => *x,
        }
    }

    /// The exact value, if this amount is exact.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Amount::Exact(r) => Some(r),
            Amount::Float(_) => None,
        }
    }

    pub fn zero_like(&self) -> Amount {
        match self {
            Amount::Exact(_) => Amount::Exact(BigRational::zero()),
            Amount::Float(_) => Amount::Float(0.0),
        }
    }

    /// `self < 0`; for floats, `self < -tol`.
    pub fn is_negative(&self, tol: f64) -> bool {
        match self {
            Amount::Exact(r) => r.is_negative(),
            Amount::Float(x) => *x < -tol,
        }
    }

    /// `self > 0`; for floats, `self > tol`.
    pub fn is_positive(&self, tol: f64) -> bool {
        match self {
            Amount::Exact(r) => r.is_positive(),
            Amount::Float(x) => *x > tol,
        }
    }

    /// Strict `self > other` under the backend's comparison rule.
    pub fn exceeds(&self, other: &Amount, tol: f64) -> bool {
        (self - other).is_positive(tol)
    }

    pub fn abs(&self) -> Amount {
        match self {
            Amount::Exact(r) => Amount::Exact(r.abs()),
            Amount::Float(x) => Amount::Float(x.abs()),
        }
    }

    pub fn min(self, other: Amount) -> Amount {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Amount) -> Amount {
        if other > self {
            other
        } else {
            self
        }
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Very large numerators/denominators: scale down before dividing.
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Amount> for &'a Amount {
            type Output = Amount;
            fn $method(self, rhs: &'a Amount) -> Amount {
                match (self, rhs) {
                    (Amount::Exact(a), Amount::Exact(b)) => Amount::Exact(a $op b),
                    (a, b) => Amount::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl $trait<Amount> for Amount {
            type Output = Amount;
            fn $method(self, rhs: Amount) -> Amount {
                match (self, rhs) {
                    (Amount::Exact(a), Amount::Exact(b)) => Amount::Exact(a $op b),
                    (a, b) => Amount::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $trait<&'a Amount> for Amount {
            type Output = Amount;
            fn $method(self, rhs: &'a Amount) -> Amount {
                (&self) $op rhs
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);
binary_op!(Mul, mul, *);
binary_op!(Div, div, /);

impl AddAssign<&Amount> for Amount {
    fn add_assign(&mut self, rhs: &Amount) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Amount> for Amount {
    fn sub_assign(&mut self, rhs: &Amount) {
        *self = &*self - rhs;
    }
}

impl Neg for Amount {
    type Output = Amount;
    fn neg(self) -> Amount {
        match self {
            Amount::Exact(r) => Amount::Exact(-r),
            Amount::Float(x) => Amount::Float(-x),
        }
    }
}

impl Neg for &Amount {
    type Output = Amount;
    fn neg(self) -> Amount {
        -(self.clone())
    }
}

impl PartialEq for Amount {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Amount::Exact(a), Amount::Exact(b)) => a == b,
            (a, b) => a.to_f64() == b.to_f64(),
        }
    }
}

impl Eq for Amount {}

impl PartialOrd for Amount {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Amount::Exact(a), Amount::Exact(b)) => Some(a.cmp(b)),
            (a, b) => a.to_f64().partial_cmp(&b.to_f64()),
        }
    }
}

// Used as a memo key by the tree solvers; floats hash by bit pattern.
impl Hash for Amount {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Amount::Exact(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Amount::Float(x) => {
                1u8.hash(state);
                x.to_bits().hash(state);
            }
        }
    }
}

impl fmt::Display for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Amount::Exact(r) => f.write_str(&format_rational(r)),
            Amount::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("cannot parse {input:?} as an exact rational")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parse `"p/q"`, an integer, or a finite decimal (`"0.95"`, `"-1.5e-3"`)
/// into an exact rational.
pub fn parse_rational(input: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError {
        input: input.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits })
        .map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shorthand for an exact rational `p/q` (test and fixture helper).
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact rational from a decimal literal such as `"0.1"`.
///
/// # Panics
/// Panics if the literal is malformed; intended for constants.
pub fn dec(literal: &str) -> BigRational {
    parse_rational(literal).expect("malformed decimal literal")
}
