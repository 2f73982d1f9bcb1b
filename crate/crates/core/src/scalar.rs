//! Numeric backends.
//!
//! Every table, polynomial and grid function is generic over [`Scalar`].
//! Exact work uses [`Rational`] (arbitrary precision); the floating path uses
//! `f64` with an explicit tolerance wherever a sign is tested.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number, the default exact scalar.
pub type Rational = BigRational;

/// Field-like scalar usable for tables, polynomials and grid values.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Whether the type carries rounding error (and so needs a tolerance).
    const IS_FLOAT: bool;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("i64 is representable")
    }

    /// Multiplies by `(-1)^n`.
    fn signed_by_parity(self, n: usize) -> Self {
        if n.is_multiple_of(2) {
            self
        } else {
            -self
        }
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    /// `true` iff `self >= -eps`.
    fn at_least_minus(&self, eps: &Self) -> bool {
        *self >= -eps.clone()
    }
}

impl Scalar for Rational {
    const IS_FLOAT: bool = false;
}

impl Scalar for f64 {
    const IS_FLOAT: bool = true;

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-1/3"`, `"0.25"` or `"-1.5e-2"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::InvalidNumber(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Nearest binary64 value of an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
