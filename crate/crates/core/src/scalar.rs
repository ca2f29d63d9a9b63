//! Numeric backends for opinions.
//!
//! Two backends implement [`Scalar`]: [`Rational`] (arbitrary precision,
//! always normalized) and `f64`. The exact backend ignores tolerances; the
//! float backend widens every comparison by the configured epsilons.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("empty token")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("non-finite value `{0}`")]
    NonFinite(String),
}

/// Comparison slack used by the float backend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Two opinions closer than this are treated as the same cluster.
    pub eps_equal: f64,
    /// Distances up to `bound + eps_edge` count as an edge.
    pub eps_edge: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_equal: 1e-9,
            eps_edge: 1e-9,
        }
    }
}

/// Run-level numeric switch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumericMode {
    Exact,
    Float(Tolerances),
}

impl NumericMode {
    pub fn float() -> Self {
        NumericMode::Float(Tolerances::default())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumericMode::Exact)
    }

    pub fn name(&self) -> &'static str {
        match self {
            NumericMode::Exact => "exact",
            NumericMode::Float(_) => "float",
        }
    }

    /// Tolerances as the backend will see them; exact mode reports zeros.
    pub fn tolerances(&self) -> Tolerances {
        match self {
            NumericMode::Exact => Tolerances {
                eps_equal: 0.0,
                eps_edge: 0.0,
            },
            NumericMode::Float(tol) => *tol,
        }
    }
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NumericMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(NumericMode::Exact),
            "float" => Ok(NumericMode::float()),
            other => Err(format!(
                "unknown numeric mode `{other}` (expected exact|float)"
            )),
        }
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Signed
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const EXACT: bool;

    fn mode_name() -> &'static str {
        if Self::EXACT {
            "exact"
        } else {
            "float"
        }
    }

    fn from_int(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact backends take the binary value of `v` verbatim.
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// `self <= other`, widened by `eps` in float mode.
    fn le_tol(&self, other: &Self, eps: f64) -> bool;

    /// `|self - other| <= eps` in float mode, plain equality when exact.
    fn eq_tol(&self, other: &Self, eps: f64) -> bool;

    /// Whether a squared Euclidean distance lies within `bound` (+ `eps`).
    fn sq_dist_within(sq_dist: &Self, bound: &Self, eps: f64) -> bool;

    /// Parses a decimal literal or a `p/q` rational.
    fn parse_token(token: &str) -> Result<Self, ParseScalarError>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn le_tol(&self, other: &Self, _eps: f64) -> bool {
        self <= other
    }

    fn eq_tol(&self, other: &Self, _eps: f64) -> bool {
        self == other
    }

    fn sq_dist_within(sq_dist: &Self, bound: &Self, _eps: f64) -> bool {
        *sq_dist <= bound * bound
    }

    fn parse_token(token: &str) -> Result<Self, ParseScalarError> {
        parse_rational(token)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn le_tol(&self, other: &Self, eps: f64) -> bool {
        *self <= *other + eps
    }

    fn eq_tol(&self, other: &Self, eps: f64) -> bool {
        (*self - *other).abs() <= eps
    }

    fn sq_dist_within(sq_dist: &Self, bound: &Self, eps: f64) -> bool {
        sq_dist.sqrt() <= *bound + eps
    }

    fn parse_token(token: &str) -> Result<Self, ParseScalarError> {
        let token = token.trim();
        if token.is_empty() {
            return Err(ParseScalarError::Empty);
        }
        let value = if token.contains('/') {
            Scalar::to_f64(&parse_rational(token)?)
        } else {
            token
                .parse::<f64>()
                .map_err(|_| ParseScalarError::Invalid(token.to_string()))?
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(ParseScalarError::NonFinite(token.to_string()))
        }
    }
}

/// Parses `p/q`, an integer, or a plain decimal (`-0.125`, `3.`, `.5`)
/// into an exact rational. Decimal literals are read in base ten, so
/// `0.1` becomes exactly 1/10.
pub fn parse_rational(token: &str) -> Result<Rational, ParseScalarError> {
    let token = token.trim();
    if token.is_empty() {
        return Err(ParseScalarError::Empty);
    }
    let invalid = || ParseScalarError::Invalid(token.to_string());
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| invalid())?;
        let den: BigInt = den.trim().parse().map_err(|_| invalid())?;
        if den.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(token.to_string()));
        }
        return Ok(Rational::new(num, den));
    }

    let (negative, body) = match token.as_bytes()[0] {
        b'-' => (true, &token[1..]),
        b'+' => (false, &token[1..]),
        _ => (false, token),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = body[pos + 1..].parse().map_err(|_| invalid())?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(invalid());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| invalid())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn rationals_stay_normalized() {
        let x = q(6, -4);
        assert_eq!(*x.numer(), BigInt::from(-3));
        assert_eq!(*x.denom(), BigInt::from(2));
        let sum = q(1, 6) + q(1, 3);
        assert_eq!(sum, q(1, 2));
        assert_eq!(*sum.denom(), BigInt::from(2));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("17/4").unwrap(), q(17, 4));
        assert_eq!(parse_rational("2").unwrap(), q(2, 1));
        assert_eq!(parse_rational(".25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("1.5e2").unwrap(), q(150, 1));
        assert_eq!(parse_rational("25e-2").unwrap(), q(1, 4));
    }

    #[test]
    fn rejects_bad_tokens() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseScalarError::ZeroDenominator(_))
        ));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(f64::parse_token("nan").is_err());
        assert!(f64::parse_token("1/0").is_err());
    }

    #[test]
    fn float_tolerances_widen_comparisons() {
        assert!(1.0f64.le_tol(&(1.0 - 1e-12), 1e-9));
        assert!(!1.0f64.le_tol(&(1.0 - 1e-6), 1e-9));
        assert!(q(1, 1).le_tol(&q(1, 1), 0.5));
        assert!(!q(3, 2).le_tol(&q(1, 1), 0.6));
        assert!(!f64::sq_dist_within(&1.25, &1.0, 1e-9));
        assert!(Rational::sq_dist_within(&q(1, 1), &q(1, 1), 0.0));
    }

    #[test]
    fn display_renders_p_over_q() {
        assert_eq!(q(1, 3).to_string(), "1/3");
        assert_eq!(q(0, 5).to_string(), "0");
        assert_eq!(0.1f64.to_string(), "0.1");
    }
}
