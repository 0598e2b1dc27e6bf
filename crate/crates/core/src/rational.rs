//! Exact rational scalars.
//!
//! Every squared distance, circumradius, and determinant in this crate is a
//! [`Rational`]: an arbitrary-precision fraction stored reduced with a
//! positive denominator. No operation rounds, ever.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

/// The universal exact scalar: an arbitrary-precision reduced fraction.
pub type Rational = BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for a rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse a rational from its canonical text form `"p"` or `"p/q"`.
///
/// Rejects zero denominators and any token `BigInt` itself would reject, so
/// round-tripping through [`format_rational`] is lossless.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s).map_err(|_| ParseRationalError::bad(s))?;
            Ok(Rational::from_integer(n))
        }
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).map_err(|_| ParseRationalError::bad(s))?;
            let d = BigInt::from_str(den.trim()).map_err(|_| ParseRationalError::bad(s))?;
            if d.is_zero() {
                return Err(ParseRationalError::zero_denominator(s));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Canonical text form: `"p"` when the denominator is 1, else `"p/q"` with
/// `q > 0` and `gcd(|p|, q) = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Convert to the nearest `f64`. Exactness ends here; callers own the
/// tolerance story.
pub fn rational_to_f64(r: &Rational) -> f64 {
    // BigRational::to_f64 scales numerator and denominator jointly, so huge
    // reduced fractions of moderate magnitude convert fine.
    r.to_f64().unwrap_or(f64::NAN)
}

/// Failure to parse a rational token.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in rational {0:?}")]
    ZeroDenominator(String),
}

impl ParseRationalError {
    fn bad(s: &str) -> Self {
        ParseRationalError::Malformed(s.to_owned())
    }
    fn zero_denominator(s: &str) -> Self {
        ParseRationalError::ZeroDenominator(s.to_owned())
    }
}

/// True when `r` is a strictly positive value.
pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in [
            "0",
            "1",
            "-7",
            "3/4",
            "-3/4",
            // 2^127 - 1 over 2^128: already in lowest terms.
            "170141183460469231731687303715884105727/340282366920938463463374607431768211456",
        ] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert_eq!(format_rational(&parse_rational(" 7 / 3 ").unwrap()), "7/3");
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "a", "1/2/3", "1.5", "--3"] {
            assert!(parse_rational(s).is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn huge_ratio_to_f64_is_finite() {
        let big = num_bigint::BigInt::from(2).pow(300);
        let r = Rational::new(big.clone() + 1, big);
        let f = rational_to_f64(&r);
        assert!((f - 1.0).abs() < 1e-12);
    }
}
