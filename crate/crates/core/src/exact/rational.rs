//! Arbitrary-precision rationals and their `p/q` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ArithError;

/// The universal scalar: a reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `p/q` in lowest terms with a positive denominator.
pub fn rat_normalize(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Rational, ArithError> {
    let (p, q) = (p.into(), q.into());
    if q.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    Ok(Rational::new(p, q))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Error produced when a `p/q` literal cannot be read.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Malformed(String),
    #[error("division by zero in {0:?}")]
    ZeroDenominator(String),
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses `p`, `-p`, `p/q` or `-p/q` (sign allowed on the numerator only).
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let src = text.trim();
    if src.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (negative, body) = match src.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, src),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    if !is_digits(num) || den.is_some_and(|d| !is_digits(d)) {
        return Err(ParseRationalError::Malformed(src.to_string()));
    }
    let mut p = BigInt::from_str(num).map_err(|_| ParseRationalError::Malformed(src.to_string()))?;
    if negative {
        p = -p;
    }
    let q = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| ParseRationalError::Malformed(src.to_string()))?,
        None => BigInt::one(),
    };
    rat_normalize(p, q).map_err(|_| ParseRationalError::ZeroDenominator(src.to_string()))
}

/// Canonical text: `p` when the denominator is one, `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal approximation to `sig` significant digits, computed with integer
/// arithmetic only. Output is for human display and is never parsed back.
pub fn approx_decimal(value: &Rational, sig: usize) -> String {
    let sig = sig.max(1);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= |x| < 10^(e+1)
    let mut exp: i64 = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while abs < pow10(exp) {
        exp -= 1;
    }
    while abs >= pow10(exp + 1) {
        exp += 1;
    }

    let scaled = &abs * pow10(sig as i64 - 1 - exp);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut digits = if BigInt::from(2) * r >= *scaled.denom() { q + 1 } else { q };
    if digits.to_string().len() > sig {
        digits /= &ten;
        exp += 1;
    }
    let mut mantissa = digits.to_string();
    let sign = if negative { "-" } else { "" };

    if (-5..sig as i64).contains(&exp) {
        let text = if exp >= 0 {
            let int_len = exp as usize + 1;
            let (a, b) = mantissa.split_at(int_len);
            if b.is_empty() {
                a.to_string()
            } else {
                format!("{a}.{b}")
            }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), mantissa)
        };
        return format!("{sign}{}", trim_fraction(&text));
    }
    let tail = mantissa.split_off(1);
    let body = if tail.is_empty() { mantissa } else { format!("{mantissa}.{tail}") };
    format!("{sign}{}e{exp}", trim_fraction(&body))
}

fn trim_fraction(text: &str) -> String {
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_reduces_and_fixes_sign() {
        assert_eq!(rat_normalize(4, -6).unwrap(), frac(-2, 3));
        let zero = rat_normalize(0, 7).unwrap();
        assert!(zero.is_zero());
        assert!(zero.denom().is_one());
        assert_eq!(format_rational(&rat_normalize(100, 1).unwrap()), "100");
        assert_eq!(rat_normalize(1, 0), Err(ArithError::DivisionByZero));
        assert_eq!(ArithError::DivisionByZero.to_string(), "division by zero");
    }

    #[test]
    fn parse_accepts_canonical_forms() {
        assert_eq!(parse_rational("3/7").unwrap(), frac(3, 7));
        assert_eq!(parse_rational("-4/6").unwrap(), frac(-2, 3));
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert_eq!(parse_rational(" 5 ").unwrap(), int(5));
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in ["3/", "/3", "3/-4", "+3", "1.5", "a", "3//4", "--1"] {
            assert!(matches!(parse_rational(bad), Err(ParseRationalError::Malformed(_))), "{bad}");
        }
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
    }

    #[test]
    fn format_matches_parse() {
        for text in ["0", "-1", "400/3", "-25/9", "32384"] {
            assert_eq!(format_rational(&parse_rational(text).unwrap()), text);
        }
    }

    #[test]
    fn decimal_approximation() {
        assert_eq!(approx_decimal(&frac(400, 3), 6), "133.333");
        assert_eq!(approx_decimal(&frac(2, 3), 6), "0.666667");
        assert_eq!(approx_decimal(&int(-100), 6), "-100");
        assert_eq!(approx_decimal(&frac(1, 24), 6), "0.0416667");
        assert_eq!(approx_decimal(&frac(999_9999, 10), 6), "1e6");
        assert_eq!(approx_decimal(&int(123_456_789), 6), "1.23457e8");
        assert_eq!(approx_decimal(&frac(1, 3_000_000), 6), "3.33333e-7");
        assert_eq!(approx_decimal(&int(0), 6), "0");
    }
}
