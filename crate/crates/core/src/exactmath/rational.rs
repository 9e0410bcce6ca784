use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact fraction in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand for `num / den`. Panics when `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"n"`, `"n/d"` or a finite decimal such as `"-0.25"` exactly.
///
/// Anything else (`pi`, `sqrt(2)`, exponents, `inf`) is rejected as
/// unsupported: every verdict downstream is exact and cannot take
/// irrational input.
pub fn parse_rational(field: &str, text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = |reason: &str| Error::Parse {
        field: field.to_string(),
        reason: format!("{reason}: {text:?}"),
    };
    if s.is_empty() {
        return Err(err("empty rational"));
    }
    let is_numeric = |t: &str| {
        let t = t.strip_prefix(['-', '+']).unwrap_or(t);
        !t.is_empty() && t.chars().all(|c| c.is_ascii_digit() || c == '.')
    };
    if let Some((n, d)) = s.split_once('/') {
        let (n, d) = (n.trim(), d.trim());
        if !is_numeric(n) || !is_numeric(d) || n.contains('.') || d.contains('.') {
            return Err(unsupported(field, text));
        }
        let n: BigInt = n.parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = d.parse().map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if !is_numeric(s) {
        return Err(unsupported(field, text));
    }
    match s.split_once('.') {
        None => Ok(BigRational::from_integer(
            s.parse().map_err(|_| err("bad integer"))?,
        )),
        Some((int, frac)) => {
            if frac.contains('.') || frac.is_empty() {
                return Err(err("bad decimal"));
            }
            let negative = int.starts_with('-');
            let int = int.trim_start_matches(['-', '+']);
            let digits: BigInt = format!("{}{}", if int.is_empty() { "0" } else { int }, frac)
                .parse()
                .map_err(|_| err("bad decimal"))?;
            let den = num_traits::pow(BigInt::from(10), frac.len());
            let r = BigRational::new(digits, den);
            Ok(if negative { -r } else { r })
        }
    }
}

fn unsupported(field: &str, text: &str) -> Error {
    Error::UnsupportedInput(format!(
        "{field}: {text:?} is not an exact rational (use n or n/d)"
    ))
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Reduces `r` into `[0, modulus)`.
pub(crate) fn rem_rational(r: &Rational, modulus: &Rational) -> Rational {
    debug_assert!(modulus.is_positive());
    let q = (r / modulus).floor();
    r - q * modulus
}
