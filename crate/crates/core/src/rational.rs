//! The scalar type used everywhere: arbitrary-precision rationals, plus the
//! `"p/q"` string form used by all file formats.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact fraction, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Shorthand for small constants, mostly in tests and constructors.
pub fn rat(numer: i64, denom: i64) -> Rational {
    assert!(denom != 0, "zero denominator");
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` with optional leading `-` on the numerator.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(s.to_owned());
    let parse_int = |t: &str| -> Result<BigInt, ParseRationalError> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        t.parse::<BigInt>().map_err(|_| malformed())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let numer = parse_int(p)?;
            if q.starts_with('-') {
                return Err(malformed());
            }
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_owned()));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Lowest-terms string form: integers as `"p"`, everything else as `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest integer `n` with `n <= r`.
pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Fractional part `r - floor(r)`, in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Divides out the content of a rational vector, leaving coprime integer
/// entries whose first nonzero entry is positive. Zero vectors are unchanged.
pub fn normalize_content(v: &mut [Rational]) {
    use num_integer::Integer;
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            denom_lcm = denom_lcm.lcm(x.denom());
            numer_gcd = numer_gcd.gcd(x.numer());
        }
    }
    if numer_gcd.is_zero() {
        return;
    }
    let scale = Rational::new(denom_lcm, numer_gcd);
    let mut sign = Rational::one();
    for x in v.iter() {
        if !x.is_zero() {
            if x.is_negative() {
                sign = -Rational::one();
            }
            break;
        }
    }
    for x in v.iter_mut() {
        *x = &*x * &scale * &sign;
    }
}
