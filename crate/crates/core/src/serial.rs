//! JSON helpers: integers as decimal strings, rationals as `"p/q"` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

pub fn int_string(x: &BigInt) -> String {
    x.to_str_radix(10)
}

pub fn int_strings(xs: &[BigInt]) -> Vec<String> {
    xs.iter().map(int_string).collect()
}

pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_strings(xs: &[BigRational]) -> Vec<String> {
    xs.iter().map(rational_string).collect()
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

pub fn parse_ints(xs: &[String]) -> Result<Vec<BigInt>> {
    xs.iter().map(|s| parse_int(s)).collect()
}

/// Parses `"p"` or `"p/q"` with `q ≠ 0`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q == BigInt::from(0) {
                return Err(Error::Parse(format!("zero denominator: {s:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, q))
        }
    }
}
