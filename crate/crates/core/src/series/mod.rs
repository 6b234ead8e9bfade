//! Exact arithmetic substrate: arbitrary-precision rationals, dense
//! univariate polynomials and order-truncated formal power series.
//!
//! Nothing in here touches floating point except the explicit `to_f64`
//! conversions used by callers for numeric comparison.

mod bivar;
mod poly;
mod trunc;

pub use bivar::BivarTrunc;
pub use poly::{RPoly, Var};
pub use trunc::TruncSeries;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Text form used in every export: `"num/den"`, or just `"num"` when the
/// denominator is 1.
pub fn to_frac_string(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn frac_strings(coeffs: &[Rational]) -> Vec<String> {
    coeffs.iter().map(to_frac_string).collect()
}

pub(crate) fn parse_frac_strings(items: &[String]) -> Result<Vec<Rational>> {
    items.iter().map(|s| parse_rational(s)).collect()
}
