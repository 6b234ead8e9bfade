//! Numeric evaluation of the closed-form bivariate generating function
//! `W(z,u) = u / (α·coth(zα) − 1)`, `α = √(1 − u)`, on the real region
//! `0 < z ≤ 0.5`, `0 < u ≤ 1`.

use crate::error::{Error, Result};
use crate::series::{to_f64, Rational, TruncSeries};

/// Half-width of the window around `u = 1` where the even series in `α` is
/// used instead of `coth`.
pub const FALLBACK_WINDOW: f64 = 1e-6;

/// Denominators smaller than this in magnitude are reported as a pole.
pub const POLE_EPS: f64 = 1e-12;

const Z_MAX: f64 = 0.5;

/// Exact coefficients `c_j` of `x·coth(x) = Σ_j c_j x^{2j}` for `j ≤ terms`,
/// from the quotient of the even parts of `x·cosh x` and `sinh x`.
pub fn x_coth_x_coeffs(terms: usize) -> Vec<Rational> {
    let mut cosh = Vec::with_capacity(terms + 1);
    let mut sinh_over_x = Vec::with_capacity(terms + 1);
    let mut fact = Rational::from_integer(1.into());
    for j in 0..=terms {
        // fact = (2j)! at the top of the loop
        cosh.push(fact.recip());
        let next = &fact * Rational::from_integer((2 * j as i64 + 1).into());
        sinh_over_x.push(next.recip());
        fact = next * Rational::from_integer((2 * j as i64 + 2).into());
    }
    TruncSeries::from_coeffs(cosh, terms)
        .div(&TruncSeries::from_coeffs(sinh_over_x, terms))
        .expect("sinh(x)/x has constant term 1")
        .coeffs()
        .to_vec()
}

fn check_domain(z: f64, u: f64) -> Result<()> {
    if !(z > 0.0 && z <= Z_MAX) {
        return Err(Error::Domain(format!("z = {z} outside (0, {Z_MAX}]")));
    }
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::Domain(format!("u = {u} outside (0, 1]")));
    }
    Ok(())
}

fn guarded_quotient(num: f64, den: f64) -> Result<f64> {
    if den.abs() < POLE_EPS {
        return Err(Error::Pole(den));
    }
    Ok(num / den)
}

/// `α·coth(zα)` with `t = α² = 1 − u`, as `(1/z)·Σ_j c_j (z²t)^j`.
fn alpha_coth_series(z: f64, t: f64, terms: usize) -> f64 {
    let y = z * z * t;
    let sum = x_coth_x_coeffs(terms)
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * y + to_f64(c));
    sum / z
}

/// `W(z,u)` from the `coth` form. Within [`FALLBACK_WINDOW`] of `u = 1` the
/// removable degeneracy at `α = 0` is avoided by summing `fallback_terms`
/// terms of the even expansion in `α`; at `u = 1` this gives `z/(1−z)`.
pub fn closed_form_eval(z: f64, u: f64, fallback_terms: usize) -> Result<f64> {
    check_domain(z, u)?;
    let t = 1.0 - u;
    let den = if t.abs() < FALLBACK_WINDOW {
        alpha_coth_series(z, t, fallback_terms.max(1)) - 1.0
    } else {
        let alpha = t.sqrt();
        alpha / (z * alpha).tanh() - 1.0
    };
    guarded_quotient(u, den)
}

/// `W(z,u)` from the exponential form
/// `u(e^{2zα} − 1) / (e^{2zα}(α − 1) + α + 1)`, with the same fallback near
/// `u = 1`.
pub fn closed_form_eval_symmetric(z: f64, u: f64, fallback_terms: usize) -> Result<f64> {
    check_domain(z, u)?;
    let t = 1.0 - u;
    if t.abs() < FALLBACK_WINDOW {
        return closed_form_eval(z, u, fallback_terms);
    }
    let alpha = t.sqrt();
    let e = (2.0 * z * alpha).exp();
    guarded_quotient(u * (e - 1.0), e * (alpha - 1.0) + alpha + 1.0)
}
