use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{int, BivarTrunc, RPoly, Rational, TruncSeries, Var};

fn q(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `w_2, …, w_{n_max}` from `w_2(u) = u` and
/// `w_{n+1}(u) = 2u(1−u)/n · w_n'(u) + u·w_n(u)`.
pub fn pgf_sequence(n_max: usize) -> Result<Vec<RPoly>> {
    if n_max < 2 {
        return Err(Error::InvalidInput(format!("n must be ≥ 2, got {n_max}")));
    }
    let u = RPoly::monomial(Var::U, int(1), 1);
    let two_u_one_minus_u = RPoly::new(Var::U, vec![int(0), int(2), int(-2)]);
    let mut out = vec![u.clone()];
    for n in 2..n_max {
        let w = out.last().expect("nonempty");
        let drift = two_u_one_minus_u.mul(&w.derivative())?.scale(&q(n).recip());
        out.push(drift.add(&w.shift(1))?);
    }
    Ok(out)
}

pub fn pgf(n: usize) -> Result<RPoly> {
    Ok(pgf_sequence(n)?.pop().expect("nonempty"))
}

/// `r_1, …, r_{n_max}` (index 0 holds `r_1 = 0`) from
/// `r_n = (2α)^{n−2}/(n−1)! + (1−α)·Σ_{k=0}^{n−2} (2α)^k/(k+1)! · r_{n−1−k}`.
///
/// Every result is checked to be even in `α`; an odd coefficient is a
/// consistency failure.
pub fn r_sequence(n_max: usize) -> Result<Vec<RPoly>> {
    if n_max < 1 {
        return Err(Error::InvalidInput("n must be ≥ 1".into()));
    }
    // weights[k] = 2^k / (k+1)!
    let mut weights: Vec<Rational> = Vec::with_capacity(n_max);
    let mut w = Rational::one();
    for k in 0..n_max {
        if k > 0 {
            w = w * int(2) / q(k + 1);
        }
        weights.push(w.clone());
    }
    let one_minus_alpha = RPoly::new(Var::Alpha, vec![int(1), int(-1)]);
    let mut rs: Vec<RPoly> = vec![RPoly::zero(Var::Alpha)];
    for n in 2..=n_max {
        // Σ_k weights[k] α^k r_{n-1-k}; r_{n-1-k} sits at rs[n-2-k]
        let mut sum = vec![Rational::zero(); n - 1];
        for k in 0..=n - 2 {
            let r = &rs[n - 2 - k];
            for (i, c) in r.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    sum[i + k] += c * &weights[k];
                }
            }
        }
        let sum = RPoly::new(Var::Alpha, sum);
        // (2α)^{n-2}/(n-1)! = weights[n-2] α^{n-2}
        let lead = RPoly::monomial(Var::Alpha, weights[n - 2].clone(), n - 2);
        let r = lead.add(&one_minus_alpha.mul(&sum)?)?;
        if !r.is_even() {
            return Err(Error::Consistency(format!(
                "r_{n}(α) has an odd-power term: {r}"
            )));
        }
        rs.push(r);
    }
    Ok(rs)
}

pub fn r_poly(n: usize) -> Result<RPoly> {
    Ok(r_sequence(n)?.pop().expect("nonempty"))
}

/// Rewrites an even polynomial in `α` as a polynomial in `u` through
/// `α^{2j} = (1 − u)^j`, then multiplies by `u`.
fn even_alpha_to_pgf(r: &RPoly) -> Result<RPoly> {
    if r.var() != Var::Alpha {
        return Err(Error::VariableMismatch {
            left: Var::Alpha.symbol(),
            right: r.var().symbol(),
        });
    }
    if !r.is_even() {
        return Err(Error::Consistency(format!("not even in α: {r}")));
    }
    let one_minus_u = RPoly::new(Var::U, vec![int(1), int(-1)]);
    let mut power = RPoly::one(Var::U);
    let mut acc = RPoly::zero(Var::U);
    for c in r.coeffs().iter().step_by(2) {
        if !c.is_zero() {
            acc = acc.add(&power.scale(c))?;
        }
        power = power.mul(&one_minus_u)?;
    }
    Ok(acc.shift(1))
}

/// `w_n(u)` recovered from `r_n(α)`.
pub fn r_to_pgf(n: usize) -> Result<RPoly> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be ≥ 2, got {n}")));
    }
    even_alpha_to_pgf(&r_poly(n)?)
}

/// Shifted bivariate PGF `W(z,u) = Σ_n w_n(u) z^{n−1}` through `z^order_z`.
pub fn truncated_w(order_z: usize) -> Result<BivarTrunc> {
    if order_z < 1 {
        return Err(Error::InvalidInput("order_z must be ≥ 1".into()));
    }
    let mut coeffs = vec![RPoly::zero(Var::U)];
    coeffs.extend(pgf_sequence(order_z + 1)?);
    let w = BivarTrunc::from_coeffs(coeffs, order_z)?;
    if !w.satisfies_support_bound() {
        return Err(Error::Consistency(
            "white-count support bound violated".into(),
        ));
    }
    Ok(w)
}

/// Residual `∂_zW·(1 − zu) − 2u(1−u)·∂_uW − u·W − u` of a truncated series.
///
/// Entry `m` of the result only depends on entries `m` and `m + 1` of `w`;
/// the top entry uses an implicit zero for `z^{order+1}` and so is generally
/// nonzero.
pub fn pde_residual_of(w: &BivarTrunc) -> Result<BivarTrunc> {
    let order = w.order_z();
    let u = RPoly::monomial(Var::U, int(1), 1);
    let two_u_one_minus_u = RPoly::new(Var::U, vec![int(0), int(2), int(-2)]);
    let zero = RPoly::zero(Var::U);
    let mut out = BivarTrunc::zero(order);
    for m in 0..=order {
        let cur = w.coeff_z(m)?;
        let next = if m < order { w.coeff_z(m + 1)? } else { &zero };
        // [z^m] ∂_zW = (m+1) W_{m+1};  [z^m] zu·∂_zW = m·u·W_m
        let dz = next.scale(&q(m + 1));
        let zu_dz = cur.shift(1).scale(&q(m));
        let du = two_u_one_minus_u.mul(&cur.derivative())?;
        let mut r = dz.sub(&zu_dz)?.sub(&du)?.sub(&cur.shift(1))?;
        if m == 0 {
            r = r.sub(&u)?;
        }
        *out.entry_mut(m) = r;
    }
    Ok(out)
}

/// PDE residual of [`truncated_w`]; fails when any entry below the
/// truncation boundary is nonzero.
pub fn pde_residual(order_z: usize) -> Result<BivarTrunc> {
    if order_z < 2 {
        return Err(Error::InvalidInput("order_z must be ≥ 2".into()));
    }
    let res = pde_residual_of(&truncated_w(order_z)?)?;
    if let Some(m) = res.first_nonzero() {
        if m < order_z {
            return Err(Error::Consistency(format!(
                "PDE residual nonzero at z^{m}: {}",
                res.coeff_z(m)?
            )));
        }
    }
    Ok(res)
}

/// Expansion of `∂_uW(z,1) = z(z² − 3z + 3) / (3(1 − z)²)`, i.e. the mean
/// generating function `Σ_n E[W_n] z^{n−1}`.
pub fn mean_gf_series(order: usize) -> Result<TruncSeries> {
    let num = TruncSeries::from_terms(&[(1, 3), (2, -3), (3, 1)], order);
    let den = TruncSeries::from_terms(&[(0, 3), (1, -6), (2, 3)], order);
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::super::dist_table;
    use super::*;
    use crate::series::rat;

    fn upoly(c: &[Rational]) -> RPoly {
        RPoly::new(Var::U, c.to_vec())
    }

    #[test]
    fn pgf_examples() {
        assert_eq!(pgf(2).unwrap(), upoly(&[int(0), int(1)]));
        assert_eq!(pgf(3).unwrap(), upoly(&[int(0), int(1)]));
        assert_eq!(pgf(4).unwrap(), upoly(&[int(0), rat(2, 3), rat(1, 3)]));
        assert_eq!(pgf(5).unwrap(), upoly(&[int(0), rat(1, 3), rat(2, 3)]));
        assert!(pgf(1).is_err());
    }

    #[test]
    fn r_examples() {
        assert!(r_poly(1).unwrap().is_zero());
        assert_eq!(r_poly(2).unwrap(), RPoly::one(Var::Alpha));
        assert_eq!(r_poly(3).unwrap(), RPoly::one(Var::Alpha));
        let r4 = r_poly(4).unwrap();
        assert!(r4.is_even());
        // (2 + u)/3 with u = 1 − α²  →  1 − α²/3
        assert_eq!(r4, RPoly::new(Var::Alpha, vec![int(1), int(0), rat(-1, 3)]));
        assert_eq!(r_to_pgf(2).unwrap(), upoly(&[int(0), int(1)]));
        assert_eq!(r_to_pgf(5).unwrap(), upoly(&[int(0), rat(1, 3), rat(2, 3)]));
    }

    #[test]
    fn odd_alpha_rejected() {
        let odd = RPoly::new(Var::Alpha, vec![int(1), int(1)]);
        assert!(matches!(
            even_alpha_to_pgf(&odd),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn three_routes_agree() {
        let t = dist_table(30).unwrap();
        let ws = pgf_sequence(30).unwrap();
        let rs = r_sequence(30).unwrap();
        for n in 2..=30 {
            let via_r = even_alpha_to_pgf(&rs[n - 1]).unwrap();
            assert_eq!(ws[n - 2], t.row(n).unwrap().as_pgf(), "n={n}");
            assert_eq!(via_r, ws[n - 2], "n={n}");
        }
    }

    #[test]
    fn truncated_w_entries() {
        let w = truncated_w(6).unwrap();
        assert!(w.coeff_z(0).unwrap().is_zero());
        assert_eq!(*w.coeff_z(1).unwrap(), upoly(&[int(0), int(1)]));
        assert_eq!(
            *w.coeff_z(3).unwrap(),
            upoly(&[int(0), rat(2, 3), rat(1, 3)])
        );
        for p in w.coeffs_z().iter().skip(1) {
            assert_eq!(p.eval(&int(1)), int(1));
        }
    }

    #[test]
    fn pde_vanishes_below_boundary() {
        for order in [2usize, 5, 12] {
            let r = pde_residual(order).unwrap();
            for m in 0..order {
                assert!(r.coeff_z(m).unwrap().is_zero(), "order {order} m {m}");
            }
        }
    }

    #[test]
    fn pde_negative_control() {
        let w = truncated_w(5).unwrap();
        let bump = BivarTrunc::from_coeffs(
            vec![RPoly::zero(Var::U), RPoly::zero(Var::U), RPoly::one(Var::U)],
            5,
        )
        .unwrap();
        let res = pde_residual_of(&w.add(&bump).unwrap()).unwrap();
        assert!(res.first_nonzero().unwrap() < 5);
    }

    #[test]
    fn mean_generating_function() {
        let order = 40;
        let s = mean_gf_series(order).unwrap();
        let t = dist_table(order + 1).unwrap();
        assert_eq!(*s.coeff(0).unwrap(), int(0));
        for n in 2..=order + 1 {
            let mean = super::super::moments_white(n, &t).unwrap().mean;
            assert_eq!(*s.coeff(n - 1).unwrap(), mean, "n={n}");
        }
    }

    #[test]
    fn minus_three_numerator_gives_negative_mean() {
        // z(z² − 3z − 3)/(3(1−z)²) starts with −z, but E[W_2] = 1.
        let num = TruncSeries::from_terms(&[(1, -3), (2, -3), (3, 1)], 4);
        let den = TruncSeries::from_terms(&[(0, 3), (1, -6), (2, 3)], 4);
        let wrong = num.div(&den).unwrap();
        assert_eq!(*wrong.coeff(1).unwrap(), int(-1));
    }
}
