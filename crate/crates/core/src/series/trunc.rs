use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{frac_strings, parse_frac_strings, Rational};
use crate::error::{Error, Result};

/// Formal power series in `z` known exactly through `z^order`.
///
/// Binary operations require equal orders; there is no silent coercion to
/// the smaller order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = TruncSeries::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// Builds a series of the given order, padding with zeros or dropping
    /// coefficients above `order`.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncSeries { coeffs }
    }

    /// Sparse constructor: `Σ c·z^e` over `(e, c)` terms.
    pub fn from_terms(terms: &[(usize, i64)], order: usize) -> Self {
        let mut s = TruncSeries::zero(order);
        for &(e, c) in terms {
            if e <= order {
                s.coeffs[e] += Rational::from_integer(c.into());
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^m`. Asking beyond the truncation order is an error,
    /// never an implicit zero.
    pub fn coeff(&self, m: usize) -> Result<&Rational> {
        self.coeffs.get(m).ok_or(Error::OutOfRange {
            index: m,
            limit: self.order(),
        })
    }

    fn same_order(&self, other: &TruncSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.same_order(other)?;
        Ok(TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.same_order(other)?;
        Ok(TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.same_order(other)?;
        let order = self.order();
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `self / divisor`; the divisor must have a nonzero constant term.
    pub fn div(&self, divisor: &TruncSeries) -> Result<TruncSeries> {
        self.same_order(divisor)?;
        Ok(TruncSeries {
            coeffs: div_coeffs(&self.coeffs, &divisor.coeffs)?,
        })
    }

    /// Formal logarithm `∫ s'/s`, for series with constant term 1.
    pub fn log(&self) -> Result<TruncSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain(format!(
                "log needs constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        let order = self.order();
        if order == 0 {
            return Ok(TruncSeries::zero(0));
        }
        // s' is exact through z^(order-1), so the quotient is too.
        let deriv = derivative_coeffs(&self.coeffs);
        let quotient = div_coeffs(&deriv, &self.coeffs[..order])?;
        Ok(TruncSeries {
            coeffs: integrate_coeffs(&quotient),
        })
    }

    /// Formal exponential, for series with constant term 0.
    pub fn exp(&self) -> Result<TruncSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain(format!(
                "exp needs constant term 0, got {}",
                self.coeffs[0]
            )));
        }
        let order = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        out.push(Rational::one());
        for m in 1..=order {
            let mut acc = Rational::zero();
            for j in 1..=m {
                let sj = &self.coeffs[j];
                if !sj.is_zero() {
                    acc += sj * &out[m - j] * Rational::from_integer(BigInt::from(j));
                }
            }
            out.push(acc / Rational::from_integer(BigInt::from(m)));
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// Substitution `z ↦ z^k`, truncated at the original order.
    pub fn compose_zk(&self, k: usize) -> Result<TruncSeries> {
        if k == 0 {
            return Err(Error::InvalidInput("compose_zk needs k ≥ 1".into()));
        }
        let order = self.order();
        let mut out = TruncSeries::zero(order);
        for (i, c) in self.coeffs.iter().enumerate() {
            match i.checked_mul(k) {
                Some(e) if e <= order => out.coeffs[e] = c.clone(),
                _ => break,
            }
        }
        Ok(out)
    }

    /// Substitution `z ↦ z^k` producing a series of order `target`. Exact
    /// when `target < k · (self.order() + 1)`, which is checked.
    pub fn compose_zk_to(&self, k: usize, target: usize) -> Result<TruncSeries> {
        if k == 0 {
            return Err(Error::InvalidInput("compose_zk needs k ≥ 1".into()));
        }
        if target >= k * (self.order() + 1) {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: target,
            });
        }
        let mut out = TruncSeries::zero(target);
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = i * k;
            if e > target {
                break;
            }
            out.coeffs[e] = c.clone();
        }
        Ok(out)
    }

    pub fn from_frac_strings(items: &[String]) -> Result<TruncSeries> {
        if items.is_empty() {
            return Err(Error::InvalidInput(
                "series needs at least one coefficient".into(),
            ));
        }
        let coeffs = parse_frac_strings(items)?;
        Ok(TruncSeries { coeffs })
    }
}

fn derivative_coeffs(c: &[Rational]) -> Vec<Rational> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| a * Rational::from_integer(BigInt::from(i)))
        .collect()
}

fn integrate_coeffs(c: &[Rational]) -> Vec<Rational> {
    std::iter::once(Rational::zero())
        .chain(
            c.iter()
                .enumerate()
                .map(|(i, a)| a / Rational::from_integer(BigInt::from(i + 1))),
        )
        .collect()
}

/// Quotient of two coefficient vectors of equal length.
fn div_coeffs(num: &[Rational], den: &[Rational]) -> Result<Vec<Rational>> {
    let b0 = &den[0];
    if b0.is_zero() {
        return Err(Error::Domain(
            "division by a series with zero constant term".into(),
        ));
    }
    let inv_b0 = b0.recip();
    let mut q: Vec<Rational> = Vec::with_capacity(num.len());
    for m in 0..num.len() {
        let mut acc = num[m].clone();
        for j in 1..=m {
            let bj = &den[j];
            if !bj.is_zero() {
                acc -= bj * &q[m - j];
            }
        }
        q.push(acc * &inv_b0);
    }
    Ok(q)
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        frac_strings(&self.coeffs).serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn product_and_sum() {
        let a = TruncSeries::from_terms(&[(0, 1), (1, 1)], 2);
        let b = TruncSeries::from_terms(&[(0, 1), (1, -1)], 2);
        assert_eq!(
            a.mul(&b).unwrap(),
            TruncSeries::from_terms(&[(0, 1), (2, -1)], 2)
        );
        assert_eq!(a.add(&TruncSeries::zero(2)).unwrap(), a);
        assert!(matches!(
            a.add(&TruncSeries::zero(3)),
            Err(Error::OrderMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn geometric_and_self_division() {
        let one = TruncSeries::one(8);
        let one_minus_z = TruncSeries::from_terms(&[(0, 1), (1, -1)], 8);
        let geo = one.div(&one_minus_z).unwrap();
        assert!(geo.coeffs().iter().all(|c| *c == int(1)));
        assert_eq!(one_minus_z.div(&one_minus_z).unwrap(), one);
        let no_const = TruncSeries::from_terms(&[(1, 1)], 8);
        assert!(matches!(one.div(&no_const), Err(Error::Domain(_))));
    }

    #[test]
    fn log_examples() {
        let order = 10;
        let geo = TruncSeries::one(order)
            .div(&TruncSeries::from_terms(&[(0, 1), (1, -1)], order))
            .unwrap();
        let l = geo.log().unwrap();
        assert_eq!(*l.coeff(0).unwrap(), int(0));
        for m in 1..=order {
            assert_eq!(*l.coeff(m).unwrap(), rat(1, m as i64));
        }
        assert_eq!(
            TruncSeries::one(order).log().unwrap(),
            TruncSeries::zero(order)
        );
        let bad = TruncSeries::from_terms(&[(0, 2)], order);
        assert!(matches!(bad.log(), Err(Error::Domain(_))));
    }

    #[test]
    fn log_of_fibonacci_denominator_gives_lucas_over_m() {
        // -log(1 - z - z^2) = Σ L_m z^m / m with Lucas numbers L
        let order = 30;
        let s = TruncSeries::from_terms(&[(0, 1), (1, -1), (2, -1)], order);
        let l = s.log().unwrap();
        let (mut a, mut b) = (2i64, 1i64);
        for m in 1..=order {
            assert_eq!(-l.coeff(m).unwrap().clone(), rat(b, m as i64));
            let next = a + b;
            a = b;
            b = next;
        }
    }

    #[test]
    fn substitution() {
        let s = TruncSeries::from_terms(&[(0, 1), (1, -1)], 4);
        assert_eq!(
            s.compose_zk(2).unwrap(),
            TruncSeries::from_terms(&[(0, 1), (2, -1)], 4)
        );
        assert_eq!(s.compose_zk(1).unwrap(), s);
        assert!(s.compose_zk(0).is_err());
        let t = TruncSeries::from_coeffs((1..=7).map(int).collect(), 6);
        let c = t.compose_zk(3).unwrap();
        for m in 0..=6 {
            let expect = if m % 3 == 0 {
                t.coeff(m / 3).unwrap().clone()
            } else {
                int(0)
            };
            assert_eq!(*c.coeff(m).unwrap(), expect);
        }
        let wide = t.compose_zk_to(3, 20).unwrap();
        assert_eq!(*wide.coeff(18).unwrap(), int(7));
        assert!(t.compose_zk_to(3, 21).is_err());
    }

    #[test]
    fn coeff_beyond_order_is_error() {
        let s = TruncSeries::from_terms(&[(0, 1), (2, -1)], 2);
        assert_eq!(*s.coeff(2).unwrap(), int(-1));
        assert_eq!(s.coeff(3), Err(Error::OutOfRange { index: 3, limit: 2 }));
    }

    #[test]
    fn json_round_trip() {
        let s = TruncSeries::from_coeffs(vec![int(1), rat(-1, 2), rat(1, 3)], 2);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"["1","-1/2","1/3"]"#);
        let items: Vec<String> = serde_json::from_str(&text).unwrap();
        assert_eq!(TruncSeries::from_frac_strings(&items).unwrap(), s);
    }

    const ORDER: usize = 7;

    fn series_with_const(c0: i64) -> impl Strategy<Value = TruncSeries> {
        prop::collection::vec((-6i64..7, 1i64..5), ORDER).prop_map(move |v| {
            let mut coeffs = vec![int(c0)];
            coeffs.extend(v.into_iter().map(|(a, b)| rat(a, b)));
            TruncSeries::from_coeffs(coeffs, ORDER)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in series_with_const(2), b in series_with_const(-1), c in series_with_const(0)) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&TruncSeries::one(ORDER)).unwrap(), a.clone());
        }

        #[test]
        fn division_inverts_product(a in series_with_const(3), b in series_with_const(-2)) {
            let q = a.div(&b).unwrap();
            prop_assert_eq!(q.mul(&b).unwrap(), a);
        }

        #[test]
        fn log_exp_round_trip(a in series_with_const(1), c in series_with_const(0)) {
            prop_assert_eq!(a.log().unwrap().exp().unwrap(), a);
            prop_assert_eq!(c.exp().unwrap().log().unwrap(), c);
        }

        #[test]
        fn log_of_product(a in series_with_const(1), b in series_with_const(1)) {
            let lhs = a.mul(&b).unwrap().log().unwrap();
            let rhs = a.log().unwrap().add(&b.log().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
