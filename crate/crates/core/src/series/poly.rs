use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{frac_strings, parse_frac_strings, Rational};
use crate::error::{Error, Result};

/// Name of a polynomial's indeterminate. Only used to reject mixing, e.g.
/// adding a polynomial in `α` to one in `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    U,
    Alpha,
    Z,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::U => 'u',
            Var::Alpha => 'α',
            Var::Z => 'z',
        }
    }
}

/// Dense univariate polynomial over the rationals; `coeffs[i]` is the
/// coefficient of `x^i`. The highest stored coefficient is nonzero, and the
/// zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RPoly {
    var: Var,
    coeffs: Vec<Rational>,
}

impl RPoly {
    pub fn new(var: Var, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RPoly { var, coeffs }
    }

    pub fn zero(var: Var) -> Self {
        RPoly {
            var,
            coeffs: Vec::new(),
        }
    }

    pub fn one(var: Var) -> Self {
        RPoly::constant(var, Rational::one())
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        RPoly::new(var, vec![c])
    }

    /// `c · x^k`
    pub fn monomial(var: Var, c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        RPoly::new(var, coeffs)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn same_var(&self, other: &RPoly) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch {
                left: self.var.symbol(),
                right: other.var.symbol(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &RPoly) -> Result<RPoly> {
        self.same_var(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Ok(RPoly::new(self.var, coeffs))
    }

    pub fn sub(&self, other: &RPoly) -> Result<RPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RPoly {
        RPoly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &RPoly) -> Result<RPoly> {
        self.same_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(RPoly::zero(self.var));
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(RPoly::new(self.var, out))
    }

    pub fn scale(&self, c: &Rational) -> RPoly {
        RPoly::new(self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> RPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RPoly {
            var: self.var,
            coeffs,
        }
    }

    /// Formal derivative `d/dx`.
    pub fn derivative(&self) -> RPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(i.into()))
            .collect();
        RPoly::new(self.var, coeffs)
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Floating-point evaluation; coefficients are rounded to `f64` first.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + super::to_f64(c))
    }

    /// True when every odd-power coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    pub fn from_frac_strings(var: Var, items: &[String]) -> Result<RPoly> {
        Ok(RPoly::new(var, parse_frac_strings(items)?))
    }
}

impl Serialize for RPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        frac_strings(&self.coeffs).serialize(serializer)
    }
}

impl fmt::Display for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let x = self.var.symbol();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c}){x}")?,
                _ => write!(f, "({c}){x}^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;
    use proptest::prelude::*;

    fn u() -> RPoly {
        RPoly::monomial(Var::U, int(1), 1)
    }

    #[test]
    fn derivative_and_eval() {
        assert_eq!(u().derivative(), RPoly::one(Var::U));
        assert!(RPoly::one(Var::U).derivative().is_zero());
        // w_4(u) = 2u/3 + u^2/3 sums to one at u = 1
        let w4 = RPoly::new(Var::U, vec![int(0), rat(2, 3), rat(1, 3)]);
        assert_eq!(w4.eval(&int(1)), int(1));
        assert_eq!(w4.derivative().eval(&int(1)), rat(4, 3));
    }

    #[test]
    fn zero_handling() {
        let p = RPoly::new(Var::U, vec![int(1), int(2), int(0), int(0)]);
        assert_eq!(p.degree(), Some(1));
        assert!(p.mul(&RPoly::zero(Var::U)).unwrap().is_zero());
        assert_eq!(RPoly::zero(Var::U).degree(), None);
        assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn variable_mismatch() {
        let a = RPoly::one(Var::U);
        let b = RPoly::one(Var::Alpha);
        assert!(matches!(a.add(&b), Err(Error::VariableMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn evenness() {
        assert!(RPoly::new(Var::Alpha, vec![int(1), int(0), int(3)]).is_even());
        assert!(!RPoly::new(Var::Alpha, vec![int(1), rat(1, 2)]).is_even());
    }

    #[test]
    fn json_array_of_fractions() {
        let p = RPoly::new(Var::U, vec![int(0), rat(2, 3), rat(1, 3)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["0","2/3","1/3"]"#);
        let items: Vec<String> = serde_json::from_str(&s).unwrap();
        assert_eq!(RPoly::from_frac_strings(Var::U, &items).unwrap(), p);
    }

    fn small_poly() -> impl Strategy<Value = RPoly> {
        prop::collection::vec((-9i64..10, 1i64..6), 0..6)
            .prop_map(|v| RPoly::new(Var::U, v.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.mul(&RPoly::one(Var::U)).unwrap(), a.clone());
            // Leibniz rule
            let d1 = a.mul(&b).unwrap().derivative();
            let d2 = a.derivative().mul(&b).unwrap().add(&a.mul(&b.derivative()).unwrap()).unwrap();
            prop_assert_eq!(d1, d2);
        }

        #[test]
        fn eval_is_homomorphism(a in small_poly(), b in small_poly(), x in -5i64..6) {
            let x = rat(x, 3);
            prop_assert_eq!(a.mul(&b).unwrap().eval(&x), a.eval(&x) * b.eval(&x));
        }
    }
}
