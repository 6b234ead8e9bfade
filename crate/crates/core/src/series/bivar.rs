use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::{RPoly, Rational, TruncSeries, Var};
use crate::error::{Error, Result};

/// Bivariate series truncated in `z`: entry `m` is the polynomial in `u`
/// multiplying `z^m`, exact for `m ≤ order_z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivarTrunc {
    coeffs_z: Vec<RPoly>,
}

impl BivarTrunc {
    pub fn zero(order_z: usize) -> Self {
        BivarTrunc {
            coeffs_z: vec![RPoly::zero(Var::U); order_z + 1],
        }
    }

    /// Pads with zero polynomials or drops entries beyond `order_z`.
    pub fn from_coeffs(mut coeffs_z: Vec<RPoly>, order_z: usize) -> Result<Self> {
        if let Some(p) = coeffs_z.iter().find(|p| p.var() != Var::U) {
            return Err(Error::VariableMismatch {
                left: Var::U.symbol(),
                right: p.var().symbol(),
            });
        }
        coeffs_z.resize(order_z + 1, RPoly::zero(Var::U));
        Ok(BivarTrunc { coeffs_z })
    }

    pub fn order_z(&self) -> usize {
        self.coeffs_z.len() - 1
    }

    pub fn coeffs_z(&self) -> &[RPoly] {
        &self.coeffs_z
    }

    pub fn coeff_z(&self, m: usize) -> Result<&RPoly> {
        self.coeffs_z.get(m).ok_or(Error::OutOfRange {
            index: m,
            limit: self.order_z(),
        })
    }

    pub fn add(&self, other: &BivarTrunc) -> Result<BivarTrunc> {
        if self.order_z() != other.order_z() {
            return Err(Error::OrderMismatch {
                left: self.order_z(),
                right: other.order_z(),
            });
        }
        let coeffs_z = self
            .coeffs_z
            .iter()
            .zip(&other.coeffs_z)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(BivarTrunc { coeffs_z })
    }

    /// Specialises `u` to an exact value, giving a series in `z`.
    pub fn at_u(&self, u: &Rational) -> TruncSeries {
        let coeffs = self.coeffs_z.iter().map(|p| p.eval(u)).collect();
        TruncSeries::from_coeffs(coeffs, self.order_z())
    }

    /// Partial sum `Σ_{m ≤ order} p_m(u) z^m` in floating point.
    pub fn partial_sum_f64(&self, z: f64, u: f64) -> f64 {
        self.coeffs_z
            .iter()
            .rev()
            .fold(0.0, |acc, p| acc * z + p.eval_f64(u))
    }

    /// True when every entry is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs_z.iter().all(RPoly::is_zero)
    }

    /// Lowest `z`-power with a nonzero entry.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs_z.iter().position(|p| !p.is_zero())
    }

    /// Checks the white-count support bound `deg_u(entry m) ≤ ⌊(m+1)/2⌋`.
    pub fn satisfies_support_bound(&self) -> bool {
        self.coeffs_z
            .iter()
            .enumerate()
            .all(|(m, p)| p.degree().is_none_or(|d| d <= m.div_ceil(2)))
    }

    pub(crate) fn entry_mut(&mut self, m: usize) -> &mut RPoly {
        &mut self.coeffs_z[m]
    }

    /// Total count of nonzero rational coefficients, for diagnostics.
    pub fn nonzero_terms(&self) -> usize {
        self.coeffs_z
            .iter()
            .map(|p| p.coeffs().iter().filter(|c| !c.is_zero()).count())
            .sum()
    }
}

impl Serialize for BivarTrunc {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs_z.serialize(serializer)
    }
}
