use super::{DistRow, DistTable};
use crate::error::{Error, Result};
use crate::series::to_f64;

/// Standard normal CDF, `Φ(x) = erfc(−x/√2)/2`.
///
/// `erfc` is `libm::erfc`, the FreeBSD msun `s_erf.c` piecewise rational
/// approximations (error below 1 ulp), so `Φ` is accurate to about 1e-16
/// absolute. The complement form keeps relative precision in the lower
/// tail.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov distance between a lattice law on `k` (standardised as
/// `(k − n/3)/√(2n/45)`) and `Φ`.
///
/// `pmf` yields `(k, P(k))` in increasing `k`. The supremum of
/// `|F − Φ|` over the real line is attained at a support point, either at
/// the CDF value or at its left limit.
pub fn lattice_normal_distance<I>(n: usize, pmf: I) -> f64
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mean = n as f64 / 3.0;
    let sd = (2.0 * n as f64 / 45.0).sqrt();
    let mut cdf = 0.0;
    let mut sup: f64 = 0.0;
    for (k, p) in pmf {
        let phi = normal_cdf((k as f64 - mean) / sd);
        sup = sup.max((cdf - phi).abs());
        cdf += p;
        sup = sup.max((cdf - phi).abs());
    }
    sup.min(1.0)
}

fn row_distance(row: &DistRow) -> f64 {
    lattice_normal_distance(row.n(), row.support().map(|(k, p)| (k, to_f64(p))))
}

/// `sup_x |P((W_n − n/3)/√(2n/45) ≤ x) − Φ(x)|` for the exact law.
pub fn normal_distance(n: usize, table: &DistTable) -> Result<f64> {
    if n < 6 {
        return Err(Error::OutOfRange { index: n, limit: 6 });
    }
    Ok(row_distance(table.row(n)?))
}

impl DistRow {
    /// Kolmogorov distance of this row to the normal limit.
    pub fn normal_distance(&self) -> Result<f64> {
        if self.n() < 6 {
            return Err(Error::OutOfRange {
                index: self.n(),
                limit: 6,
            });
        }
        Ok(row_distance(self))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{dist_table, exact_row};
    use super::*;

    #[test]
    fn cdf_reference_values() {
        // Φ(0) = 1/2, Φ(1) and Φ(−3) from standard tables (15 digits)
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-14);
        assert!((normal_cdf(-3.0) - 0.001_349_898_031_630_095).abs() < 1e-15);
        assert!((normal_cdf(1.96) - 0.975_002_104_851_780).abs() < 1e-14);
    }

    #[test]
    fn small_n_is_bounded() {
        let t = dist_table(8).unwrap();
        let d = normal_distance(6, &t).unwrap();
        assert!(d.is_finite() && d > 0.0 && d <= 1.0);
        assert!(normal_distance(5, &t).is_err());
        assert!(normal_distance(9, &t).is_err());
    }

    #[test]
    fn distance_shrinks() {
        let d100 = exact_row(100).unwrap().normal_distance().unwrap();
        let d400 = exact_row(400).unwrap().normal_distance().unwrap();
        assert!(d400 < d100, "{d400} !< {d100}");
    }

    #[test]
    fn point_mass_far_from_normal() {
        // a point mass at the mean is at distance 1/2 from Φ
        let d = lattice_normal_distance(30, [(10usize, 1.0)]);
        assert!((d - 0.5).abs() < 1e-12);
    }
}
