//! Exact law of the number of white beads `W_n`.
//!
//! The same distribution is produced by four routes that share no code path
//! beyond the rational type:
//!
//! * [`dist_table`]: the Markov transition `P(k → k) = 2k/n`,
//!   `P(k → k+1) = 1 − 2k/n` propagated row by row;
//! * [`pgf`]: the PGF recurrence `w_{n+1} = 2u(1−u)/n · w_n' + u·w_n`;
//! * [`process_counts`]: integer counts `c_{n,k} = w_{n,k}·(n−1)!`;
//! * [`r_to_pgf`]: the even polynomials `r_n(α)` with `α² = 1 − u`.

mod closed_form;
mod normal;
mod pgf;

pub use closed_form::{
    closed_form_eval, closed_form_eval_symmetric, x_coth_x_coeffs, FALLBACK_WINDOW, POLE_EPS,
};
pub use normal::{lattice_normal_distance, normal_cdf, normal_distance};
pub use pgf::{
    mean_gf_series, pde_residual, pde_residual_of, pgf, pgf_sequence, r_poly, r_sequence, r_to_pgf,
    truncated_w,
};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{to_frac_string, RPoly, Rational, Var};

/// Exact distribution of `W_n` for one `n`; `probs[k] = P(W_n = k)` for
/// `k` in `0..=n/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistRow {
    n: usize,
    probs: Vec<Rational>,
}

impl DistRow {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// `P(W_n = k)`, zero outside `1..=n/2`.
    pub fn prob(&self, k: usize) -> Rational {
        self.probs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(k, P(W_n = k))` for every `k` with positive probability.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.probs.iter().enumerate().filter(|(_, p)| !p.is_zero())
    }

    /// The row as the polynomial `Σ_k P(W_n = k) u^k`.
    pub fn as_pgf(&self) -> RPoly {
        RPoly::new(Var::U, self.probs.clone())
    }

    pub fn total(&self) -> Rational {
        self.probs.iter().sum()
    }
}

/// Rows `2..=n_max` of the exact law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistTable {
    n_max: usize,
    rows: Vec<DistRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableEntry {
    pub n: usize,
    pub k: usize,
    pub value: String,
}

impl DistTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn row(&self, n: usize) -> Result<&DistRow> {
        if n < 2 || n > self.n_max {
            return Err(Error::OutOfRange {
                index: n,
                limit: self.n_max,
            });
        }
        Ok(&self.rows[n - 2])
    }

    pub fn rows(&self) -> &[DistRow] {
        &self.rows
    }

    /// One entry per `(n, k)` with `1 ≤ k ≤ ⌊n/2⌋`, values as `"num/den"`.
    pub fn entries(&self) -> Vec<TableEntry> {
        self.rows
            .iter()
            .flat_map(|row| {
                (1..row.probs.len()).map(move |k| TableEntry {
                    n: row.n,
                    k,
                    value: to_frac_string(&row.probs[k]),
                })
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        entries_csv(&self.entries())
    }
}

/// Exact law by the Markov recurrence
/// `w_{n+1,k} = (2k/n)·w_{n,k} + (1 − 2(k−1)/n)·w_{n,k−1}`.
pub fn dist_table(n_max: usize) -> Result<DistTable> {
    if n_max < 2 {
        return Err(Error::InvalidInput(format!(
            "n_max must be ≥ 2, got {n_max}"
        )));
    }
    let mut rows = Vec::with_capacity(n_max - 1);
    let mut cur = DistRow {
        n: 2,
        probs: vec![Rational::zero(), Rational::one()],
    };
    for n in 2..n_max {
        let next = markov_step(&cur, n);
        rows.push(std::mem::replace(&mut cur, next));
    }
    rows.push(cur);
    Ok(DistTable { n_max, rows })
}

fn markov_step(row: &DistRow, n: usize) -> DistRow {
    let len = n.div_ceil(2) + 1;
    let n_q = Rational::from_integer(BigInt::from(n));
    let probs = (0..len)
        .map(|k| {
            let stay = if k < row.probs.len() {
                &row.probs[k] * Rational::from_integer(BigInt::from(2 * k)) / &n_q
            } else {
                Rational::zero()
            };
            let grow = if k >= 1 && k - 1 < row.probs.len() {
                let j = k - 1;
                // 1 − 2j/n = (n − 2j)/n, nonnegative on the support j ≤ n/2
                let factor = Rational::new(BigInt::from(n as i64 - 2 * j as i64), BigInt::from(n));
                &row.probs[j] * factor
            } else {
                Rational::zero()
            };
            stay + grow
        })
        .collect();
    DistRow { n: n + 1, probs }
}

/// Number of construction processes of each white count, `c_{n,k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessCountTable {
    n_max: usize,
    rows: Vec<Vec<BigUint>>,
}

impl ProcessCountTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Counts for size `n`, indexed by `k` in `0..=n/2`.
    pub fn row(&self, n: usize) -> Result<&[BigUint]> {
        if n < 2 || n > self.n_max {
            return Err(Error::OutOfRange {
                index: n,
                limit: self.n_max,
            });
        }
        Ok(&self.rows[n - 2])
    }

    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.row(n)
            .ok()
            .and_then(|r| r.get(k).cloned())
            .unwrap_or_else(BigUint::zero)
    }

    pub fn entries(&self) -> Vec<TableEntry> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                (1..row.len()).map(move |k| TableEntry {
                    n: i + 2,
                    k,
                    value: row[k].to_string(),
                })
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        entries_csv(&self.entries())
    }
}

fn entries_csv(entries: &[TableEntry]) -> String {
    let mut out = String::from("n,k,value\n");
    for e in entries {
        out.push_str(&format!("{},{},{}\n", e.n, e.k, e.value));
    }
    out
}

fn count_step(prev: &[BigUint], n: usize) -> Vec<BigUint> {
    // row for size n from row for size n-1:
    // c_{n,k} = 2k·c_{n-1,k} + (n+1-2k)·c_{n-1,k-1}, for 1 ≤ k ≤ n/2
    let len = n / 2 + 1;
    let mut row = vec![BigUint::zero(); len];
    for (k, slot) in row.iter_mut().enumerate().skip(1) {
        let mut acc = BigUint::zero();
        if let Some(c) = prev.get(k) {
            acc += c * BigUint::from(2 * k);
        }
        if let Some(c) = prev.get(k - 1) {
            acc += c * BigUint::from(n + 1 - 2 * k);
        }
        *slot = acc;
    }
    row
}

/// Integer counts from `c_{2,1} = 1`, in integer arithmetic only.
pub fn process_counts(n_max: usize) -> Result<ProcessCountTable> {
    if n_max < 2 {
        return Err(Error::InvalidInput(format!(
            "n_max must be ≥ 2, got {n_max}"
        )));
    }
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(), BigUint::one()]];
    for n in 3..=n_max {
        let next = count_step(rows.last().expect("nonempty"), n);
        rows.push(next);
    }
    Ok(ProcessCountTable { n_max, rows })
}

/// Process counts for a single size, keeping only one row in memory.
pub fn process_count_row(n: usize) -> Result<Vec<BigUint>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be ≥ 2, got {n}")));
    }
    let mut row = vec![BigUint::zero(), BigUint::one()];
    for m in 3..=n {
        row = count_step(&row, m);
    }
    Ok(row)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Exact law of `W_n` for one (possibly large) `n`, via the integer counts
/// divided by `(n−1)!`. Uses O(n) memory, unlike [`dist_table`].
pub fn exact_row(n: usize) -> Result<DistRow> {
    let counts = process_count_row(n)?;
    let total = BigInt::from(factorial(n - 1));
    let probs = counts
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), total.clone()))
        .collect();
    Ok(DistRow { n, probs })
}

/// Exact mean and variance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentPair {
    pub n: usize,
    pub mean: Rational,
    pub variance: Rational,
}

pub fn row_moments(row: &DistRow) -> MomentPair {
    let mut mean = Rational::zero();
    let mut second = Rational::zero();
    for (k, p) in row.support() {
        let kq = Rational::from_integer(BigInt::from(k));
        mean += &kq * p;
        second += &kq * &kq * p;
    }
    let variance = second - &mean * &mean;
    MomentPair {
        n: row.n,
        mean,
        variance,
    }
}

pub fn moments_white(n: usize, table: &DistTable) -> Result<MomentPair> {
    Ok(row_moments(table.row(n)?))
}

/// Moments of `B_n = n − W_n`.
pub fn moments_black(n: usize, table: &DistTable) -> Result<MomentPair> {
    let white = moments_white(n, table)?;
    Ok(MomentPair {
        n,
        mean: Rational::from_integer(BigInt::from(n)) - white.mean,
        variance: white.variance,
    })
}
