//! Counting distinct necklaces.
//!
//! The distinct necklaces the process can build are cycles of blocks, each
//! block one white bead followed by a non-empty run of blacks. Their
//! ordinary generating function is
//! `N(z) = Σ_k φ(k)/k · log((1 − z^k)/(1 − z^k − z^{2k}))`, expanded exactly
//! here and checked against two brute-force enumerations.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::necklace::{BeadColor, Necklace};
use crate::series::{Rational, TruncSeries};

/// Largest size accepted by [`enumerate_valid`].
pub const ENUMERATE_MAX: usize = 24;
/// Largest size accepted by [`enumerate_valid_by_filter`].
pub const FILTER_MAX: usize = 20;
/// Largest size accepted by [`reachable`].
pub const REACHABLE_MAX: usize = 14;
/// Largest size for full process enumeration ((n−1)! leaves).
pub const PROCESS_ENUM_MAX: usize = 11;

/// Euler's totient by trial-division factorisation.
pub fn totient(k: u64) -> Result<u64> {
    if k < 1 {
        return Err(Error::InvalidInput("totient needs k ≥ 1".into()));
    }
    let mut rest = k;
    let mut phi = k;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    Ok(phi)
}

/// `[z^n] N(z)` for `0 ≤ n ≤ n_max` (entries 0 and 1 are zero).
///
/// The `k`-th summand equals `L(z^k)` with
/// `L(z) = log(1 − z) − log(1 − z − z²)`, so `L` is expanded once to order
/// `n_max` and substituted; summands start at `z^k`, so only `k ≤ n_max`
/// contribute. Every final coefficient must be a nonnegative integer.
pub fn necklace_count_coeffs(n_max: usize) -> Result<Vec<BigUint>> {
    if n_max < 2 {
        return Err(Error::InvalidInput(format!(
            "n_max must be ≥ 2, got {n_max}"
        )));
    }
    let base = TruncSeries::from_terms(&[(0, 1), (1, -1)], n_max)
        .log()?
        .sub(&TruncSeries::from_terms(&[(0, 1), (1, -1), (2, -1)], n_max).log()?)?;
    let mut total = TruncSeries::zero(n_max);
    for k in 1..=n_max {
        let inner = TruncSeries::from_coeffs(base.coeffs()[..=n_max / k].to_vec(), n_max / k);
        let summand = inner.compose_zk_to(k, n_max)?;
        if let Some(m) = summand.coeffs()[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::Consistency(format!(
                "summand k={k} has a nonzero coefficient at z^{m} below z^k"
            )));
        }
        let weight = Rational::new(BigInt::from(totient(k as u64)?), BigInt::from(k));
        total = total.add(&summand.scale(&weight))?;
    }
    total
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            if !c.is_integer() || c.is_negative() {
                return Err(Error::Consistency(format!(
                    "[z^{n}]N(z) = {c} is not a nonnegative integer"
                )));
            }
            Ok(c.to_integer().to_biguint().expect("nonnegative"))
        })
        .collect()
}

fn block_necklace(parts: &[usize]) -> Necklace {
    let mut beads = Vec::with_capacity(parts.iter().sum());
    for &p in parts {
        beads.push(BeadColor::White);
        beads.extend(std::iter::repeat_n(BeadColor::Black, p - 1));
    }
    Necklace::new(beads)
}

fn compositions(rest: usize, parts: &mut Vec<usize>, out: &mut BTreeSet<Necklace>) {
    if rest == 0 {
        out.insert(block_necklace(parts).canonical_form());
        return;
    }
    for p in 2..=rest {
        parts.push(p);
        compositions(rest - p, parts, out);
        parts.pop();
    }
}

/// Canonical forms of all valid necklaces of size `n`, generated from the
/// compositions of `n` into parts ≥ 2 (one part per white-led block).
pub fn enumerate_valid(n: usize) -> Result<BTreeSet<Necklace>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be ≥ 2, got {n}")));
    }
    if n > ENUMERATE_MAX {
        return Err(Error::Resource(format!(
            "enumerate_valid limited to n ≤ {ENUMERATE_MAX}"
        )));
    }
    let mut out = BTreeSet::new();
    compositions(n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Same set as [`enumerate_valid`], by filtering all `2^n` bead strings
/// through [`Necklace::is_valid`].
pub fn enumerate_valid_by_filter(n: usize) -> Result<BTreeSet<Necklace>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be ≥ 2, got {n}")));
    }
    if n > FILTER_MAX {
        return Err(Error::Resource(format!(
            "string filter limited to n ≤ {FILTER_MAX}"
        )));
    }
    let mut out = BTreeSet::new();
    for mask in 0u32..(1u32 << n) {
        let beads = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    BeadColor::White
                } else {
                    BeadColor::Black
                }
            })
            .collect();
        let x = Necklace::new(beads);
        if x.is_valid() {
            out.insert(x.canonical_form());
        }
    }
    Ok(out)
}

/// Canonical necklaces reachable from the start necklace after `n − 2`
/// insertions, by breadth-first search deduplicated per level.
pub fn reachable(n: usize) -> Result<BTreeSet<Necklace>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be ≥ 2, got {n}")));
    }
    if n > REACHABLE_MAX {
        return Err(Error::Resource(format!(
            "reachable limited to n ≤ {REACHABLE_MAX}"
        )));
    }
    let mut level = BTreeSet::from([Necklace::start().canonical_form()]);
    for _ in 2..n {
        let mut next = BTreeSet::new();
        for x in &level {
            for g in 0..x.size() {
                next.insert(x.insert_at(g)?.canonical_form());
            }
        }
        level = next;
    }
    Ok(level)
}

/// `(n − 1)!`, the number of construction processes of size `n`.
pub fn process_count(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be ≥ 2, got {n}")));
    }
    Ok(crate::exactdist::factorial(n - 1))
}

fn walk_processes(x: &Necklace, n: usize, hist: &mut Vec<u64>) {
    if x.size() == n {
        hist[x.white_count()] += 1;
        return;
    }
    for g in 0..x.size() {
        let y = x.insert_at(g).expect("gap in range");
        walk_processes(&y, n, hist);
    }
}

/// Runs every construction process of size `n` on actual bead sequences
/// and tallies the final white counts; `hist[k]` processes end with `k`
/// whites. No deduplication: each insertion path is one leaf.
pub fn process_white_histogram(n: usize) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be ≥ 2, got {n}")));
    }
    if n > PROCESS_ENUM_MAX {
        return Err(Error::Resource(format!(
            "process enumeration limited to n ≤ {PROCESS_ENUM_MAX}"
        )));
    }
    let mut hist = vec![0u64; n / 2 + 1];
    walk_processes(&Necklace::start(), n, &mut hist);
    Ok(hist)
}

/// Number of distinct insertion paths of length `n − 2` from the start.
pub fn count_process_paths(n: usize) -> Result<u64> {
    Ok(process_white_histogram(n)?.iter().sum())
}

/// Lucas numbers `L_0 = 2, L_1 = 1`; `L_n = φ^n + ψ^n`.
pub fn lucas(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::from(2), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Exact count against the main term `φ^n/n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub n: usize,
    #[serde(serialize_with = "ser_display")]
    pub exact_count: BigUint,
    pub estimate: f64,
    pub relative_error: f64,
    /// `|exact − φ^n/n| · n / φ^{n/2}`
    pub normalized_error: f64,
}

fn ser_display<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Compares `exact` with `φ^n/n`, `φ = (1+√5)/2` in 64-bit floating point.
///
/// The error `n·exact − φ^n` is formed as `(n·exact − L_n) + ψ^n` with the
/// integer part exact, since `φ^n` itself carries an absolute rounding
/// error far larger than `φ^{n/2}` once `n` exceeds about 140.
pub fn asymptotic_report(n: usize, exact: &BigUint) -> Result<CountReport> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be ≥ 2, got {n}")));
    }
    let phi = golden_ratio();
    let psi = (1.0 - 5f64.sqrt()) / 2.0;
    let nf = n as f64;
    let n_exact = BigInt::from(exact.clone()) * BigInt::from(n);
    let gap = (&n_exact - lucas(n)).to_f64().unwrap_or(f64::INFINITY) + psi.powi(n as i32);
    let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
    Ok(CountReport {
        n,
        exact_count: exact.clone(),
        estimate: phi.powi(n as i32) / nf,
        relative_error: gap.abs() / (nf * exact_f),
        normalized_error: gap.abs() / phi.powf(nf / 2.0),
    })
}

/// `(n, count)` rows plus a per-row comparison with the enumeration oracle
/// for `n ≤ brute_up_to`.
#[derive(Debug, Clone, Serialize)]
pub struct CountRow {
    #[serde(flatten)]
    pub report: CountReport,
    pub bruteforce: Option<usize>,
}

pub fn count_rows(n_max: usize, brute_up_to: usize) -> Result<Vec<CountRow>> {
    let coeffs = necklace_count_coeffs(n_max)?;
    (2..=n_max)
        .map(|n| {
            let report = asymptotic_report(n, &coeffs[n])?;
            let bruteforce = if n <= brute_up_to {
                Some(enumerate_valid(n)?.len())
            } else {
                None
            };
            Ok(CountRow { report, bruteforce })
        })
        .collect()
}

/// Greatest common divisor count oracle for the totient.
pub fn totient_by_gcd(k: u64) -> u64 {
    (1..=k).filter(|j| j.gcd(&k) == 1).count() as u64
}
