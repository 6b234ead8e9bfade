//! End-to-end consistency checks behind `necklace verify`.
//!
//! `Level::Full` uses the acceptance parameters; `Level::Quick` runs the
//! same checks on smaller ranges so that it finishes in a few seconds.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::counting;
use crate::error::Result;
use crate::exactdist;
use crate::montecarlo::{self, SimConfig};
use crate::series::{rat, Rational};

/// Closed form against the truncated series, absolute.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// `coth` form against the exponential form, absolute.
pub const SYMMETRIC_FORM_TOL: f64 = 1e-12;
/// Number of `W(z,u)` coefficients summed: `n ≤ 121`, i.e. through `z^120`.
pub const SERIES_ORDER: usize = 120;
pub const Z_GRID: [f64; 3] = [0.1, 0.2, 0.3];
pub const U_GRID: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
/// Terms of the `x·coth x` expansion used near `u = 1`.
pub const FALLBACK_TERMS: usize = 8;
/// Allowed spread of `d_n·√n` around the fitted constant.
pub const CLT_ENVELOPE_FACTOR: f64 = 3.0;
pub const CLT_SIZES: [usize; 3] = [100, 400, 1600];
/// Monte Carlo mean tolerance in standard errors.
pub const MC_MEAN_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

struct Params {
    law_n: usize,
    moments_n: usize,
    triple_n: usize,
    pde_order: usize,
    count_n: usize,
    reach_n: usize,
    tables_n: usize,
    asym_n: usize,
    mc_reps: u64,
    mc_seeds: u64,
    mc_min_accept: u64,
}

impl Level {
    fn params(self) -> Params {
        match self {
            Level::Full => Params {
                law_n: 9,
                moments_n: 200,
                triple_n: 60,
                pde_order: 60,
                count_n: 18,
                reach_n: 12,
                tables_n: 20,
                asym_n: 200,
                mc_reps: 1_000_000,
                mc_seeds: 100,
                mc_min_accept: 99,
            },
            Level::Quick => Params {
                law_n: 8,
                moments_n: 80,
                triple_n: 30,
                pde_order: 30,
                count_n: 14,
                reach_n: 10,
                tables_n: 20,
                asym_n: 200,
                mc_reps: 100_000,
                mc_seeds: 10,
                mc_min_accept: 9,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn outcome(
    name: &'static str,
    start: Instant,
    res: Result<std::result::Result<String, String>>,
) -> CheckOutcome {
    let (passed, detail) = match res {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, e.to_string()),
    };
    CheckOutcome {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

type Check = std::result::Result<String, String>;

fn law_equivalence(p: &Params) -> Result<Check> {
    let table = exactdist::dist_table(p.law_n)?;
    for n in 2..=p.law_n {
        let hist = counting::process_white_histogram(n)?;
        let total = BigInt::from(counting::process_count(n)?);
        let row = table.row(n)?;
        for (k, &c) in hist.iter().enumerate() {
            let brute = Rational::new(BigInt::from(c), total.clone());
            if brute != row.prob(k) {
                return Ok(Err(format!(
                    "n={n} k={k}: brute {brute} vs table {}",
                    row.prob(k)
                )));
            }
        }
    }
    Ok(Ok(format!("all processes for 2 ≤ n ≤ {} match", p.law_n)))
}

fn exact_moments(p: &Params) -> Result<Check> {
    let table = exactdist::dist_table(p.moments_n)?;
    for n in 3..=p.moments_n {
        let w = exactdist::moments_white(n, &table)?;
        let b = exactdist::moments_black(n, &table)?;
        let n_i = n as i64;
        if w.mean != rat(n_i, 3) || b.mean != rat(2 * n_i, 3) {
            return Ok(Err(format!("mean at n={n}: {} / {}", w.mean, b.mean)));
        }
        if n >= 6 && (w.variance != rat(2 * n_i, 45) || b.variance != w.variance) {
            return Ok(Err(format!("variance at n={n}: {}", w.variance)));
        }
    }
    Ok(Ok(format!(
        "mean n/3 on 3..={0}, variance 2n/45 on 6..={0}",
        p.moments_n
    )))
}

fn triple_oracle(p: &Params) -> Result<Check> {
    let table = exactdist::dist_table(p.triple_n)?;
    let ws = exactdist::pgf_sequence(p.triple_n)?;
    for n in 2..=p.triple_n {
        let via_r = exactdist::r_to_pgf(n)?;
        if ws[n - 2] != table.row(n)?.as_pgf() || via_r != ws[n - 2] {
            return Ok(Err(format!("routes disagree at n={n}")));
        }
    }
    Ok(Ok(format!(
        "pgf = table = r-route for 2 ≤ n ≤ {}",
        p.triple_n
    )))
}

fn pde_identity(p: &Params) -> Result<Check> {
    let res = exactdist::pde_residual(p.pde_order)?;
    match res.first_nonzero() {
        Some(m) if m < p.pde_order => Ok(Err(format!("residual nonzero at z^{m}"))),
        _ => Ok(Ok(format!(
            "residual vanishes through z^{}",
            p.pde_order - 1
        ))),
    }
}

fn closed_form() -> Result<Check> {
    let w = exactdist::truncated_w(SERIES_ORDER)?;
    let mut worst: f64 = 0.0;
    let mut worst_sym: f64 = 0.0;
    for &z in &Z_GRID {
        for &u in &U_GRID {
            let closed = exactdist::closed_form_eval(z, u, FALLBACK_TERMS)?;
            worst = worst.max((closed - w.partial_sum_f64(z, u)).abs());
            let sym = exactdist::closed_form_eval_symmetric(z, u, FALLBACK_TERMS)?;
            worst_sym = worst_sym.max((closed - sym).abs());
        }
    }
    let detail =
        format!("max |closed − series| = {worst:.2e}, max |coth − exp form| = {worst_sym:.2e}");
    Ok(
        if worst <= CLOSED_FORM_TOL && worst_sym <= SYMMETRIC_FORM_TOL {
            Ok(detail)
        } else {
            Err(detail)
        },
    )
}

#[allow(clippy::needless_range_loop)]
fn counting_oracle(p: &Params) -> Result<Check> {
    let coeffs = counting::necklace_count_coeffs(p.count_n)?;
    for n in 2..=p.count_n {
        let brute = counting::enumerate_valid(n)?.len();
        if coeffs[n] != BigUint::from(brute) {
            return Ok(Err(format!(
                "n={n}: series {} vs enumeration {brute}",
                coeffs[n]
            )));
        }
        if n <= p.reach_n && counting::reachable(n)? != counting::enumerate_valid(n)? {
            return Ok(Err(format!(
                "reachable({n}) differs from enumerate_valid({n})"
            )));
        }
    }
    Ok(Ok(format!(
        "series = enumeration for n ≤ {}, reachable = enumeration for n ≤ {}",
        p.count_n, p.reach_n
    )))
}

/// Fitted constant and trend test for `|exact − φ^n/n|·n/φ^{n/2}`: the
/// maximum over the upper half of the range must not exceed the maximum
/// over the lower half.
#[allow(clippy::needless_range_loop)]
pub fn asymptotic_bound(n_max: usize) -> Result<(f64, f64, f64)> {
    let coeffs = counting::necklace_count_coeffs(n_max)?;
    let mid = (20 + n_max) / 2;
    let (mut lower, mut upper): (f64, f64) = (0.0, 0.0);
    for n in 20..=n_max {
        let e = counting::asymptotic_report(n, &coeffs[n])?.normalized_error;
        if n <= mid {
            lower = lower.max(e);
        } else {
            upper = upper.max(e);
        }
    }
    Ok((lower.max(upper), lower, upper))
}

fn asymptotic(p: &Params) -> Result<Check> {
    let (fitted, lower, upper) = asymptotic_bound(p.asym_n)?;
    let detail =
        format!("fitted C = {fitted:.4}; max lower half {lower:.4}, max upper half {upper:.4}");
    Ok(if fitted.is_finite() && upper <= lower {
        Ok(detail)
    } else {
        Err(detail)
    })
}

/// Kolmogorov distances at [`CLT_SIZES`] and the fitted `C` in `C·n^{-1/2}`
/// (geometric mean of `d_n·√n`).
pub fn clt_distances() -> Result<(Vec<f64>, f64)> {
    let ds = CLT_SIZES
        .iter()
        .map(|&n| exactdist::exact_row(n)?.normal_distance())
        .collect::<Result<Vec<_>>>()?;
    let log_c = CLT_SIZES
        .iter()
        .zip(&ds)
        .map(|(&n, &d)| (d * (n as f64).sqrt()).ln())
        .sum::<f64>()
        / ds.len() as f64;
    Ok((ds, log_c.exp()))
}

fn clt() -> Result<Check> {
    let (ds, c) = clt_distances()?;
    let positive = ds.iter().all(|&d| d > 0.0);
    let decreasing = ds.windows(2).all(|w| w[1] < w[0]);
    let in_envelope = CLT_SIZES.iter().zip(&ds).all(|(&n, &d)| {
        let scaled = d * (n as f64).sqrt();
        scaled <= CLT_ENVELOPE_FACTOR * c && scaled >= c / CLT_ENVELOPE_FACTOR
    });
    let detail = format!("d = {ds:.5?} at n = {CLT_SIZES:?}, C = {c:.4}");
    Ok(if positive && decreasing && in_envelope {
        Ok(detail)
    } else {
        Err(detail)
    })
}

fn monte_carlo(p: &Params) -> Result<Check> {
    let table = exactdist::dist_table(6)?;
    let base = montecarlo::run(&SimConfig::new(6, p.mc_reps, 2024))?;
    let tol = MC_MEAN_SIGMAS * ((2.0 * 6.0 / 45.0) / p.mc_reps as f64).sqrt();
    if (base.mean - 2.0).abs() > tol {
        return Ok(Err(format!("mean {} outside 2 ± {tol:.2e}", base.mean)));
    }
    let accepted = (0..p.mc_seeds)
        .map(|seed| {
            let s = montecarlo::run(&SimConfig::new(6, p.mc_reps, seed))?;
            Ok(!montecarlo::chi_square(&s, &table)?.rejects_at_999())
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&ok| ok)
        .count() as u64;
    let detail = format!(
        "mean {:.6} (tol {tol:.2e}); chi-square accepted in {accepted}/{} seeds",
        base.mean, p.mc_seeds
    );
    Ok(if accepted >= p.mc_min_accept {
        Ok(detail)
    } else {
        Err(detail)
    })
}

fn integer_tables(p: &Params) -> Result<Check> {
    let counts = exactdist::process_counts(p.tables_n)?;
    let table = exactdist::dist_table(p.tables_n)?;
    for n in 2..=p.tables_n {
        let fact = exactdist::factorial(n - 1);
        let row = counts.row(n)?;
        if row.iter().sum::<BigUint>() != fact {
            return Ok(Err(format!("row {n} does not sum to (n−1)!")));
        }
        let fact_q = Rational::from_integer(BigInt::from(fact));
        for (k, c) in row.iter().enumerate() {
            if table.row(n)?.prob(k) * &fact_q != Rational::from_integer(BigInt::from(c.clone())) {
                return Ok(Err(format!("c[{n},{k}] ≠ w[{n},{k}]·(n−1)!")));
            }
        }
    }
    Ok(Ok(format!(
        "c = w·(n−1)! and Σc = (n−1)! for n ≤ {}",
        p.tables_n
    )))
}

/// Runs every check at `level`, in a fixed order.
pub fn run_checks(level: Level) -> Vec<CheckOutcome> {
    let p = level.params();
    let mut out = Vec::new();
    macro_rules! check {
        ($name:expr, $body:expr) => {{
            let start = Instant::now();
            out.push(outcome($name, start, $body));
        }};
    }
    check!("law-equivalence", law_equivalence(&p));
    check!("exact-moments", exact_moments(&p));
    check!("triple-oracle", triple_oracle(&p));
    check!("pde-identity", pde_identity(&p));
    check!("closed-form", closed_form());
    check!("counting-oracle", counting_oracle(&p));
    check!("asymptotic-bound", asymptotic(&p));
    check!("clt-distance", clt());
    check!("monte-carlo", monte_carlo(&p));
    check!("integer-tables", integer_tables(&p));
    out
}

/// Check name → pass flag, for compact reporting.
pub fn summary(outcomes: &[CheckOutcome]) -> BTreeMap<&'static str, bool> {
    outcomes.iter().map(|o| (o.name, o.passed)).collect()
}
