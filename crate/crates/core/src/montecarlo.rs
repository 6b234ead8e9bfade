//! Seeded simulation of the necklace process and goodness-of-fit checks
//! against the exact law.
//!
//! # Random streams
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`). Replicates are cut
//! into consecutive chunks of [`CHUNK`] replicates; chunk `c` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` with its stream set to `c`. The
//! summary therefore depends only on `(n, replications, seed, path)`, not on
//! the number of worker threads.
//!
//! Gap indices are drawn with `Rng::random_range`, which uses widening
//! multiplication with rejection of the biased zone, so every gap is exactly
//! equally likely.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::exactdist::{lattice_normal_distance, DistRow, DistTable};
use crate::necklace::Necklace;
use crate::series::to_f64;

/// Name recorded in every summary.
pub const GENERATOR: &str = "ChaCha8Rng/seed_from_u64/stream=chunk";

/// Replicates per random substream.
pub const CHUNK: u64 = 1 << 14;

/// Minimum expected count per chi-square cell after merging.
pub const MIN_EXPECTED: f64 = 5.0;

/// How a replicate is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimPath {
    /// Full bead sequence with [`Necklace`] insertions.
    #[default]
    Beads,
    /// Only `(size, whites)`: a uniform gap yields a white bead iff it is
    /// one of the `size − 2·whites` gaps between two blacks.
    WhiteCount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub n: usize,
    pub replications: u64,
    pub seed: u64,
    pub path: SimPath,
}

impl SimConfig {
    pub fn new(n: usize, replications: u64, seed: u64) -> Self {
        SimConfig {
            n,
            replications,
            seed,
            path: SimPath::Beads,
        }
    }

    pub fn with_path(mut self, path: SimPath) -> Self {
        self.path = path;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInput(format!(
                "n must be ≥ 2, got {}",
                self.n
            )));
        }
        if self.replications < 1 {
            return Err(Error::InvalidInput("replications must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// Grows the start necklace to size `n` with uniformly chosen gaps.
pub fn simulate_one<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Necklace {
    let mut x = Necklace::start();
    while x.size() < n {
        let g = rng.random_range(0..x.size());
        x.insert_in_place(g);
    }
    x
}

/// White count of a size-`n` necklace, tracking only `(size, whites)`.
pub fn simulate_white_count<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    let mut whites = 1usize;
    for size in 2..n {
        if rng.random_range(0..size) < size - 2 * whites {
            whites += 1;
        }
    }
    whites
}

/// Empirical law of `W_n` from one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub n: usize,
    pub replications: u64,
    pub seed: u64,
    pub generator: String,
    pub histogram: BTreeMap<usize, u64>,
    pub mean: f64,
    /// Unbiased sample variance; zero for a single replicate.
    pub variance: f64,
}

impl SimSummary {
    fn from_histogram(n: usize, seed: u64, histogram: BTreeMap<usize, u64>) -> Self {
        let reps: u64 = histogram.values().sum();
        let (s1, s2) = histogram.iter().fold((0u128, 0u128), |(a, b), (&k, &c)| {
            let k = k as u128;
            (a + k * c as u128, b + k * k * c as u128)
        });
        let r = reps as f64;
        let mean = s1 as f64 / r;
        let variance = if reps > 1 {
            // r·Σ(k − mean)² = r·s2 − s1², exact in integers
            let scaled = reps as u128 * s2 - s1 * s1;
            scaled as f64 / (r * (r - 1.0))
        } else {
            0.0
        };
        SimSummary {
            n,
            replications: reps,
            seed,
            generator: GENERATOR.to_string(),
            histogram,
            mean,
            variance,
        }
    }

    /// Pools two runs at the same size. The result keeps `self.seed`.
    pub fn merge(&self, other: &SimSummary) -> Result<SimSummary> {
        if self.n != other.n {
            return Err(Error::InvalidInput(format!(
                "cannot merge summaries for n={} and n={}",
                self.n, other.n
            )));
        }
        let mut hist = self.histogram.clone();
        for (&k, &c) in &other.histogram {
            *hist.entry(k).or_insert(0) += c;
        }
        Ok(SimSummary::from_histogram(self.n, self.seed, hist))
    }

    pub fn fraction(&self, k: usize) -> f64 {
        self.histogram.get(&k).copied().unwrap_or(0) as f64 / self.replications as f64
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("k,count\n");
        for (k, c) in &self.histogram {
            out.push_str(&format!("{k},{c}\n"));
        }
        out
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn run_chunk(cfg: &SimConfig, chunk: u64) -> Vec<u64> {
    let mut rng = chunk_rng(cfg.seed, chunk);
    let start = chunk * CHUNK;
    let len = CHUNK.min(cfg.replications - start);
    let mut hist = vec![0u64; cfg.n / 2 + 1];
    for _ in 0..len {
        let k = match cfg.path {
            SimPath::Beads => simulate_one(cfg.n, &mut rng).white_count(),
            SimPath::WhiteCount => simulate_white_count(cfg.n, &mut rng),
        };
        hist[k] += 1;
    }
    hist
}

/// Runs `config.replications` independent processes in parallel.
pub fn run(config: &SimConfig) -> Result<SimSummary> {
    config.validate()?;
    let chunks = config.replications.div_ceil(CHUNK);
    let hist = (0..chunks)
        .into_par_iter()
        .map(|c| run_chunk(config, c))
        .reduce(
            || vec![0u64; config.n / 2 + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let histogram = hist
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect();
    Ok(SimSummary::from_histogram(config.n, config.seed, histogram))
}

/// Pearson chi-square result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    /// 0.999 quantile of the chi-square law with `dof` degrees of freedom.
    pub critical_999: f64,
    pub p_value: f64,
    /// Merged cells as inclusive `k` ranges.
    pub cells: Vec<(usize, usize)>,
}

impl ChiSquare {
    pub fn rejects_at_999(&self) -> bool {
        self.statistic > self.critical_999
    }
}

/// Chi-square of the histogram against the exact row for `summary.n`.
pub fn chi_square(summary: &SimSummary, table: &DistTable) -> Result<ChiSquare> {
    chi_square_against(summary, table.row(summary.n)?)
}

/// Chi-square of the histogram against an arbitrary exact row.
///
/// Cells are scanned in increasing `k` and merged until each has expected
/// count ≥ [`MIN_EXPECTED`]; a short tail is folded into the last cell.
pub fn chi_square_against(summary: &SimSummary, row: &DistRow) -> Result<ChiSquare> {
    let reps = summary.replications as f64;
    let k_max = (summary.n / 2).max(row.n() / 2);
    // (k_lo, k_hi, observed, expected)
    let mut cells: Vec<(usize, usize, f64, f64)> = Vec::new();
    let mut open: Option<(usize, f64, f64)> = None;
    for k in 1..=k_max {
        let obs = summary.histogram.get(&k).copied().unwrap_or(0) as f64;
        let exp = reps * to_f64(&row.prob(k));
        let (lo, o, e) = open.take().unwrap_or((k, 0.0, 0.0));
        let (o, e) = (o + obs, e + exp);
        if e >= MIN_EXPECTED {
            cells.push((lo, k, o, e));
        } else {
            open = Some((lo, o, e));
        }
    }
    if let Some((_, o, e)) = open {
        match cells.last_mut() {
            Some(last) => {
                last.1 = k_max;
                last.2 += o;
                last.3 += e;
            }
            None => cells.push((1, k_max, o, e)),
        }
    }
    if cells.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "chi-square needs ≥ 2 cells with expected count ≥ {MIN_EXPECTED}; \
             {} replications give {}",
            summary.replications,
            cells.len()
        )));
    }
    let statistic = cells
        .iter()
        .map(|&(_, _, o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = cells.len() - 1;
    let law = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ChiSquare {
        statistic,
        dof,
        critical_999: law.inverse_cdf(0.999),
        p_value: 1.0 - law.cdf(statistic),
        cells: cells.iter().map(|&(lo, hi, _, _)| (lo, hi)).collect(),
    })
}

/// Kolmogorov distance of the standardised empirical law to `Φ`.
pub fn empirical_normal_distance(summary: &SimSummary) -> Result<f64> {
    if summary.n < 6 {
        return Err(Error::OutOfRange {
            index: summary.n,
            limit: 6,
        });
    }
    let reps = summary.replications as f64;
    Ok(lattice_normal_distance(
        summary.n,
        summary
            .histogram
            .iter()
            .map(|(&k, &c)| (k, c as f64 / reps)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactdist::dist_table;

    #[test]
    fn tiny_sizes() {
        let mut rng = chunk_rng(1, 0);
        for _ in 0..100 {
            assert_eq!(simulate_one(2, &mut rng), Necklace::start());
            assert_eq!(simulate_one(3, &mut rng).white_count(), 1);
            assert_eq!(simulate_white_count(3, &mut rng), 1);
        }
    }

    #[test]
    fn validity_of_samples() {
        let mut rng = chunk_rng(9, 3);
        for n in [6usize, 17, 40] {
            for _ in 0..200 {
                let x = simulate_one(n, &mut rng);
                assert!(x.is_valid());
                assert_eq!(x.size(), n);
                let k = x.white_count();
                assert!((1..=n / 2).contains(&k));
            }
        }
    }

    #[test]
    fn config_errors() {
        assert!(run(&SimConfig::new(1, 10, 0)).is_err());
        assert!(run(&SimConfig::new(5, 0, 0)).is_err());
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let cfg = SimConfig::new(9, 50_000, 42);
        let a = run(&cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run(&cfg).unwrap());
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = run(&SimConfig::new(9, 50_000, 43)).unwrap();
        assert_ne!(a.histogram, c.histogram);
        assert_eq!(a.histogram.values().sum::<u64>(), 50_000);
    }

    #[test]
    fn n4_fractions_within_three_sigma() {
        let s = run(&SimConfig::new(4, 200_000, 7)).unwrap();
        for (k, p) in [(1usize, 2.0f64 / 3.0), (2, 1.0 / 3.0)] {
            let sd = (p * (1.0 - p) / 200_000.0).sqrt();
            assert!(
                (s.fraction(k) - p).abs() < 3.0 * sd,
                "k={k} {}",
                s.fraction(k)
            );
        }
    }

    #[test]
    fn chi_square_zero_on_exact_expectation() {
        let t = dist_table(6).unwrap();
        // w_6 = {1: 2/15, 2: 11/15, 3: 2/15}; 1500 replicates hit it exactly
        let row = t.row(6).unwrap();
        let reps = 1500u64;
        let histogram = row
            .support()
            .map(|(k, p)| (k, (to_f64(p) * reps as f64).round() as u64))
            .collect();
        let s = SimSummary::from_histogram(6, 0, histogram);
        let chi = chi_square(&s, &t).unwrap();
        assert!(chi.statistic.abs() < 1e-12);
        assert_eq!(chi.dof, 2);
    }

    #[test]
    fn chi_square_merges_sparse_cells() {
        let t = dist_table(30).unwrap();
        let s = run(&SimConfig::new(30, 200, 5)).unwrap();
        let chi = chi_square(&s, &t).unwrap();
        assert_eq!(chi.dof + 1, chi.cells.len());
        let covered: usize = chi.cells.iter().map(|(a, b)| b - a + 1).sum();
        assert_eq!(covered, 15);
        let few = run(&SimConfig::new(30, 3, 5)).unwrap();
        assert!(chi_square(&few, &t).is_err());
    }

    #[test]
    fn chi_square_negative_control() {
        let t = dist_table(11).unwrap();
        let s = run(&SimConfig::new(10, 100_000, 3)).unwrap();
        let chi = chi_square_against(&s, t.row(11).unwrap()).unwrap();
        assert!(chi.rejects_at_999(), "{chi:?}");
    }

    #[test]
    fn fast_path_matches_exact_law() {
        let t = dist_table(12).unwrap();
        let cfg = SimConfig::new(12, 200_000, 11).with_path(SimPath::WhiteCount);
        let s = run(&cfg).unwrap();
        assert!(!chi_square(&s, &t).unwrap().rejects_at_999());
    }

    #[test]
    fn merge_pools_histograms() {
        let a = run(&SimConfig::new(7, 1000, 1)).unwrap();
        let b = run(&SimConfig::new(7, 500, 2)).unwrap();
        let m = a.merge(&b).unwrap();
        assert_eq!(m.replications, 1500);
        for k in 1..=3 {
            assert_eq!(
                m.histogram.get(&k).copied().unwrap_or(0),
                a.histogram.get(&k).copied().unwrap_or(0)
                    + b.histogram.get(&k).copied().unwrap_or(0)
            );
        }
        assert!(a.merge(&run(&SimConfig::new(8, 10, 1)).unwrap()).is_err());
    }

    #[test]
    fn n6_distance_dominated_by_lattice_gap() {
        let s = run(&SimConfig::new(6, 100_000, 8)).unwrap();
        let d = empirical_normal_distance(&s).unwrap();
        assert!(d > 0.05 && d <= 1.0, "{d}");
        let small = run(&SimConfig::new(5, 100, 8)).unwrap();
        assert!(empirical_normal_distance(&small).is_err());
    }
}
