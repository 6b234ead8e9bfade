use necklace_core::exactdist;
use necklace_core::montecarlo::{self, SimConfig, SimPath};
use necklace_core::series::to_f64;

#[test]
fn empirical_frequencies_match_exact_law() {
    let reps = 1_000_000u64;
    let table = exactdist::dist_table(10).unwrap();
    for n in 4..=10 {
        let s = montecarlo::run(&SimConfig::new(n, reps, 11 + n as u64)).unwrap();
        for (k, p) in table.row(n).unwrap().support() {
            let p = to_f64(p);
            let sigma = (p * (1.0 - p) / reps as f64).sqrt();
            let got = s.fraction(k);
            assert!((got - p).abs() <= 4.0 * sigma, "n={n} k={k}: {got} vs {p}");
        }
    }
}

#[test]
fn both_paths_agree_in_law() {
    let table = exactdist::dist_table(30).unwrap();
    for path in [SimPath::Beads, SimPath::WhiteCount] {
        let s = montecarlo::run(&SimConfig::new(30, 200_000, 5).with_path(path)).unwrap();
        assert!(
            !montecarlo::chi_square(&s, &table).unwrap().rejects_at_999(),
            "{path:?}"
        );
    }
}

#[test]
fn empirical_normal_distance_shrinks() {
    let d = |n| {
        let s =
            montecarlo::run(&SimConfig::new(n, 100_000, 3).with_path(SimPath::WhiteCount)).unwrap();
        montecarlo::empirical_normal_distance(&s).unwrap()
    };
    let (d50, d800) = (d(50), d(800));
    assert!(d800 < d50, "{d800} !< {d50}");
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = SimConfig::new(12, 3 * montecarlo::CHUNK + 17, 99);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| montecarlo::run(&cfg)).unwrap();
    let b = four.install(|| montecarlo::run(&cfg)).unwrap();
    assert_eq!(a, b);
}
