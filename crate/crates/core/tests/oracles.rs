use necklace_core::counting;
use necklace_core::exactdist;
use necklace_core::series::rat;

#[test]
fn reachable_equals_valid() {
    for n in 2..=12 {
        assert_eq!(
            counting::reachable(n).unwrap(),
            counting::enumerate_valid(n).unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn alpha_route_matches_pgf() {
    let ws = exactdist::pgf_sequence(60).unwrap();
    for n in 2..=60 {
        assert_eq!(exactdist::r_to_pgf(n).unwrap(), ws[n - 2], "n={n}");
    }
}

#[test]
fn small_rows() {
    let t = exactdist::dist_table(6).unwrap();
    assert_eq!(t.row(4).unwrap().prob(1), rat(2, 3));
    assert_eq!(
        t.row(6).unwrap().probs(),
        &[rat(0, 1), rat(2, 15), rat(11, 15), rat(2, 15)]
    );
}

#[test]
fn counts_by_filter_and_by_composition_agree() {
    for n in 2..=16 {
        assert_eq!(
            counting::enumerate_valid(n).unwrap(),
            counting::enumerate_valid_by_filter(n).unwrap()
        );
    }
}

#[test]
fn out_of_range_inputs_are_errors() {
    assert!(exactdist::dist_table(1).is_err());
    assert!(counting::enumerate_valid_by_filter(counting::FILTER_MAX + 1).is_err());
    assert!(counting::process_white_histogram(counting::PROCESS_ENUM_MAX + 1).is_err());
    assert!(exactdist::closed_form_eval(0.9, 0.5, 8).is_err());
}
