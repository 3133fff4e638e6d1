//! Exactness sweeps for the minimal-time family and the end-started
//! variants: observed firing times must equal the model's bound, cell for
//! cell and step for step.

use fssp_core::embed::{LineRelay, TorusRelay};
use fssp_core::machines::{FourEnd, MinLine, MinSquare, RingMin, SquareOfRingsMin, TwoEndLine};
use fssp_core::verify::{check_sync, lower_bound, sweep};
use fssp_core::ModelKind;

#[test]
fn min_line_fires_at_2n_minus_1() {
    let report = sweep("line/min", 2..=128, MinLine::build).unwrap();
    for o in report.failures() {
        panic!("line/min failed: {o:?}");
    }
    assert!(report
        .outcomes
        .iter()
        .all(|o| o.observed == Some(lower_bound(ModelKind::Line, o.n as u64))));
}

#[test]
fn min_line_example_n8() {
    let b = MinLine::build(8).unwrap();
    let out = check_sync(&b);
    assert_eq!(out.observed, Some(15));
    assert!(out.pass);
}

#[test]
fn two_end_line_fires_at_n() {
    let report = sweep("line/two-end", 2..=128, |n| TwoEndLine::build(n, 2)).unwrap();
    for o in report.failures() {
        panic!("line/two-end failed: {o:?}");
    }
}

#[test]
fn two_end_rejects_one_bit_variant() {
    assert!(TwoEndLine::build(9, 1).is_err());
}

#[test]
fn ring_fires_at_n_plus_1() {
    let report = sweep("ring/min", 3..=128, |n| RingMin::build(n, 2)).unwrap();
    for o in report.failures() {
        panic!("ring/min failed: {o:?}");
    }
}

#[test]
fn four_end_square_fires_at_n() {
    let report = sweep("square/four-end", 2..=48, |n| FourEnd::build(n, 2)).unwrap();
    for o in report.failures() {
        panic!("square/four-end failed: {o:?}");
    }
}

#[test]
fn min_square_fires_at_2n_minus_1() {
    let report = sweep("square/min", 2..=48, MinSquare::build).unwrap();
    for o in report.failures() {
        panic!("square/min failed: {o:?}");
    }
}

#[test]
fn square_of_rings_fires_at_n_plus_1() {
    let report = sweep("square-of-rings/min", 2..=48, |n| SquareOfRingsMin::build(n, 2)).unwrap();
    for o in report.failures() {
        panic!("square-of-rings/min failed: {o:?}");
    }
}

#[test]
fn oring_via_two_end_relay_fires_at_2n() {
    let report = sweep("oring/min", 3..=128, |n| {
        LineRelay::build_oring(&TwoEndLine::build(n, 2)?, "oring/min")
    })
    .unwrap();
    for o in report.failures() {
        panic!("oring/min failed: {o:?}");
    }
}

#[test]
fn square_of_orings_fires_at_3n_minus_1() {
    let report = sweep("square-of-orings/min", 2..=48, |n| {
        TorusRelay::build(&FourEnd::build(n, 2)?, true, "square-of-orings/min")
    })
    .unwrap();
    for o in report.failures() {
        panic!("square-of-orings/min failed: {o:?}");
    }
}

#[test]
fn ring_relay_runs_line_in_2t_minus_1() {
    let report = sweep("ring/double-line", 3..=64, |n| {
        LineRelay::build_ring(&MinLine::build(n)?, "ring/double-line")
    })
    .unwrap();
    for o in report.failures() {
        panic!("ring relay failed: {o:?}");
    }
    // 2 * (2n - 1) - 1
    assert!(report.outcomes.iter().all(|o| o.observed == Some(4 * o.n as u64 - 3)));
}
