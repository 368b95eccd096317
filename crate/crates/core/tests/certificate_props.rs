use bmv_sohs::certificate::{build, class_tallies, to_v2_form, word_count_check, Parity};
use bmv_sohs::cyclic::{canonical_rotation, class_decomposition, cyc_equivalent, squared_order};
use bmv_sohs::ncpoly::s_poly;
use bmv_sohs::verifier::{numeric_spotcheck, verify_symbolic};

#[test]
fn every_certificate_up_to_32_verifies() {
    for m in 5..=32 {
        let c = build(m).unwrap();
        let target = s_poly(m, 4).unwrap().substitute_squares();
        assert!(cyc_equivalent(&c.expand(), &target), "m={m}");
        let r = verify_symbolic(&c);
        assert!(r.passed && r.failing_classes.is_empty(), "m={m}");
    }
}

#[test]
fn odd_expansions_have_even_runs_and_full_order() {
    for m in (5..=21).step_by(2) {
        for w in build(m).unwrap().expand().words() {
            // runs are read cyclically: the least rotation starts at a run boundary
            let c = canonical_rotation(w).unwrap();
            assert!(c.canonical().runs().iter().all(|&(_, n)| n % 2 == 0), "m={m} {w}");
            assert_eq!(squared_order(w), Some(m), "m={m} {w}");
        }
    }
}

#[test]
fn word_counts_hold_for_all_m() {
    for m in 5..=24 {
        let r = word_count_check(&build(m).unwrap());
        assert!(r.passed, "m={m}: {r:?}");
    }
}

#[test]
fn even_class_sums_equal_order() {
    for m in (6..=20).step_by(2) {
        let c = build(m).unwrap();
        assert_eq!(c.parity(), Parity::Even);
        for (_, t) in class_tallies(&c) {
            assert_eq!(t.coefficient_sum, t.order.to_string(), "m={m} {}", t.class);
            assert!(t.words <= 2);
        }
    }
}

#[test]
fn v2_form_keeps_class_decomposition() {
    for m in (5..=17).step_by(2) {
        let c = build(m).unwrap();
        let v2 = to_v2_form(&c).unwrap();
        assert_eq!(class_decomposition(&v2.expand()), class_decomposition(&c.expand()), "m={m}");
    }
}

#[test]
fn json_round_trip_for_many_m() {
    for m in 5..=14 {
        let c = build(m).unwrap();
        let s = c.to_json();
        let back = bmv_sohs::certificate::Certificate::from_json(&s).unwrap();
        assert_eq!(back, c);
    }
}

#[test]
fn numeric_reports_are_reproducible() {
    let a = numeric_spotcheck(9, 4, 20, 3, 11).unwrap();
    let b = numeric_spotcheck(9, 4, 20, 3, 11).unwrap();
    assert_eq!(a, b);
    assert!(a.passed);
    let s = a.to_json();
    let back: bmv_sohs::verifier::VerificationReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, a);
}
