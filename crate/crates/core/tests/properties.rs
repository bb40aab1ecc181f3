mod common;

use common::props::{self, CASES};

fn check(result: Result<(), String>) {
    if let Err(e) = result {
        panic!("{e}");
    }
}

#[test]
fn segment_containment() {
    check(props::check_segment_containment(CASES));
}

#[test]
fn container_closure() {
    check(props::check_container_closure(CASES));
}

#[test]
fn coreference_matches_brute_force() {
    check(props::check_coreference(CASES));
}

#[test]
fn trig_round_trip() {
    check(props::check_trig_round_trip(CASES));
}

#[test]
fn partition_holds_after_every_emission() {
    check(props::check_partition_invariant(CASES));
}

#[test]
fn store_grows_monotonically() {
    check(props::check_monotonic_growth(CASES));
}

#[test]
fn resolver_is_first_match_and_order_free_for_unique_names() {
    check(props::check_resolver_permutation(CASES));
}
