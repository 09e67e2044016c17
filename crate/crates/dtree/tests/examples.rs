//! Worked examples with known invariants, and round-trips on the fixture corpus.

mod common;

fn assert_ok(r: Result<(), String>) {
    if let Err(msg) = r {
        panic!("{msg}");
    }
}

#[test]
fn small_tree_determinant_and_central_set() {
    assert_ok(common::picture1());
}

#[test]
fn edge_splitting_of_degree_three() {
    assert_ok(common::split_example());
}

#[test]
fn en_splitting_of_degree_two_and_type_zero() {
    assert_ok(common::ensplit_example());
}

#[test]
fn decomposition_with_unit_arrows() {
    assert_ok(common::decomposition_unit_example());
}

#[test]
fn decomposition_with_doubled_arrows() {
    assert_ok(common::decomposition_example());
}

#[test]
fn delta_decomposition_with_pairing_120() {
    assert_ok(common::delta_decomposition_example());
}

#[test]
fn subtrees_spanned_by_arrow_sets() {
    assert_ok(common::subtree_example());
}

#[test]
fn genus_formula_on_unit_example() {
    assert_ok(common::genus_formula_example());
}

#[test]
fn fixtures_round_trip_through_text() {
    assert_ok(common::fixture_round_trips());
}

#[test]
fn edz_contracts_back_on_fixtures() {
    assert_ok(common::fixture_edz_round_trips());
}
