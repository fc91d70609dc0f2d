mod common;

use common::checks;

#[test]
fn compositional_and_game_verdicts_coincide_on_first_order_formulas() {
    checks::compositional_matches_game(1, 1500).assert_ok();
}

#[test]
fn truth_teller_and_liar_are_indeterminate() {
    checks::self_reference_is_indeterminate().assert_ok();
}

#[test]
fn weak_negation_and_determinacy_table() {
    let report = checks::operator_truth_table();
    report.assert_ok();
    assert_eq!(report.checked, 9);
}
