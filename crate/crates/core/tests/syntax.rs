mod common;

use common::checks;
use gts_core::syntax::{parse_formula, print_formula, render_natural_language};

#[test]
fn printed_formulas_parse_back() {
    checks::parser_round_trip(9, 3000).assert_ok();
}

#[test]
fn natural_language_replaces_truth_with_verification() {
    let vocab = common::vocabulary();
    let f = parse_formula("claim C0. (exists x. P(x) | not C0)", &vocab).unwrap();
    assert_eq!(
        render_natural_language(&f),
        "it is possible to verify the claim C0 which states that \
         there exists an x such that P(x) or it is falsifiable that C0"
    );
    assert_eq!(print_formula(&f), "claim C0. (exists x. P(x) | not C0)");
    let nested = parse_formula("((P(x) & P(y)) | not P(z))", &vocab).unwrap();
    assert_eq!(
        render_natural_language(&nested),
        "(P(x) and P(y)) or it is falsifiable that P(z)"
    );
}
