mod common;

use common::checks;

#[test]
fn mutation_sequences_preserve_invariants() {
    checks::mutation_invariants(6, 500).assert_ok();
}

#[test]
fn encoding_is_deterministic_and_injective() {
    checks::encoding_determinism(8, 1000).assert_ok();
}
