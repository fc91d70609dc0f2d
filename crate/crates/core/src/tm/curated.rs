//! Hand-built (machine, formula) pairs that agree on every model up to a
//! given size. Each machine reads the tape produced by
//! [`encode_model`](crate::structure::encode_model), which starts with
//! `n=<size>;`.

use super::{Direction, TuringMachine};
use crate::structure::{PartialStructure, RelStatus};
use crate::syntax::{parse_formula, Formula, Vocabulary};

/// Symbols that can occur in an encoding over single-letter names.
pub const ENCODING_SYMBOLS: &str =
    "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ;:+-?=,";

pub struct CuratedPair {
    pub name: &'static str,
    /// Why machine and formula agree.
    pub argument: &'static str,
    pub machine: TuringMachine,
    pub vocabulary: Vocabulary,
    pub formula: Formula,
}

impl CuratedPair {
    /// All models of each size up to `max_size`; for the unary relation
    /// pair, every assignment of +/-/? to each element.
    pub fn models(&self, max_size: usize) -> Vec<PartialStructure> {
        let mut out = Vec::new();
        for n in 0..=max_size {
            let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let base = PartialStructure::new(&self.vocabulary, &refs).expect("fresh names");
            if self.vocabulary.relation_arity("P").is_none() {
                out.push(base);
                continue;
            }
            let statuses = [
                RelStatus::Positive,
                RelStatus::Negative,
                RelStatus::Undefined,
            ];
            for code in 0..3usize.pow(n as u32) {
                let mut s = base.clone();
                let mut c = code;
                for e in base.domain() {
                    match statuses[c % 3] {
                        RelStatus::Positive => s.declare_tuple("P", vec![e], true),
                        RelStatus::Negative => s.declare_tuple("P", vec![e], false),
                        RelStatus::Undefined => Ok(()),
                    }
                    .expect("single declaration");
                    c /= 3;
                }
                out.push(s);
            }
        }
        out
    }
}

fn machine(states: &[&str]) -> TuringMachine {
    TuringMachine::new(states, "q0", "acc", "rej").expect("valid halting states")
}

fn others(exclude: &str) -> String {
    ENCODING_SYMBOLS
        .chars()
        .filter(|c| !exclude.contains(*c))
        .collect()
}

/// Reads `n=` and accepts iff the size is exactly `0`.
pub fn empty_domain() -> CuratedPair {
    let mut tm = machine(&["q0", "q1", "q2", "q3", "acc", "rej"]);
    tm.add("q0", 'n', "q1", 'n', Direction::R).unwrap();
    tm.add("q1", '=', "q2", '=', Direction::R).unwrap();
    tm.add("q2", '0', "q3", '0', Direction::R).unwrap();
    tm.add_many("q2", &others("0"), "rej", true, Direction::R)
        .unwrap();
    tm.add("q3", ';', "acc", ';', Direction::R).unwrap();
    tm.add_many("q3", &others(";"), "rej", true, Direction::R)
        .unwrap();
    CuratedPair {
        name: "empty-domain",
        argument: "not flips the roles, so Abelard must pick a witness for x = x; he \
                   can iff the domain has an element, and the machine accepts iff the \
                   size field is 0",
        machine: tm,
        vocabulary: Vocabulary::new(),
        formula: parse_formula("not exists x. x = x", &Vocabulary::new()).unwrap(),
    }
}

/// Rejects in its first step.
pub fn reject_all() -> CuratedPair {
    let mut tm = machine(&["q0", "acc", "rej"]);
    tm.add_many("q0", ENCODING_SYMBOLS, "rej", true, Direction::R)
        .unwrap();
    CuratedPair {
        name: "reject-all",
        argument: "every witness makes x = x true, so after not the atom favours \
                   Abelard; on the empty domain Eloise has no witness at all",
        machine: tm,
        vocabulary: Vocabulary::new(),
        formula: parse_formula("exists x. not x = x", &Vocabulary::new()).unwrap(),
    }
}

/// Steps right onto `=` and back onto `n` forever.
pub fn in_place_looper() -> CuratedPair {
    let mut tm = machine(&["q0", "q1", "acc", "rej"]);
    tm.add("q0", 'n', "q1", 'n', Direction::R).unwrap();
    tm.add("q1", '=', "q0", '=', Direction::L).unwrap();
    CuratedPair {
        name: "truth-teller",
        argument: "the claim atom jumps back to its own binder, so every play is \
                   infinite and neither player wins; the machine revisits its start \
                   configuration after two steps",
        machine: tm,
        vocabulary: Vocabulary::new(),
        formula: parse_formula("claim C0. C0", &Vocabulary::new()).unwrap(),
    }
}

/// Accepts iff the size field is not `0` or `1`.
pub fn at_least_two() -> CuratedPair {
    let mut tm = machine(&["q0", "q1", "q2", "q3", "acc", "rej"]);
    tm.add("q0", 'n', "q1", 'n', Direction::R).unwrap();
    tm.add("q1", '=', "q2", '=', Direction::R).unwrap();
    tm.add_many("q2", "01", "q3", true, Direction::R).unwrap();
    tm.add_many("q2", "23456789", "acc", true, Direction::R)
        .unwrap();
    tm.add("q3", ';', "rej", ';', Direction::R).unwrap();
    tm.add_many("q3", "0123456789", "acc", true, Direction::R)
        .unwrap();
    CuratedPair {
        name: "at-least-two",
        argument: "Eloise needs two distinct witnesses, which exist iff the domain has \
                   two or more elements; a size field starting with 0 or 1 followed by \
                   ; is exactly size 0 or 1",
        machine: tm,
        vocabulary: Vocabulary::new(),
        formula: parse_formula("exists x. exists y. not x = y", &Vocabulary::new()).unwrap(),
    }
}

/// Scans the status string of the unary relation `P`: accepts on `+`,
/// rejects when every status is `-`, and loops in place at the closing `;`
/// when some status was `?`.
pub fn unary_trichotomy() -> CuratedPair {
    let mut tm = machine(&["q0", "q1", "q2", "q3", "loop", "back", "acc", "rej"]);
    tm.add_many("q0", &others(":"), "q0", true, Direction::R)
        .unwrap();
    tm.add("q0", ':', "q1", ':', Direction::R).unwrap();
    tm.add_many("q1", &others(":"), "q1", true, Direction::R)
        .unwrap();
    tm.add("q1", ':', "q2", ':', Direction::R).unwrap();
    // q2: only '-' so far; q3: some '?' seen
    tm.add("q2", '+', "acc", '+', Direction::R).unwrap();
    tm.add("q2", '-', "q2", '-', Direction::R).unwrap();
    tm.add("q2", '?', "q3", '?', Direction::R).unwrap();
    tm.add("q2", ';', "rej", ';', Direction::R).unwrap();
    tm.add("q3", '+', "acc", '+', Direction::R).unwrap();
    tm.add_many("q3", "-?", "q3", true, Direction::R).unwrap();
    tm.add("q3", ';', "loop", ';', Direction::L).unwrap();
    tm.add_many("loop", "-?:", "back", true, Direction::R)
        .unwrap();
    tm.add("back", ';', "loop", ';', Direction::L).unwrap();
    let vocab = Vocabulary::new().with_relation("P", 1);
    CuratedPair {
        name: "unary-trichotomy",
        argument: "Eloise picks an element and the atom P(x) is adjudicated by its \
                   status: some + lets her win, all - (or no element) hands Abelard the \
                   win, and otherwise her best is an undefined atom that nobody wins; \
                   the machine accepts, rejects or loops on exactly these status strings",
        machine: tm,
        formula: parse_formula("exists x. P(x)", &vocab).unwrap(),
        vocabulary: vocab,
    }
}

/// The full suite, including the diverging pair.
pub fn suite() -> Vec<CuratedPair> {
    vec![
        empty_domain(),
        reject_all(),
        in_place_looper(),
        at_least_two(),
        unary_trichotomy(),
    ]
}
