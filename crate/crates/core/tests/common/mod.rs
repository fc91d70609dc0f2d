//! Seeded random models and formulas shared by the integration tests, plus
//! the property checks that the acceptance target runs at full size.

#![allow(dead_code)]

pub mod checks;

use gts_core::structure::{Assignment, Element, PartialStructure, RelationMode};
use gts_core::syntax::{Formula, Term, Vocabulary};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// P/1 and R/2 relations, a unary function and two constants.
pub fn vocabulary() -> Vocabulary {
    Vocabulary::new()
        .with_relation("P", 1)
        .with_relation("R", 2)
        .with_function("f", 1)
        .with_constant("c")
        .with_constant("d")
}

/// A model over [`vocabulary`] with `0..=max_size` elements. Each relation
/// is partial or total at random, tuples get random statuses, and the
/// function and constants are defined at roughly 70% of their arguments.
pub fn structure(rng: &mut TestRng, max_size: usize) -> PartialStructure {
    let n = rng.gen_range(0..=max_size);
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut s = PartialStructure::new(&vocabulary(), &refs).unwrap();
    let elems: Vec<Element> = s.domain().collect();
    for (rel, arity) in [("P", 1), ("R", 2)] {
        let total = rng.gen_bool(0.3);
        if total {
            s.set_relation_mode(rel, RelationMode::Total).unwrap();
        }
        for t in s.tuples(arity) {
            match (total, rng.gen_range(0..3)) {
                (_, 0) => s.declare_tuple(rel, t, true).unwrap(),
                (false, 1) => s.declare_tuple(rel, t, false).unwrap(),
                _ => {}
            }
        }
    }
    for e in &elems {
        if rng.gen_bool(0.7) {
            let v = *elems.choose(rng).unwrap();
            s.define_function("f", vec![*e], v).unwrap();
        }
    }
    for c in ["c", "d"] {
        let v = if rng.gen_bool(0.7) {
            elems.choose(rng).copied()
        } else {
            None
        };
        s.define_constant(c, v).unwrap();
    }
    s
}

/// Binds each of x, y, z with probability 0.8 when the domain is non-empty.
pub fn assignment(rng: &mut TestRng, s: &PartialStructure) -> Assignment {
    let elems: Vec<Element> = s.domain().collect();
    let mut g = Assignment::new();
    if elems.is_empty() {
        return g;
    }
    for v in VARS {
        if rng.gen_bool(0.8) {
            g.set(&v.into(), *elems.choose(rng).unwrap());
        }
    }
    g
}

fn term(rng: &mut TestRng, depth: u32) -> Term {
    match rng.gen_range(0..6) {
        0 if depth > 0 => Term::apply("f", vec![term(rng, depth - 1)]),
        1 => Term::constant(["c", "d"][rng.gen_range(0..2)]),
        _ => Term::var(VARS.choose(rng).unwrap()),
    }
}

fn atom(rng: &mut TestRng) -> Formula {
    match rng.gen_range(0..3) {
        0 => Formula::rel("P", vec![term(rng, 1)]),
        1 => Formula::rel("R", vec![term(rng, 1), term(rng, 1)]),
        _ => Formula::eq(term(rng, 1), term(rng, 1)),
    }
}

/// Which constructs a generated formula may use.
#[derive(Clone, Copy, Debug)]
pub struct Features {
    /// `wnot` and `det`.
    pub operators: bool,
    /// Element and tuple insertion/deletion.
    pub mutations: bool,
    /// Element insertion specifically (excluded for the exact solver).
    pub insert_elements: bool,
    /// `claim Ci.` and claim atoms.
    pub claims: bool,
}

impl Features {
    pub const FIRST_ORDER: Self = Self {
        operators: false,
        mutations: false,
        insert_elements: false,
        claims: false,
    };
    pub const COMPOSITIONAL: Self = Self {
        operators: true,
        ..Self::FIRST_ORDER
    };
    pub const GAME: Self = Self {
        operators: false,
        mutations: true,
        insert_elements: true,
        claims: true,
    };
    pub const FINITE_GAME: Self = Self {
        insert_elements: false,
        ..Self::GAME
    };
}

/// A formula of size at most `max_size` (counted in nodes).
pub fn formula(rng: &mut TestRng, max_size: usize, features: Features) -> Formula {
    let size = rng.gen_range(1..=max_size);
    build(rng, size, features)
}

fn build(rng: &mut TestRng, size: usize, features: Features) -> Formula {
    if size <= 1 {
        if features.claims && rng.gen_bool(0.15) {
            return Formula::ClaimAtom(rng.gen_range(0..2));
        }
        return atom(rng);
    }
    let mut unary: Vec<u8> = vec![0, 1, 2]; // not, exists, forall
    if features.operators {
        unary.extend([3, 4]);
    }
    if features.mutations {
        unary.extend([6, 7, 8]);
        if features.insert_elements {
            unary.push(5);
        }
    }
    if features.claims {
        unary.push(9);
    }
    if size >= 3 && rng.gen_bool(0.4) {
        let left = rng.gen_range(1..size - 1);
        let l = build(rng, left, features);
        let r = build(rng, size - 1 - left, features);
        return if rng.gen_bool(0.5) {
            Formula::and(l, r)
        } else {
            Formula::or(l, r)
        };
    }
    let body = build(rng, size - 1, features);
    let v = *VARS.choose(rng).unwrap();
    match *unary.choose(rng).unwrap() {
        0 => Formula::not(body),
        1 => Formula::exists(v, body),
        2 => Formula::forall(v, body),
        3 => Formula::wnot(body),
        4 => Formula::det(body),
        5 => Formula::insert_elem(v, body),
        6 => Formula::delete_elem(v, body),
        7 => {
            if rng.gen_bool(0.5) {
                Formula::insert_tuple("P", &[v], body)
            } else {
                let w = *VARS.choose(rng).unwrap();
                Formula::insert_tuple("R", &[v, w], body)
            }
        }
        8 => {
            if rng.gen_bool(0.5) {
                Formula::delete_tuple("P", &[v], body)
            } else {
                let w = *VARS.choose(rng).unwrap();
                Formula::delete_tuple("R", &[v, w], body)
            }
        }
        _ => Formula::claim(rng.gen_range(0..2), body),
    }
}
