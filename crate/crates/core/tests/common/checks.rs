//! Property checks parameterized by seed and instance count. Each returns
//! the number of instances examined and a description of every violation.

use gts_core::game::{replay, Game, GameConfig, Position};
use gts_core::solver::{
    brute_force_enumerate, extract_trace, solve_bounded_from, solve_exact_from, BruteOutcome,
    ExactOptions, Outcome, Verdict,
};
use gts_core::structure::{
    encode_model, Assignment, Element, FreshStatus, PartialStructure, RelStatus, RelationMode,
};
use gts_core::syntax::{index_subformulas, parse_formula, print_formula, Formula, Vocabulary};
use gts_core::tm::{check_correspondence, curated, Agreement, TmOutcome};
use gts_core::{evaluate, TruthStatus};
use rand::Rng;

use super::{assignment, formula, rng, structure, vocabulary, Features};

#[derive(Debug, Default)]
pub struct Report {
    pub checked: usize,
    pub failures: Vec<String>,
    /// How often each verdict came up, to show the instances are not all
    /// trivial.
    pub outcomes: std::collections::BTreeMap<&'static str, usize>,
}

impl Report {
    fn fail(&mut self, message: String) {
        if self.failures.len() < 20 {
            self.failures.push(message);
        }
    }

    fn saw(&mut self, outcome: Outcome) {
        *self.outcomes.entry(outcome.as_str()).or_default() += 1;
    }

    /// Fails unless every listed verdict occurred at least once.
    pub fn require_variety(mut self, outcomes: &[Outcome]) -> Self {
        for o in outcomes {
            if !self.outcomes.contains_key(o.as_str()) {
                self.failures.push(format!("no instance ended {o}"));
            }
        }
        self
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn assert_ok(&self) {
        assert!(
            self.ok(),
            "{} violations, first ones:\n{}",
            self.failures.len(),
            self.failures.join("\n")
        );
    }
}

fn describe(s: &PartialStructure, g: &Assignment, f: &Formula) -> String {
    let g: Vec<String> = g
        .iter()
        .map(|(v, e)| format!("{v}={}", s.name(e)))
        .collect();
    format!(
        "{} | g: {} | model: {}",
        print_formula(f),
        g.join(","),
        s.canonical()
    )
}

fn start<'t>(game: &Game<'t>, s: &PartialStructure, g: &Assignment) -> Position {
    game.initial_position(s.clone(), g.clone()).unwrap()
}

/// Compositional evaluation equals the exact game verdict on first-order
/// formulas of size at most 8 over models of size 0..=4.
pub fn compositional_matches_game(seed: u64, instances: usize) -> Report {
    let mut r = rng(seed);
    let mut report = Report::default();
    for _ in 0..instances {
        let s = structure(&mut r, 4);
        let g = assignment(&mut r, &s);
        let f = formula(&mut r, 8, Features::FIRST_ORDER);
        let status = evaluate(&s, &g, &f).unwrap();
        let table = index_subformulas(&f);
        let game = Game::new(&table, GameConfig::default()).unwrap();
        let verdict =
            solve_exact_from(&game, &start(&game, &s, &g), ExactOptions::default()).unwrap();
        let expected = match (status.plus, status.minus) {
            (true, false) => Outcome::Verified,
            (false, true) => Outcome::Falsified,
            (false, false) => Outcome::IndeterminateProven,
            (true, true) => {
                report.fail(format!(
                    "glutty first-order status: {}",
                    describe(&s, &g, &f)
                ));
                continue;
            }
        };
        report.saw(verdict.outcome);
        if verdict.outcome != expected {
            report.fail(format!(
                "evaluate {:?} but game {}: {}",
                status,
                verdict.outcome,
                describe(&s, &g, &f)
            ));
        }
        report.checked += 1;
    }
    report
}

/// The truth teller and the liar are indeterminate on every model of size
/// 0..=3 (all relations undefined, and with random contents).
pub fn self_reference_is_indeterminate() -> Report {
    let mut report = Report::default();
    let mut r = rng(7);
    for text in ["claim C0. C0", "claim C0. not C0"] {
        let table = index_subformulas(&parse_formula(text, &Vocabulary::new()).unwrap());
        let game = Game::new(&table, GameConfig::default()).unwrap();
        for n in 0..=3 {
            let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let mut models = vec![PartialStructure::bare(&refs)];
            while models.len() < 4 {
                let m = structure(&mut r, 3);
                if m.domain_size() == n {
                    models.push(m);
                }
            }
            for s in models {
                let v = solve_exact_from(
                    &game,
                    &start(&game, &s, &Assignment::new()),
                    ExactOptions::default(),
                )
                .unwrap();
                if v.outcome != Outcome::IndeterminateProven {
                    report.fail(format!("{text} on size {n}: {}", v.outcome));
                }
                report.checked += 1;
            }
        }
    }
    report
}

/// Weak negation and determinacy on an atom of each status.
pub fn operator_truth_table() -> Report {
    let mut report = Report::default();
    let vocab = Vocabulary::new().with_relation("R", 1);
    let mut s = PartialStructure::new(&vocab, &["p", "n", "u"]).unwrap();
    s.declare_tuple("R", vec![Element(0)], true).unwrap();
    s.declare_tuple("R", vec![Element(1)], false).unwrap();
    let t = TruthStatus::TRUE;
    let f = TruthStatus::FALSE;
    let u = TruthStatus::UNDEFINED;
    let b = TruthStatus::BOTH;
    // (element, atom, d atom, ~ atom)
    let rows = [("p", t, t, f), ("n", f, t, t), ("u", u, f, b)];
    for (name, atom, det, wnot) in rows {
        let g = Assignment::new().bind(&"x".into(), s.element(name).unwrap());
        for (text, want) in [("R(x)", atom), ("det R(x)", det), ("wnot R(x)", wnot)] {
            let got = evaluate(&s, &g, &parse_formula(text, &vocab).unwrap()).unwrap();
            if got != want {
                report.fail(format!("{text} at {name}: got {got:?}, want {want:?}"));
            }
            report.checked += 1;
        }
    }
    report
}

fn agrees_with_oracle(v: Outcome, b: BruteOutcome) -> bool {
    matches!(
        (v, b),
        (Outcome::Verified, BruteOutcome::VerifierWins)
            | (Outcome::Falsified, BruteOutcome::FalsifierWins)
            | (Outcome::Unknown, BruteOutcome::NeitherYet)
    )
}

/// The bounded solver at budget `depth` reports exactly what full
/// enumeration to the same depth finds.
pub fn bounded_matches_oracle(seed: u64, instances: usize, depth: u32) -> Report {
    let mut r = rng(seed);
    let mut report = Report::default();
    for _ in 0..instances {
        let s = structure(&mut r, 2).with_fresh_status(if r.gen_bool(0.5) {
            FreshStatus::Undefined
        } else {
            FreshStatus::Negative
        });
        let g = assignment(&mut r, &s);
        let f = formula(&mut r, 6, Features::GAME);
        let table = index_subformulas(&f);
        let game = Game::new(&table, config(&mut r)).unwrap();
        let p = start(&game, &s, &g);
        let verdict = solve_bounded_from(&game, &p, depth).unwrap();
        let oracle = brute_force_enumerate(&game, &p, depth);
        report.saw(verdict.outcome);
        if !agrees_with_oracle(verdict.outcome, oracle) {
            report.fail(format!(
                "bounded {} vs oracle {oracle:?}: {}",
                verdict.outcome,
                describe(&s, &g, &f)
            ));
        }
        if let Some(trace) = &verdict.trace {
            if let Err(e) = replay(&game, &p, trace) {
                report.fail(format!(
                    "trace does not replay ({e}): {}",
                    describe(&s, &g, &f)
                ));
            }
        }
        report.checked += 1;
    }
    report
}

fn config(r: &mut super::TestRng) -> GameConfig {
    use gts_core::game::{ClaimUnbound, DeleteMiss, TupleDeletion};
    GameConfig {
        delete_miss: if r.gen_bool(0.5) {
            DeleteMiss::Lose
        } else {
            DeleteMiss::Ignore
        },
        claim_unbound: if r.gen_bool(0.5) {
            ClaimUnbound::Neither
        } else {
            ClaimUnbound::Lose
        },
        tuple_deletion: if r.gen_bool(0.8) {
            TupleDeletion::Choose
        } else {
            TupleDeletion::FromAssignment
        },
    }
}

/// A conclusive bounded verdict survives any larger budget with the same
/// outcome and depth.
pub fn budget_monotonicity(seed: u64, instances: usize) -> Report {
    let mut r = rng(seed);
    let mut report = Report::default();
    for _ in 0..instances {
        let s = structure(&mut r, 2);
        let g = assignment(&mut r, &s);
        let f = formula(&mut r, 6, Features::GAME);
        let table = index_subformulas(&f);
        let game = Game::new(&table, GameConfig::default()).unwrap();
        let p = start(&game, &s, &g);
        let small = r.gen_range(1..=5);
        let large = small + r.gen_range(1..=5);
        let a = solve_bounded_from(&game, &p, small).unwrap();
        let b = solve_bounded_from(&game, &p, large).unwrap();
        report.saw(a.outcome);
        if a.outcome.is_conclusive() && (a.outcome, a.depth) != (b.outcome, b.depth) {
            report.fail(format!(
                "budget {small}: {} at {:?}, budget {large}: {} at {:?}: {}",
                a.outcome,
                a.depth,
                b.outcome,
                b.depth,
                describe(&s, &g, &f)
            ));
        }
        if b.outcome == Outcome::Unknown && a.outcome != Outcome::Unknown {
            report.fail(format!(
                "larger budget lost a verdict: {}",
                describe(&s, &g, &f)
            ));
        }
        report.checked += 1;
    }
    report
}

fn dual(o: Outcome) -> Outcome {
    match o {
        Outcome::Verified => Outcome::Falsified,
        Outcome::Falsified => Outcome::Verified,
        other => other,
    }
}

/// Solving `not φ` swaps verified and falsified and costs exactly one more
/// move. Half the instances use the exact solver, half the bounded one.
pub fn negation_duality(seed: u64, instances: usize) -> Report {
    let mut r = rng(seed);
    let mut report = Report::default();
    for i in 0..instances {
        let s = structure(&mut r, 2);
        let g = assignment(&mut r, &s);
        let exact = i % 2 == 0;
        let features = if exact {
            Features::FINITE_GAME
        } else {
            Features::GAME
        };
        let f = formula(&mut r, 6, features);
        let negated = Formula::not(f.clone());
        let (t1, t2) = (index_subformulas(&f), index_subformulas(&negated));
        let (g1, g2) = (
            Game::new(&t1, GameConfig::default()).unwrap(),
            Game::new(&t2, GameConfig::default()).unwrap(),
        );
        let budget = r.gen_range(1..=8);
        let solve = |game: &Game<'_>, budget: u32| -> Verdict {
            let p = start(game, &s, &g);
            if exact {
                solve_exact_from(game, &p, ExactOptions::default()).unwrap()
            } else {
                solve_bounded_from(game, &p, budget).unwrap()
            }
        };
        let a = solve(&g1, budget);
        let b = solve(&g2, budget + 1);
        report.saw(a.outcome);
        if b.outcome != dual(a.outcome) || b.depth != a.depth.map(|d| d + 1) {
            report.fail(format!(
                "{} at {:?} but negation {} at {:?}: {}",
                a.outcome,
                a.depth,
                b.outcome,
                b.depth,
                describe(&s, &g, &f)
            ));
        }
        report.checked += 1;
    }
    report
}

/// On insertion-free games the bounded solver, given enough budget, agrees
/// with the exact one whenever it is conclusive, with the same depth.
pub fn exact_matches_bounded(seed: u64, instances: usize) -> Report {
    let mut r = rng(seed);
    let mut report = Report::default();
    for _ in 0..instances {
        let s = structure(&mut r, 3);
        let g = assignment(&mut r, &s);
        let f = formula(&mut r, 7, Features::FINITE_GAME);
        let table = index_subformulas(&f);
        let game = Game::new(&table, GameConfig::default()).unwrap();
        let p = start(&game, &s, &g);
        let exact = solve_exact_from(&game, &p, ExactOptions::default()).unwrap();
        let bounded = solve_bounded_from(&game, &p, 12).unwrap();
        report.saw(exact.outcome);
        let consistent = match bounded.outcome {
            Outcome::Unknown => {
                exact.outcome == Outcome::IndeterminateProven || exact.depth.is_some_and(|d| d > 12)
            }
            o => o == exact.outcome && bounded.depth == exact.depth,
        };
        if !consistent {
            report.fail(format!(
                "exact {} at {:?}, bounded {} at {:?}: {}",
                exact.outcome,
                exact.depth,
                bounded.outcome,
                bounded.depth,
                describe(&s, &g, &f)
            ));
        }
        for v in [&exact, &bounded] {
            if let Ok(trace) = extract_trace(v) {
                if replay(&game, &p, trace).is_err() || trace.steps.len() as u32 > v.depth.unwrap()
                {
                    report.fail(format!("bad witness trace: {}", describe(&s, &g, &f)));
                }
            }
        }
        report.checked += 1;
    }
    report
}

fn check_invariants(s: &PartialStructure, report: &mut Report, context: &str) {
    let in_domain = |t: &[Element]| t.iter().all(|e| s.contains(*e));
    for (name, rel) in s.relations() {
        if rel.positive.intersection(&rel.negative).next().is_some() {
            report.fail(format!("{context}: {name} has a tuple in both parts"));
        }
        if rel.mode == RelationMode::Total && !rel.negative.is_empty() {
            report.fail(format!("{context}: total {name} has negative entries"));
        }
        if !rel
            .positive
            .iter()
            .chain(&rel.negative)
            .all(|t| in_domain(t))
        {
            report.fail(format!("{context}: {name} mentions a deleted element"));
        }
    }
    for (name, f) in s.functions() {
        if !f
            .entries
            .iter()
            .all(|(args, v)| in_domain(args) && s.contains(*v))
        {
            report.fail(format!("{context}: {name} mentions a deleted element"));
        }
    }
    for (name, c) in s.constants() {
        if c.is_some_and(|e| !s.contains(e)) {
            report.fail(format!(
                "{context}: constant {name} denotes a deleted element"
            ));
        }
    }
}

/// Random sequences of insertions and deletions keep positive and negative
/// parts disjoint, delete every reference to a removed element, add fresh
/// elements isolated, and never modify the structure they start from.
pub fn mutation_invariants(seed: u64, sequences: usize) -> Report {
    let mut r = rng(seed);
    let mut report = Report::default();
    for _ in 0..sequences {
        let fresh = if r.gen_bool(0.5) {
            FreshStatus::Undefined
        } else {
            FreshStatus::Negative
        };
        let mut s = structure(&mut r, 3).with_fresh_status(fresh);
        check_invariants(&s, &mut report, "generated");
        for _ in 0..r.gen_range(1..=12) {
            let before = s.clone();
            let snapshot = before.canonical();
            let elems: Vec<Element> = s.domain().collect();
            let (rel, arity) = if r.gen_bool(0.5) { ("P", 1) } else { ("R", 2) };
            let tuple: Vec<Element> = if elems.is_empty() {
                vec![]
            } else {
                (0..arity)
                    .map(|_| elems[r.gen_range(0..elems.len())])
                    .collect()
            };
            let op = r.gen_range(0..4);
            let next = match op {
                0 => {
                    let (next, e) = s.insert_element();
                    if s.contains(e)
                        || !next.contains(e)
                        || next.domain_size() != s.domain_size() + 1
                    {
                        report.fail("insert_element did not add exactly one new element".into());
                    }
                    let touched = next
                        .relations()
                        .any(|(_, t)| t.positive.iter().chain(&t.negative).any(|t| t.contains(&e)))
                        || next
                            .functions()
                            .any(|(_, f)| f.entries.iter().any(|(a, v)| a.contains(&e) || *v == e))
                        || next.constants().any(|(_, c)| c == Some(e));
                    if touched {
                        report.fail("fresh element is not isolated".into());
                    }
                    for (name, table) in next.relations() {
                        let want = match (table.mode, fresh) {
                            (RelationMode::Total, _) | (_, FreshStatus::Negative) => {
                                RelStatus::Negative
                            }
                            _ => RelStatus::Undefined,
                        };
                        let t = vec![e; table.arity];
                        if next.status(name, &t) != want {
                            report.fail(format!("fresh tuple in {name} is not {want:?}"));
                        }
                    }
                    next
                }
                1 if !elems.is_empty() => {
                    let e = elems[r.gen_range(0..elems.len())];
                    let next = s.delete_element(e).unwrap();
                    if next.contains(e) {
                        report.fail("deleted element still in the domain".into());
                    }
                    // tuples avoiding e are untouched
                    for (name, table) in s.relations() {
                        let kept = next.relation(name).unwrap();
                        for t in table.positive.iter().filter(|t| !t.contains(&e)) {
                            if !kept.positive.contains(t) {
                                report
                                    .fail(format!("deletion dropped an unrelated tuple of {name}"));
                            }
                        }
                    }
                    next
                }
                2 if !tuple.is_empty() => {
                    let next = s.insert_tuple(rel, &tuple).unwrap();
                    if next.status(rel, &tuple) != RelStatus::Positive {
                        report.fail("inserted tuple is not positive".into());
                    }
                    next
                }
                3 if !tuple.is_empty() => {
                    let next = s.delete_tuple(rel, &tuple).unwrap();
                    if next.status(rel, &tuple) != RelStatus::Negative {
                        report.fail("deleted tuple is not negative".into());
                    }
                    next
                }
                _ => continue,
            };
            if before.canonical() != snapshot {
                report.fail("mutation changed its input".into());
            }
            check_invariants(&next, &mut report, &format!("after op {op}"));
            s = next;
        }
        report.checked += 1;
    }
    report
}

/// Every curated pair agrees on all models up to `max_size`, and the
/// suite contains a divergence matched by an indeterminate game.
pub fn machine_trichotomy(max_size: usize) -> Report {
    let mut report = Report::default();
    let mut diverging = 0;
    for pair in curated::suite() {
        let table = index_subformulas(&pair.formula);
        let models = pair.models(max_size);
        let out = check_correspondence(&pair.machine, &table, &models, GameConfig::default(), 200)
            .unwrap();
        for row in &out.rows {
            if row.agreement != Agreement::Agree {
                report.fail(format!(
                    "{}: {} gave {:?} vs {}",
                    pair.name, row.encoding, row.machine, row.game
                ));
            }
            if matches!(row.machine, TmOutcome::CycleDetected { .. })
                && row.game == Outcome::IndeterminateProven
            {
                diverging += 1;
            }
        }
        report.checked += out.rows.len();
    }
    if diverging == 0 {
        report.fail("no diverge/indeterminate agreement in the suite".into());
    }
    report
}

/// Printing then parsing returns the same formula, for first-order,
/// compositional and game formulas.
pub fn parser_round_trip(seed: u64, instances: usize) -> Report {
    let mut r = rng(seed);
    let mut report = Report::default();
    let vocab = vocabulary();
    for i in 0..instances {
        let features = [
            Features::FIRST_ORDER,
            Features::COMPOSITIONAL,
            Features::GAME,
        ][i % 3];
        let f = formula(&mut r, 12, features);
        let text = print_formula(&f);
        match parse_formula(&text, &vocab) {
            Ok(back) if back == f => {}
            Ok(back) => report.fail(format!("{text} reparsed as {}", print_formula(&back))),
            Err(e) => report.fail(format!("{text} failed to parse: {e}")),
        }
        report.checked += 1;
    }
    report
}

/// Tuple statuses, function entries and constants, read through the
/// structure's query API rather than its tables. Relation modes are not
/// part of it: a total relation and a partial one with the same statuses
/// look alike to the encoding.
fn status_view(s: &PartialStructure) -> String {
    let mut out = format!("{}", s.domain_size());
    for (name, table) in s.relations() {
        out.push_str(&format!("|{name}:"));
        for t in s.tuples(table.arity) {
            out.push(s.status(name, &t).symbol());
        }
    }
    for (name, f) in s.functions() {
        out.push_str(&format!("|{name}:{:?}", f.entries));
    }
    for (name, c) in s.constants() {
        out.push_str(&format!("|{name}={c:?}"));
    }
    out
}

/// Encoding is a function of the model: repeated and cloned encodings
/// coincide, and models of the same domain with different statuses,
/// function entries or constants never collide.
pub fn encoding_determinism(seed: u64, instances: usize) -> Report {
    let mut r = rng(seed);
    let mut report = Report::default();
    let mut seen = std::collections::HashMap::new();
    for _ in 0..instances {
        let s = structure(&mut r, 4);
        let e = encode_model(&s);
        if encode_model(&s.clone()) != e || encode_model(&s) != e {
            report.fail(format!("unstable encoding for {}", s.canonical()));
        }
        if !e.starts_with(&format!("n={};", s.domain_size())) {
            report.fail(format!("encoding {e} does not start with the size"));
        }
        let canonical = status_view(&s);
        if let Some(prev) = seen.insert(e.clone(), canonical.clone()) {
            if prev != canonical {
                report.fail(format!("{e} encodes both {prev} and {canonical}"));
            }
        }
        report.checked += 1;
    }
    report
}
