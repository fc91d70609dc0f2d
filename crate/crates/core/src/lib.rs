//! Three-valued first-order semantics over partial structures, semantic
//! games with model-mutating moves and self-referential claims, solvers for
//! those games, and a Turing-machine harness.
//!
//! ```
//! use gts_core::{index_subformulas, parse_formula, parse_model, solve, Assignment, GameConfig, Outcome};
//!
//! let (vocab, model) = parse_model("domain: a b\nrelation P/1\n  + (b)\n").unwrap();
//! let table = index_subformulas(&parse_formula("exists x. P(x)", &vocab).unwrap());
//! let verdict = solve(&model, &Assignment::new(), &table, GameConfig::default(), 8).unwrap();
//! assert_eq!(verdict.outcome, Outcome::Verified);
//! ```

pub mod eval;
pub mod game;
pub mod solver;
pub mod structure;
pub mod syntax;
pub mod tm;

pub use eval::{evaluate, EvalError, TruthStatus};
pub use game::{Game, GameConfig, LegalMoves, Move, Position, Role, Terminal, Trace};
pub use solver::{
    brute_force_enumerate, solve, solve_bounded, solve_exact, suggest_move, Outcome, SolveError,
    Verdict,
};
pub use structure::{encode_model, parse_model, Assignment, Element, PartialStructure, RelStatus};
pub use syntax::{
    index_subformulas, parse_formula, print_formula, render_natural_language, Formula,
    FormulaTable, Vocabulary,
};
pub use tm::{check_correspondence, run_tm, TmOutcome, TuringMachine};
