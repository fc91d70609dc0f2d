//! Verdicts for semantic games.
//!
//! [`solve_exact`] builds the whole reachable game graph and computes both
//! players' attractors; it applies when the formula never inserts elements,
//! since the domain then cannot grow and the position space is finite.
//! [`solve_bounded`] is an iterative-deepening AND-OR search that reports a
//! forced win when one exists within the budget and `Unknown` otherwise.

mod bounded;
mod brute;
mod exact;
mod hint;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::game::{Game, GameConfig, GameError, Trace};
use crate::structure::{Assignment, PartialStructure};
use crate::syntax::FormulaTable;

pub use bounded::{solve_bounded, solve_bounded_from};
pub use brute::{brute_force_enumerate, BruteOutcome};
#[doc(hidden)]
pub use exact::attractor_partition;
pub use exact::{solve_exact, solve_exact_from, ExactOptions};
pub use hint::{suggest_move, Suggestion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// Eloise can force a win.
    #[serde(rename = "verified")]
    Verified,
    /// Abelard can force a win.
    #[serde(rename = "falsified")]
    Falsified,
    /// Neither player can force a win; only the exact solver proves this.
    #[serde(rename = "indeterminate")]
    IndeterminateProven,
    /// No forced win within the search budget.
    #[serde(rename = "unknown")]
    Unknown,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Verified => "verified",
            Outcome::Falsified => "falsified",
            Outcome::IndeterminateProven => "indeterminate",
            Outcome::Unknown => "unknown",
        }
    }

    pub fn is_conclusive(self) -> bool {
        self != Outcome::Unknown
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Exact,
    Bounded,
}

/// Result of solving a game from a start position.
///
/// `depth` counts every transition, forced ones included, on the longest
/// play the winner may have to go through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub depth: Option<u32>,
    pub budget_used: u32,
    pub solver: SolverKind,
    pub positions: usize,
    pub trace: Option<Trace>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("formula inserts elements; the exact solver needs a finite position space (use the bounded solver)")]
    ContainsInsertion,
    #[error("more than {0} reachable positions")]
    TooManyPositions(usize),
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("no winning play to extract for an {0} verdict")]
    NoWitness(Outcome),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// The winning play stored in a verified or falsified verdict.
pub fn extract_trace(verdict: &Verdict) -> Result<&Trace, SolveError> {
    match verdict.outcome {
        Outcome::Verified | Outcome::Falsified => verdict
            .trace
            .as_ref()
            .ok_or(SolveError::NoWitness(verdict.outcome)),
        other => Err(SolveError::NoWitness(other)),
    }
}

/// Exact solver when the formula never inserts elements and the position
/// space fits `options`, bounded search with `budget` otherwise.
pub fn solve(
    structure: &PartialStructure,
    assignment: &Assignment,
    table: &FormulaTable,
    config: GameConfig,
    budget: u32,
) -> Result<Verdict, SolveError> {
    let game = Game::new(table, config)?;
    let start = game.initial_position(structure.clone(), assignment.clone())?;
    solve_from(&game, &start, budget)
}

pub fn solve_from(
    game: &Game<'_>,
    start: &crate::game::Position,
    budget: u32,
) -> Result<Verdict, SolveError> {
    if !game.table().root().contains_element_insertion() {
        match solve_exact_from(game, start, ExactOptions::default()) {
            Err(SolveError::TooManyPositions(_)) => {}
            other => return other,
        }
    }
    solve_bounded_from(game, start, budget)
}
