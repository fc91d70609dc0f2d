use std::thread;

use serde::{Deserialize, Serialize};

use super::{run_tm, MachineError, TmOutcome, TuringMachine};
use crate::game::GameConfig;
use crate::solver::{solve, Outcome, SolveError};
use crate::structure::{encode_model, Assignment, PartialStructure};
use crate::syntax::FormulaTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    /// Both sides conclusive and matching: accept/verified,
    /// reject/falsified or cycle/indeterminate.
    Agree,
    /// Both sides conclusive but different.
    Disagree,
    /// The machine ran out of steps or the solver out of budget.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceRow {
    pub encoding: String,
    pub machine: TmOutcome,
    pub game: Outcome,
    pub agreement: Agreement,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub rows: Vec<CorrespondenceRow>,
}

impl CorrespondenceReport {
    pub fn count(&self, agreement: Agreement) -> usize {
        self.rows
            .iter()
            .filter(|r| r.agreement == agreement)
            .count()
    }

    /// Every row conclusive and in agreement.
    pub fn all_agree(&self) -> bool {
        self.count(Agreement::Agree) == self.rows.len()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CorrespondenceError {
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

fn classify(machine: &TmOutcome, game: Outcome) -> Agreement {
    match (machine, game) {
        (TmOutcome::Running { .. }, _) | (_, Outcome::Unknown) => Agreement::Inconclusive,
        (TmOutcome::Accept { .. }, Outcome::Verified)
        | (TmOutcome::Reject { .. }, Outcome::Falsified)
        | (TmOutcome::CycleDetected { .. }, Outcome::IndeterminateProven) => Agreement::Agree,
        _ => Agreement::Disagree,
    }
}

fn check_one(
    tm: &TuringMachine,
    table: &FormulaTable,
    model: &PartialStructure,
    config: GameConfig,
    budget: u32,
) -> Result<CorrespondenceRow, CorrespondenceError> {
    let encoding = encode_model(model);
    let machine = run_tm(tm, &encoding, budget as u64)?;
    let game = solve(model, &Assignment::new(), table, config, budget)?.outcome;
    Ok(CorrespondenceRow {
        agreement: classify(&machine, game),
        encoding,
        machine,
        game,
    })
}

/// Runs `tm` on the encoding of each model and solves the game for `table`
/// on the same model, one thread per model. `budget` bounds both the
/// machine's steps and the bounded solver's depth.
pub fn check_correspondence(
    tm: &TuringMachine,
    table: &FormulaTable,
    models: &[PartialStructure],
    config: GameConfig,
    budget: u32,
) -> Result<CorrespondenceReport, CorrespondenceError> {
    let rows = thread::scope(|scope| {
        let handles: Vec<_> = models
            .iter()
            .map(|m| scope.spawn(move || check_one(tm, table, m, config, budget)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("correspondence worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(CorrespondenceReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_or_unknown_never_agrees() {
        let cases = [
            (TmOutcome::Running { budget: 5 }, Outcome::Verified),
            (TmOutcome::Accept { steps: 1 }, Outcome::Unknown),
            (
                TmOutcome::CycleDetected { first: 0, steps: 2 },
                Outcome::Unknown,
            ),
        ];
        for (m, g) in cases {
            assert_eq!(classify(&m, g), Agreement::Inconclusive);
        }
        assert_eq!(
            classify(&TmOutcome::Accept { steps: 1 }, Outcome::Falsified),
            Agreement::Disagree
        );
        assert_eq!(
            classify(
                &TmOutcome::CycleDetected { first: 0, steps: 2 },
                Outcome::IndeterminateProven
            ),
            Agreement::Agree
        );
    }
}
