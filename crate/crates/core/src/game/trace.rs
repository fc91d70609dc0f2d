use serde::{Deserialize, Serialize};

use super::{Game, LegalMoves, Position, Terminal};

/// One transition of a recorded play. `choice` indexes the list returned by
/// [`Game::legal_moves`] at the source position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub from: String,
    pub choice: usize,
    #[serde(rename = "move")]
    pub description: String,
    pub to: String,
}

/// A complete play from a start position to a terminal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub terminal: Terminal,
}

impl Trace {
    /// Records the play obtained by following `choices` from `start`.
    pub fn record(
        game: &Game<'_>,
        start: &Position,
        choices: &[usize],
    ) -> Result<Self, ReplayError> {
        let (_, steps, terminal) = run(game, start, choices)?;
        let terminal = terminal.ok_or(ReplayError::NotTerminal)?;
        Ok(Trace { steps, terminal })
    }

    pub fn choices(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.choice).collect()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {step}: choice {choice} is out of range")]
    BadChoice { step: usize, choice: usize },
    #[error("step {step}: the play ended before this step")]
    Ended { step: usize },
    #[error("step {step}: position hash mismatch")]
    HashMismatch { step: usize },
    #[error("the play did not reach a terminal")]
    NotTerminal,
    #[error("the replayed terminal differs from the recorded one")]
    TerminalMismatch,
    #[error(transparent)]
    Game(#[from] super::GameError),
}

type Run = (Position, Vec<TraceStep>, Option<Terminal>);

fn run(game: &Game<'_>, start: &Position, choices: &[usize]) -> Result<Run, ReplayError> {
    let mut p = start.clone();
    let mut steps = Vec::with_capacity(choices.len());
    for (step, &choice) in choices.iter().enumerate() {
        let moves = match game.legal_moves(&p)? {
            LegalMoves::End(_) => return Err(ReplayError::Ended { step }),
            LegalMoves::Moves(ms) => ms,
        };
        let m = moves
            .get(choice)
            .ok_or(ReplayError::BadChoice { step, choice })?;
        let next = game.apply_move(&p, m)?;
        steps.push(TraceStep {
            from: p.hash_id(),
            choice,
            description: m.describe(&p),
            to: next.hash_id(),
        });
        p = next;
    }
    let terminal = match game.legal_moves(&p)? {
        LegalMoves::End(t) => Some(t),
        LegalMoves::Moves(_) => None,
    };
    Ok((p, steps, terminal))
}

/// Replays `trace` from `start`, checking every position hash and the final
/// terminal. Returns the final position.
pub fn replay(game: &Game<'_>, start: &Position, trace: &Trace) -> Result<Position, ReplayError> {
    let (end, steps, terminal) = run(game, start, &trace.choices())?;
    for (i, (got, want)) in steps.iter().zip(&trace.steps).enumerate() {
        if got.from != want.from || got.to != want.to {
            return Err(ReplayError::HashMismatch { step: i });
        }
    }
    match terminal {
        None => Err(ReplayError::NotTerminal),
        Some(t) if t != trace.terminal => Err(ReplayError::TerminalMismatch),
        Some(_) => Ok(end),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;
    use crate::structure::{parse_model, Assignment};
    use crate::syntax::{index_subformulas, parse_formula};

    #[test]
    fn record_and_replay() {
        let (vocab, s) = parse_model("domain: a b\nrelation R/1\n  + (b)\n").unwrap();
        let t = index_subformulas(&parse_formula("exists x. R(x)", &vocab).unwrap());
        let game = Game::new(&t, GameConfig::default()).unwrap();
        let start = game.initial_position(s, Assignment::new()).unwrap();
        let trace = Trace::record(&game, &start, &[1]).unwrap();
        assert_eq!(trace.terminal, Terminal::EloiseWins);
        assert_eq!(trace.steps[0].description, "Eloise picks b");
        assert!(replay(&game, &start, &trace).is_ok());

        let mut forged = trace.clone();
        forged.terminal = Terminal::AbelardWins;
        assert_eq!(
            replay(&game, &start, &forged),
            Err(ReplayError::TerminalMismatch)
        );
        assert_eq!(
            Trace::record(&game, &start, &[5]),
            Err(ReplayError::BadChoice { step: 0, choice: 5 })
        );
        assert_eq!(
            Trace::record(&game, &start, &[]),
            Err(ReplayError::NotTerminal)
        );
    }
}
