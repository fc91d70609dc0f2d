use serde::{Deserialize, Serialize};

use super::bounded::Search;
use super::{solve_bounded_from, SolveError, Verdict};
use crate::game::{Game, LegalMoves, Position, Role};

/// Engine advice for the player to move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub verdict: Verdict,
    /// Index into the legal moves, when the position is not terminal.
    pub choice: Option<usize>,
}

/// Picks a move for `player` at `p`: the quickest forced win within
/// `budget`, otherwise the first move that does not hand the opponent a
/// forced win, otherwise the first move. Ties go to the earliest move.
pub fn suggest_move(
    game: &Game<'_>,
    p: &Position,
    player: Role,
    budget: u32,
) -> Result<Suggestion, SolveError> {
    let verdict = solve_bounded_from(game, p, budget)?;
    let successors = match game.legal_moves(p)? {
        LegalMoves::End(_) => {
            return Ok(Suggestion {
                verdict,
                choice: None,
            })
        }
        LegalMoves::Moves(_) => game.successors(p).expect("not terminal"),
    };
    let remaining = budget.saturating_sub(1);
    for depth in 0..=remaining {
        let mut search = Search::new(game);
        if let Some(i) = successors
            .iter()
            .position(|q| search.wins_within(q, player, depth))
        {
            return Ok(Suggestion {
                verdict,
                choice: Some(i),
            });
        }
    }
    let mut search = Search::new(game);
    let safe = successors
        .iter()
        .position(|q| !search.wins_within(q, player.opponent(), remaining))
        .unwrap_or(0);
    Ok(Suggestion {
        verdict,
        choice: Some(safe),
    })
}
