use std::collections::HashMap;

use super::{Outcome, SolveError, SolverKind, Verdict};
use crate::game::{Game, GameConfig, LegalMoves, Position, Role, Trace};
use crate::structure::{Assignment, PartialStructure};
use crate::syntax::FormulaTable;

/// Which players can force a win within the remaining depth.
#[derive(Clone, Copy, Debug, Default)]
struct Forcing {
    eloise: bool,
    abelard: bool,
}

impl Forcing {
    fn get(self, role: Role) -> bool {
        match role {
            Role::Eloise => self.eloise,
            Role::Abelard => self.abelard,
        }
    }
}

/// Depth-limited AND-OR search with a transposition table keyed on
/// (position, remaining depth). One instance serves one deepening
/// iteration.
pub(super) struct Search<'g, 't> {
    game: &'g Game<'t>,
    table: HashMap<(Position, u32), Forcing>,
}

impl<'g, 't> Search<'g, 't> {
    pub(super) fn new(game: &'g Game<'t>) -> Self {
        Self {
            game,
            table: HashMap::new(),
        }
    }

    fn forcing(&mut self, p: &Position, remaining: u32) -> Forcing {
        let moves = match self.game.moves_unchecked(p) {
            LegalMoves::End(t) => {
                return Forcing {
                    eloise: t.winner() == Some(Role::Eloise),
                    abelard: t.winner() == Some(Role::Abelard),
                }
            }
            LegalMoves::Moves(_) if remaining == 0 => return Forcing::default(),
            LegalMoves::Moves(ms) => ms,
        };
        let key = (p.clone(), remaining);
        if let Some(hit) = self.table.get(&key) {
            return *hit;
        }
        let result = match moves[0].player(p) {
            None => {
                let q = self.game.apply_unchecked(p, &moves[0]);
                self.forcing(&q, remaining - 1)
            }
            Some(owner) => {
                // owner needs one good child; the other side needs all of them
                let mut owner_can = false;
                let mut other_can = true;
                for m in &moves {
                    let q = self.game.apply_unchecked(p, m);
                    let f = self.forcing(&q, remaining - 1);
                    owner_can |= f.get(owner);
                    other_can &= f.get(owner.opponent());
                    if owner_can && !other_can {
                        break;
                    }
                }
                match owner {
                    Role::Eloise => Forcing {
                        eloise: owner_can,
                        abelard: other_can,
                    },
                    Role::Abelard => Forcing {
                        eloise: other_can,
                        abelard: owner_can,
                    },
                }
            }
        };
        self.table.insert(key, result);
        result
    }

    fn owner(&self, p: &Position) -> Option<Role> {
        match self.game.moves_unchecked(p) {
            LegalMoves::Moves(ms) => ms[0].player(p),
            LegalMoves::End(_) => None,
        }
    }

    pub(super) fn wins_within(&mut self, p: &Position, role: Role, depth: u32) -> bool {
        self.forcing(p, depth).get(role)
    }

    /// Play where `winner` keeps a forced win of at most `depth` moves; the
    /// loser and forced moves take the first option.
    fn winning_play(&mut self, start: &Position, winner: Role, depth: u32) -> Trace {
        let mut choices = Vec::new();
        let mut p = start.clone();
        let mut remaining = depth;
        while let Ok(successors) = self.game.successors(&p) {
            let i = if self.owner(&p) == Some(winner) {
                successors
                    .iter()
                    .position(|q| self.wins_within(q, winner, remaining - 1))
                    .expect("winning move exists")
            } else {
                0
            };
            choices.push(i);
            p = successors[i].clone();
            remaining -= 1;
        }
        Trace::record(self.game, start, &choices).expect("search play is legal and terminal")
    }

    fn explored(&self) -> usize {
        self.table.len()
    }
}

/// Iterative deepening up to `budget` moves from the initial position.
pub fn solve_bounded(
    structure: &PartialStructure,
    assignment: &Assignment,
    table: &FormulaTable,
    config: GameConfig,
    budget: u32,
) -> Result<Verdict, SolveError> {
    let game = Game::new(table, config)?;
    let start = game.initial_position(structure.clone(), assignment.clone())?;
    solve_bounded_from(&game, &start, budget)
}

pub fn solve_bounded_from(
    game: &Game<'_>,
    start: &Position,
    budget: u32,
) -> Result<Verdict, SolveError> {
    if budget == 0 {
        return Err(SolveError::ZeroBudget);
    }
    game.legal_moves(start)?;
    let mut positions = 0;
    for depth in 0..=budget {
        let mut search = Search::new(game);
        let f = search.forcing(start, depth);
        positions += search.explored();
        let winner = match (f.eloise, f.abelard) {
            (true, _) => Role::Eloise,
            (false, true) => Role::Abelard,
            (false, false) => continue,
        };
        let trace = search.winning_play(start, winner, depth);
        return Ok(Verdict {
            outcome: if winner == Role::Eloise {
                Outcome::Verified
            } else {
                Outcome::Falsified
            },
            depth: Some(depth),
            budget_used: depth,
            solver: SolverKind::Bounded,
            positions,
            trace: Some(trace),
        });
    }
    Ok(Verdict {
        outcome: Outcome::Unknown,
        depth: None,
        budget_used: budget,
        solver: SolverKind::Bounded,
        positions,
        trace: None,
    })
}
