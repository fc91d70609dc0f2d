use std::collections::{HashMap, VecDeque};

use super::{Outcome, SolveError, SolverKind, Verdict};
use crate::game::{Game, GameConfig, LegalMoves, Position, Role, Terminal, Trace};
use crate::structure::{Assignment, PartialStructure};
use crate::syntax::FormulaTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    pub max_positions: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            max_positions: 2_000_000,
        }
    }
}

enum Vertex {
    End(Terminal),
    /// `owner` is `None` for forced moves.
    Choice {
        owner: Option<Role>,
        succ: Vec<usize>,
    },
}

struct Graph {
    vertices: Vec<Vertex>,
}

impl Graph {
    fn build(game: &Game<'_>, start: &Position, limit: usize) -> Result<Self, SolveError> {
        let mut index: HashMap<Position, usize> = HashMap::new();
        let mut positions: Vec<Position> = vec![start.clone()];
        let mut vertices: Vec<Vertex> = Vec::new();
        index.insert(start.clone(), 0);
        let mut next = 0;
        while next < positions.len() {
            let p = positions[next].clone();
            next += 1;
            let vertex = match game.moves_unchecked(&p) {
                LegalMoves::End(t) => Vertex::End(t),
                LegalMoves::Moves(ms) => {
                    let owner = ms[0].player(&p);
                    let mut succ = Vec::with_capacity(ms.len());
                    for m in &ms {
                        let q = game.apply_unchecked(&p, m);
                        let id = match index.get(&q) {
                            Some(&id) => id,
                            None => {
                                let id = positions.len();
                                if id >= limit {
                                    return Err(SolveError::TooManyPositions(limit));
                                }
                                index.insert(q.clone(), id);
                                positions.push(q);
                                id
                            }
                        };
                        succ.push(id);
                    }
                    Vertex::Choice { owner, succ }
                }
            };
            vertices.push(vertex);
        }
        Ok(Self { vertices })
    }

    /// Backward fixpoint: vertices from which `player` forces a win, with the
    /// number of moves needed.
    fn attractor(&self, player: Role) -> Vec<Option<u32>> {
        let n = self.vertices.len();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut pending: Vec<usize> = vec![0; n];
        for (v, vertex) in self.vertices.iter().enumerate() {
            if let Vertex::Choice { succ, .. } = vertex {
                for &w in succ {
                    preds[w].push(v);
                }
                // the opponent must be cornered on every move, duplicates included
                pending[v] = succ.len();
            }
        }
        let mut rank: Vec<Option<u32>> = vec![None; n];
        let mut queue = VecDeque::new();
        for (v, vertex) in self.vertices.iter().enumerate() {
            if matches!(vertex, Vertex::End(t) if t.winner() == Some(player)) {
                rank[v] = Some(0);
                queue.push_back(v);
            }
        }
        while let Some(w) = queue.pop_front() {
            let r = rank[w].expect("queued vertices are ranked");
            for &v in &preds[w] {
                if rank[v].is_some() {
                    continue;
                }
                let Vertex::Choice { owner, .. } = &self.vertices[v] else {
                    unreachable!("terminals have no successors")
                };
                let attracted = match owner {
                    Some(o) if *o != player => {
                        pending[v] -= 1;
                        pending[v] == 0
                    }
                    _ => true,
                };
                if attracted {
                    rank[v] = Some(r + 1);
                    queue.push_back(v);
                }
            }
        }
        rank
    }
}

/// Exact verdict for formulas without element insertion.
pub fn solve_exact(
    structure: &PartialStructure,
    assignment: &Assignment,
    table: &FormulaTable,
    config: GameConfig,
) -> Result<Verdict, SolveError> {
    let game = Game::new(table, config)?;
    let start = game.initial_position(structure.clone(), assignment.clone())?;
    solve_exact_from(&game, &start, ExactOptions::default())
}

pub fn solve_exact_from(
    game: &Game<'_>,
    start: &Position,
    options: ExactOptions,
) -> Result<Verdict, SolveError> {
    if game.table().root().contains_element_insertion() {
        return Err(SolveError::ContainsInsertion);
    }
    let graph = Graph::build(game, start, options.max_positions)?;
    let eloise = graph.attractor(Role::Eloise);
    let abelard = graph.attractor(Role::Abelard);
    let (outcome, ranks) = match (eloise[0], abelard[0]) {
        (Some(_), _) => (Outcome::Verified, Some(&eloise)),
        (None, Some(_)) => (Outcome::Falsified, Some(&abelard)),
        (None, None) => (Outcome::IndeterminateProven, None),
    };
    let trace = ranks.map(|ranks| winning_play(game, start, &graph, ranks));
    Ok(Verdict {
        outcome,
        depth: ranks.and_then(|r| r[0]),
        budget_used: 0,
        solver: SolverKind::Exact,
        positions: graph.vertices.len(),
        trace,
    })
}

/// Follows the attractor ranks down to a terminal. The winner always takes
/// the first move that lowers the rank; the loser takes its first move.
fn winning_play(game: &Game<'_>, start: &Position, graph: &Graph, ranks: &[Option<u32>]) -> Trace {
    let mut choices = Vec::new();
    let mut v = 0;
    while let Vertex::Choice { succ, .. } = &graph.vertices[v] {
        let r = ranks[v].expect("play stays inside the attractor");
        let i = succ
            .iter()
            .position(|w| ranks[*w] == Some(r - 1))
            .or_else(|| succ.iter().position(|w| ranks[*w].is_some_and(|x| x < r)))
            .expect("some successor lowers the rank");
        choices.push(i);
        v = succ[i];
    }
    Trace::record(game, start, &choices).expect("attractor play is legal and terminal")
}

/// Partition of all reachable positions into Eloise's attractor, Abelard's
/// attractor, and the rest. Used by tests.
#[doc(hidden)]
pub fn attractor_partition(
    game: &Game<'_>,
    start: &Position,
) -> Result<(usize, usize, usize, usize), SolveError> {
    let graph = Graph::build(game, start, ExactOptions::default().max_positions)?;
    let e = graph.attractor(Role::Eloise);
    let a = graph.attractor(Role::Abelard);
    let both = e
        .iter()
        .zip(&a)
        .filter(|(x, y)| x.is_some() && y.is_some())
        .count();
    let only_e = e
        .iter()
        .zip(&a)
        .filter(|(x, y)| x.is_some() && y.is_none())
        .count();
    let only_a = e
        .iter()
        .zip(&a)
        .filter(|(x, y)| x.is_none() && y.is_some())
        .count();
    let neither = e
        .iter()
        .zip(&a)
        .filter(|(x, y)| x.is_none() && y.is_none())
        .count();
    Ok((only_e, only_a, neither, both))
}
