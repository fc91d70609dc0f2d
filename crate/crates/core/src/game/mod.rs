//! Semantic game for formulas with mutation operators and claim binders.
//!
//! A [`Position`] is a structure snapshot, an assignment, a node of the
//! indexed formula and the player currently acting as verifier. [`Game`]
//! enumerates legal moves, applies them, and adjudicates terminal
//! positions.

mod trace;

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::structure::{Assignment, Element, PartialStructure, RelStatus, Tuple};
use crate::syntax::{FormulaTable, Name, Node, NodeId};

pub use trace::{replay, ReplayError, Trace, TraceStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Eloise,
    Abelard,
}

impl Role {
    pub fn opponent(self) -> Self {
        match self {
            Role::Eloise => Role::Abelard,
            Role::Abelard => Role::Eloise,
        }
    }

    pub fn wins(self) -> Terminal {
        match self {
            Role::Eloise => Terminal::EloiseWins,
            Role::Abelard => Terminal::AbelardWins,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Eloise => "Eloise",
            Role::Abelard => "Abelard",
        })
    }
}

/// How a play ended. Plays that never end are also won by neither player.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminal {
    EloiseWins,
    AbelardWins,
    Neither,
}

impl Terminal {
    pub fn winner(self) -> Option<Role> {
        match self {
            Terminal::EloiseWins => Some(Role::Eloise),
            Terminal::AbelardWins => Some(Role::Abelard),
            Terminal::Neither => None,
        }
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Terminal::EloiseWins => "Eloise wins",
            Terminal::AbelardWins => "Abelard wins",
            Terminal::Neither => "Neither wins",
        })
    }
}

/// Deleting an unbound variable: the verifier loses, or the deletion is
/// skipped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeleteMiss {
    #[default]
    Lose,
    Ignore,
}

/// A claim atom without any binder in the formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimUnbound {
    #[default]
    Neither,
    Lose,
}

/// Which tuple `deleteT R(x1..xn)` removes: one chosen by the verifier (bound
/// to the variables, then deleted), or the tuple the variables already
/// denote under the current assignment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleDeletion {
    #[default]
    Choose,
    FromAssignment,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub delete_miss: DeleteMiss,
    pub claim_unbound: ClaimUnbound,
    pub tuple_deletion: TupleDeletion,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub structure: PartialStructure,
    pub assignment: Assignment,
    pub node: NodeId,
    pub verifier: Role,
    table: u64,
}

impl Position {
    /// Canonical text identity: domain order, sorted tables, assignment,
    /// node id and role.
    pub fn canonical(&self) -> String {
        let s = &self.structure;
        let g: Vec<String> = self
            .assignment
            .iter()
            .map(|(v, e)| format!("{v}:{}", s.name(e)))
            .collect();
        let role = match self.verifier {
            Role::Eloise => 'E',
            Role::Abelard => 'A',
        };
        format!(
            "{}|g{{{}}}|n{}|{role}|t{:016x}",
            s.canonical(),
            g.join(","),
            self.node,
            self.table
        )
    }

    /// Short stable hash of [`Position::canonical`].
    pub fn hash_id(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        hex::encode(&digest[..8])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mover {
    Verifier,
    Falsifier,
    Forced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    PickDisjunct(Side),
    PickWitness(Element),
    PickTuple(Tuple),
    PickClaimBinder(NodeId),
    Descend(Forced),
}

/// What a forced move does; only used to describe it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Forced {
    SwapRoles,
    InsertElement(Name),
    DeleteElement(Element),
    DeleteTuple(Name, Tuple),
    /// Deleting something unbound under the ignore convention.
    SkipDeletion,
    EnterClaim(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub mover: Mover,
    pub payload: Payload,
}

impl Move {
    fn new(mover: Mover, payload: Payload) -> Self {
        Self { mover, payload }
    }

    /// The player making this move at `p`, or `None` for forced moves.
    pub fn player(&self, p: &Position) -> Option<Role> {
        match self.mover {
            Mover::Verifier => Some(p.verifier),
            Mover::Falsifier => Some(p.verifier.opponent()),
            Mover::Forced => None,
        }
    }

    /// Human-readable description using the element names of `p`.
    pub fn describe(&self, p: &Position) -> String {
        let s = &p.structure;
        let who = self
            .player(p)
            .map(|r| r.to_string())
            .unwrap_or_else(|| "forced".to_string());
        match &self.payload {
            Payload::PickDisjunct(Side::Left) => format!("{who} picks the left side"),
            Payload::PickDisjunct(Side::Right) => format!("{who} picks the right side"),
            Payload::PickWitness(e) => format!("{who} picks {}", s.name(*e)),
            Payload::PickTuple(t) => format!("{who} picks {}", s.format_tuple(t)),
            Payload::PickClaimBinder(n) => format!("{who} jumps to binder at node {n}"),
            Payload::Descend(Forced::SwapRoles) => {
                "forced: verifier and falsifier swap".to_string()
            }
            Payload::Descend(Forced::InsertElement(x)) => {
                format!("forced: insert a new element as {x}")
            }
            Payload::Descend(Forced::DeleteElement(e)) => format!("forced: delete {}", s.name(*e)),
            Payload::Descend(Forced::DeleteTuple(r, t)) => {
                format!("forced: delete {} from {r}", s.format_tuple(t))
            }
            Payload::Descend(Forced::SkipDeletion) => "forced: nothing to delete".to_string(),
            Payload::Descend(Forced::EnterClaim(i)) => format!("forced: enter claim C{i}"),
        }
    }
}

/// Result of [`Game::legal_moves`]: either the play continues with a
/// non-empty list of moves, or it has ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LegalMoves {
    Moves(Vec<Move>),
    End(Terminal),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GameError {
    #[error("position belongs to a different formula")]
    ForeignPosition,
    #[error("node {0} is not in the formula table")]
    InvalidNode(NodeId),
    #[error("variable `{0}` is assigned an element outside the domain")]
    AssignmentOutsideDomain(String),
    #[error("illegal move")]
    IllegalMove,
    #[error("the play has already ended")]
    Ended,
    #[error("`{0}` has no game rule")]
    NoGameRule(&'static str),
}

/// Game rules for one indexed formula under fixed conventions.
#[derive(Clone, Debug)]
pub struct Game<'t> {
    table: &'t FormulaTable,
    config: GameConfig,
}

impl<'t> Game<'t> {
    /// Rejects formulas using weak negation or determinacy, which have no
    /// game rules.
    pub fn new(table: &'t FormulaTable, config: GameConfig) -> Result<Self, GameError> {
        for (_, node) in table.nodes() {
            match node {
                Node::WNot(_) => return Err(GameError::NoGameRule("wnot")),
                Node::Det(_) => return Err(GameError::NoGameRule("det")),
                _ => {}
            }
        }
        Ok(Self { table, config })
    }

    pub fn table(&self) -> &'t FormulaTable {
        self.table
    }

    pub fn config(&self) -> GameConfig {
        self.config
    }

    /// The root position with Eloise verifying.
    pub fn initial_position(
        &self,
        structure: PartialStructure,
        assignment: Assignment,
    ) -> Result<Position, GameError> {
        if let Some((v, _)) = assignment.iter().find(|(_, e)| !structure.contains(*e)) {
            return Err(GameError::AssignmentOutsideDomain(v.to_string()));
        }
        Ok(Position {
            structure,
            assignment,
            node: FormulaTable::ROOT,
            verifier: Role::Eloise,
            table: self.table.fingerprint(),
        })
    }

    fn check(&self, p: &Position) -> Result<(), GameError> {
        if p.table != self.table.fingerprint() {
            return Err(GameError::ForeignPosition);
        }
        if self.table.get(p.node).is_none() {
            return Err(GameError::InvalidNode(p.node));
        }
        Ok(())
    }

    pub fn legal_moves(&self, p: &Position) -> Result<LegalMoves, GameError> {
        self.check(p)?;
        Ok(self.moves_unchecked(p))
    }

    pub(crate) fn moves_unchecked(&self, p: &Position) -> LegalMoves {
        use LegalMoves::{End, Moves};
        let s = &p.structure;
        let verifier_loses = End(p.verifier.opponent().wins());
        match self.table.node(p.node) {
            Node::Rel(..) | Node::Eq(..) => End(self.adjudicate(p)),
            Node::And(..) => Moves(disjuncts(Mover::Falsifier)),
            Node::Or(..) => Moves(disjuncts(Mover::Verifier)),
            Node::Exists(..) if s.domain_size() == 0 => verifier_loses,
            Node::Exists(..) => Moves(witnesses(s, Mover::Verifier)),
            Node::Forall(..) if s.domain_size() == 0 => End(p.verifier.wins()),
            Node::Forall(..) => Moves(witnesses(s, Mover::Falsifier)),
            Node::Not(_) => Moves(vec![forced(Forced::SwapRoles)]),
            Node::InsertElem(x, _) => Moves(vec![forced(Forced::InsertElement(x.clone()))]),
            Node::Claim(i, _) => Moves(vec![forced(Forced::EnterClaim(*i))]),
            Node::DeleteElem(x, _) => match p.assignment.get(x) {
                Some(e) => Moves(vec![forced(Forced::DeleteElement(e))]),
                None if self.config.delete_miss == DeleteMiss::Ignore => {
                    Moves(vec![forced(Forced::SkipDeletion)])
                }
                None => verifier_loses,
            },
            Node::InsertTuple(_, vars, _) => {
                if s.domain_size() == 0 {
                    verifier_loses
                } else {
                    Moves(tuple_choices(s, vars))
                }
            }
            Node::DeleteTuple(r, vars, _) => match self.config.tuple_deletion {
                TupleDeletion::Choose if s.domain_size() == 0 => verifier_loses,
                TupleDeletion::Choose => Moves(tuple_choices(s, vars)),
                TupleDeletion::FromAssignment => {
                    let t: Option<Tuple> = vars.iter().map(|v| p.assignment.get(v)).collect();
                    match t {
                        Some(t) => Moves(vec![forced(Forced::DeleteTuple(r.clone(), t))]),
                        None if self.config.delete_miss == DeleteMiss::Ignore => {
                            Moves(vec![forced(Forced::SkipDeletion)])
                        }
                        None => verifier_loses,
                    }
                }
            },
            Node::ClaimAtom(i) => {
                let binders = self.table.claim_binders(*i);
                if binders.is_empty() {
                    match self.config.claim_unbound {
                        ClaimUnbound::Neither => End(Terminal::Neither),
                        ClaimUnbound::Lose => verifier_loses,
                    }
                } else {
                    Moves(
                        binders
                            .iter()
                            .map(|b| Move::new(Mover::Verifier, Payload::PickClaimBinder(*b)))
                            .collect(),
                    )
                }
            }
            Node::WNot(_) | Node::Det(_) => unreachable!("rejected in Game::new"),
        }
    }

    pub fn apply_move(&self, p: &Position, m: &Move) -> Result<Position, GameError> {
        match self.legal_moves(p)? {
            LegalMoves::End(_) => Err(GameError::Ended),
            LegalMoves::Moves(ms) if ms.contains(m) => Ok(self.apply_unchecked(p, m)),
            LegalMoves::Moves(_) => Err(GameError::IllegalMove),
        }
    }

    /// Successor positions in move order, or the terminal.
    pub fn successors(&self, p: &Position) -> Result<Vec<Position>, Terminal> {
        match self.moves_unchecked(p) {
            LegalMoves::End(t) => Err(t),
            LegalMoves::Moves(ms) => Ok(ms.iter().map(|m| self.apply_unchecked(p, m)).collect()),
        }
    }

    pub(crate) fn apply_unchecked(&self, p: &Position, m: &Move) -> Position {
        let mut next = p.clone();
        match (self.table.node(p.node), &m.payload) {
            (Node::And(l, r) | Node::Or(l, r), Payload::PickDisjunct(side)) => {
                next.node = if *side == Side::Left { *l } else { *r };
            }
            (Node::Exists(x, c) | Node::Forall(x, c), Payload::PickWitness(e)) => {
                next.assignment.set(x, *e);
                next.node = *c;
            }
            (Node::Not(c), Payload::Descend(_)) => {
                next.verifier = p.verifier.opponent();
                next.node = *c;
            }
            (Node::InsertElem(x, c), Payload::Descend(_)) => {
                let (s, u) = p.structure.insert_element();
                next.structure = s;
                next.assignment.set(x, u);
                next.node = *c;
            }
            (Node::DeleteElem(x, c), Payload::Descend(_)) => {
                if let Some(u) = p.assignment.get(x) {
                    next.structure = p
                        .structure
                        .delete_element(u)
                        .expect("assigned elements are in the domain");
                    next.assignment = p.assignment.without_element(u);
                }
                next.node = *c;
            }
            (Node::InsertTuple(r, vars, c), Payload::PickTuple(t)) => {
                bind_all(&mut next.assignment, vars, t);
                next.structure = p
                    .structure
                    .insert_tuple(r, t)
                    .expect("tuple over the domain");
                next.node = *c;
            }
            (Node::DeleteTuple(r, vars, c), Payload::PickTuple(t)) => {
                bind_all(&mut next.assignment, vars, t);
                next.structure = p
                    .structure
                    .delete_tuple(r, t)
                    .expect("tuple over the domain");
                next.node = *c;
            }
            (Node::DeleteTuple(r, vars, c), Payload::Descend(_)) => {
                let t: Option<Tuple> = vars.iter().map(|v| p.assignment.get(v)).collect();
                if let Some(t) = t {
                    next.structure = p
                        .structure
                        .delete_tuple(r, &t)
                        .expect("tuple over the domain");
                }
                next.node = *c;
            }
            (Node::Claim(_, c), Payload::Descend(_)) => next.node = *c,
            (Node::ClaimAtom(_), Payload::PickClaimBinder(b)) => next.node = *b,
            (node, payload) => unreachable!("payload {payload:?} does not fit node {node:?}"),
        }
        next
    }

    /// Outcome of a relational or equality atom: the verifier wins when all
    /// terms are defined and the atom is positive, the falsifier when they
    /// are defined and it is negative, and neither player otherwise.
    pub fn adjudicate_atom(&self, p: &Position) -> Result<Terminal, GameError> {
        self.check(p)?;
        match self.table.node(p.node) {
            Node::Rel(..) | Node::Eq(..) => Ok(self.adjudicate(p)),
            _ => Err(GameError::IllegalMove),
        }
    }

    fn adjudicate(&self, p: &Position) -> Terminal {
        let s = &p.structure;
        let g = &p.assignment;
        let status = match self.table.node(p.node) {
            Node::Rel(r, args) => match args
                .iter()
                .map(|t| s.eval_term(g, t))
                .collect::<Option<Tuple>>()
            {
                Some(t) => s.status(r, &t),
                None => RelStatus::Undefined,
            },
            Node::Eq(a, b) => match (s.eval_term(g, a), s.eval_term(g, b)) {
                (Some(x), Some(y)) if x == y => RelStatus::Positive,
                (Some(_), Some(_)) => RelStatus::Negative,
                _ => RelStatus::Undefined,
            },
            _ => unreachable!("not an atom"),
        };
        match status {
            RelStatus::Positive => p.verifier.wins(),
            RelStatus::Negative => p.verifier.opponent().wins(),
            RelStatus::Undefined => Terminal::Neither,
        }
    }
}

fn forced(what: Forced) -> Move {
    Move::new(Mover::Forced, Payload::Descend(what))
}

fn disjuncts(mover: Mover) -> Vec<Move> {
    vec![
        Move::new(mover, Payload::PickDisjunct(Side::Left)),
        Move::new(mover, Payload::PickDisjunct(Side::Right)),
    ]
}

fn witnesses(s: &PartialStructure, mover: Mover) -> Vec<Move> {
    s.domain()
        .map(|e| Move::new(mover, Payload::PickWitness(e)))
        .collect()
}

/// Tuples the verifier may pick for `vars`; positions holding the same
/// variable get the same element.
fn tuple_choices(s: &PartialStructure, vars: &[Name]) -> Vec<Move> {
    let mut distinct: Vec<&Name> = Vec::new();
    for v in vars {
        if !distinct.contains(&v) {
            distinct.push(v);
        }
    }
    s.tuples(distinct.len())
        .into_iter()
        .map(|values| {
            let t: Tuple = vars
                .iter()
                .map(|v| {
                    values[distinct
                        .iter()
                        .position(|d| *d == v)
                        .expect("collected above")]
                })
                .collect();
            Move::new(Mover::Verifier, Payload::PickTuple(t))
        })
        .collect()
}

fn bind_all(g: &mut Assignment, vars: &[Name], tuple: &[Element]) {
    for (v, e) in vars.iter().zip(tuple) {
        g.set(v, *e);
    }
}
