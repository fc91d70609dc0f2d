//! JSON views of game positions, shared by the HTTP API and `play`.

use std::collections::BTreeMap;

use gts_core::game::{Game, LegalMoves, Position, Role, Terminal};
use gts_core::structure::RelationMode;
use gts_core::syntax::{print_formula, print_highlighted};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TupleStatus {
    pub tuple: Vec<String>,
    /// `+`, `-` or `?`.
    pub status: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RelationView {
    pub name: String,
    pub arity: usize,
    pub mode: String,
    /// Every tuple over the current domain, in lexicographic order.
    pub tuples: Vec<TupleStatus>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FunctionEntry {
    pub args: Vec<String>,
    pub value: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FunctionView {
    pub name: String,
    pub arity: usize,
    pub entries: Vec<FunctionEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct PositionView {
    pub hash: String,
    pub domain: Vec<String>,
    pub relations: Vec<RelationView>,
    pub functions: Vec<FunctionView>,
    pub constants: BTreeMap<String, Option<String>>,
    pub assignment: BTreeMap<String, String>,
    /// Whole formula with the active subformula wrapped in `[[ ]]`.
    pub formula: String,
    pub subformula: String,
    pub node: usize,
    pub verifier: Role,
    /// Player to move; `None` when the move is forced or the play is over.
    pub to_move: Option<Role>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ChoiceView {
    pub index: usize,
    pub description: String,
    pub player: Option<Role>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TerminalView {
    pub outcome: Terminal,
    pub winner: Option<Role>,
    pub message: String,
}

impl From<Terminal> for TerminalView {
    fn from(t: Terminal) -> Self {
        Self {
            outcome: t,
            winner: t.winner(),
            message: t.to_string(),
        }
    }
}

pub fn position_view(game: &Game<'_>, p: &Position) -> PositionView {
    let s = &p.structure;
    let names =
        |t: &[gts_core::Element]| t.iter().map(|e| s.name(*e).to_string()).collect::<Vec<_>>();
    let relations = s
        .relations()
        .map(|(name, table)| RelationView {
            name: name.to_string(),
            arity: table.arity,
            mode: match table.mode {
                RelationMode::Partial => "partial".into(),
                RelationMode::Total => "total".into(),
            },
            tuples: s
                .tuples(table.arity)
                .into_iter()
                .map(|t| TupleStatus {
                    status: s.status(name, &t).symbol().to_string(),
                    tuple: names(&t),
                })
                .collect(),
        })
        .collect();
    let functions = s
        .functions()
        .map(|(name, f)| FunctionView {
            name: name.to_string(),
            arity: f.arity,
            entries: f
                .entries
                .iter()
                .map(|(args, v)| FunctionEntry {
                    args: names(args),
                    value: s.name(*v).to_string(),
                })
                .collect(),
        })
        .collect();
    let table = game.table();
    let to_move = match game.legal_moves(p) {
        Ok(LegalMoves::Moves(ms)) => ms[0].player(p),
        _ => None,
    };
    PositionView {
        hash: p.hash_id(),
        domain: s.domain().map(|e| s.name(e).to_string()).collect(),
        relations,
        functions,
        constants: s
            .constants()
            .map(|(n, c)| (n.to_string(), c.map(|e| s.name(e).to_string())))
            .collect(),
        assignment: p
            .assignment
            .iter()
            .map(|(v, e)| (v.to_string(), s.name(e).to_string()))
            .collect(),
        formula: print_highlighted(table.root(), p.node),
        subformula: print_formula(&table.subformula(p.node)),
        node: p.node,
        verifier: p.verifier,
        to_move,
    }
}

/// Legal moves at `p`, or how the play ended.
pub fn choices(game: &Game<'_>, p: &Position) -> (Vec<ChoiceView>, Option<TerminalView>) {
    match game.legal_moves(p).expect("positions come from this game") {
        LegalMoves::End(t) => (vec![], Some(t.into())),
        LegalMoves::Moves(ms) => (
            ms.iter()
                .enumerate()
                .map(|(index, m)| ChoiceView {
                    index,
                    description: m.describe(p),
                    player: m.player(p),
                })
                .collect(),
            None,
        ),
    }
}
