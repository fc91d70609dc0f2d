//! Compositional three-valued semantics for first-order logic over partial
//! structures, with weak negation and the determinacy operator.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::structure::{Assignment, PartialStructure, RelStatus, Tuple};
use crate::syntax::{index_subformulas, Formula, FormulaTable, Node, NodeId};

/// The pair of judgements `M, g ⊨⁺ φ` and `M, g ⊨⁻ φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruthStatus {
    pub plus: bool,
    pub minus: bool,
}

impl TruthStatus {
    pub const TRUE: Self = Self {
        plus: true,
        minus: false,
    };
    pub const FALSE: Self = Self {
        plus: false,
        minus: true,
    };
    pub const UNDEFINED: Self = Self {
        plus: false,
        minus: false,
    };
    pub const BOTH: Self = Self {
        plus: true,
        minus: true,
    };

    pub fn new(plus: bool, minus: bool) -> Self {
        Self { plus, minus }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("`{0}` has no compositional semantics; use the game solver")]
    GameOnly(&'static str),
}

/// Evaluates `formula` under `g`.
///
/// Atoms need every term defined (and, for partial relations, the relation
/// defined on the tuple) to be positive or negative; otherwise both
/// judgements fail. `¬` swaps the judgements, `∧`/`∃` follow the usual
/// strong Kleene clauses, `∨`/`∀` their duals. Weak negation `wnot φ` is
/// positive iff `φ` is not positive and negative iff `φ` is not negative;
/// `det φ` is positive iff `φ` is positive or negative, and negative
/// otherwise.
pub fn evaluate(
    s: &PartialStructure,
    g: &Assignment,
    formula: &Formula,
) -> Result<TruthStatus, EvalError> {
    let table = index_subformulas(formula);
    evaluate_node(s, g, &table, FormulaTable::ROOT)
}

/// Evaluates the subformula at `node` of an already indexed formula.
pub fn evaluate_node(
    s: &PartialStructure,
    g: &Assignment,
    table: &FormulaTable,
    node: NodeId,
) -> Result<TruthStatus, EvalError> {
    for (_, n) in table.nodes() {
        let construct = match n {
            Node::ClaimAtom(_) => "C",
            Node::Claim(..) => "claim",
            Node::InsertElem(..) => "insert",
            Node::DeleteElem(..) => "delete",
            Node::InsertTuple(..) => "insertT",
            Node::DeleteTuple(..) => "deleteT",
            _ => continue,
        };
        return Err(EvalError::GameOnly(construct));
    }
    let mut ev = Evaluator {
        s,
        table,
        memo: HashMap::new(),
    };
    Ok(ev.eval(g, node))
}

struct Evaluator<'a> {
    s: &'a PartialStructure,
    table: &'a FormulaTable,
    memo: HashMap<(NodeId, Assignment), TruthStatus>,
}

impl Evaluator<'_> {
    fn eval(&mut self, g: &Assignment, node: NodeId) -> TruthStatus {
        let key = (node, g.restrict(self.table.free_vars(node)));
        if let Some(hit) = self.memo.get(&key) {
            return *hit;
        }
        let result = self.compute(g, node);
        self.memo.insert(key, result);
        result
    }

    fn compute(&mut self, g: &Assignment, node: NodeId) -> TruthStatus {
        let s = self.s;
        match self.table.node(node) {
            Node::Rel(r, args) => {
                let Some(tuple) = args
                    .iter()
                    .map(|t| s.eval_term(g, t))
                    .collect::<Option<Tuple>>()
                else {
                    return TruthStatus::UNDEFINED;
                };
                match s.status(r, &tuple) {
                    RelStatus::Positive => TruthStatus::TRUE,
                    RelStatus::Negative => TruthStatus::FALSE,
                    RelStatus::Undefined => TruthStatus::UNDEFINED,
                }
            }
            Node::Eq(a, b) => match (s.eval_term(g, a), s.eval_term(g, b)) {
                (Some(x), Some(y)) => TruthStatus::new(x == y, x != y),
                _ => TruthStatus::UNDEFINED,
            },
            &Node::Not(c) => {
                let v = self.eval(g, c);
                TruthStatus::new(v.minus, v.plus)
            }
            &Node::WNot(c) => {
                let v = self.eval(g, c);
                TruthStatus::new(!v.plus, !v.minus)
            }
            &Node::Det(c) => {
                let v = self.eval(g, c);
                TruthStatus::new(v.plus || v.minus, !v.plus && !v.minus)
            }
            &Node::And(l, r) => {
                let (a, b) = (self.eval(g, l), self.eval(g, r));
                TruthStatus::new(a.plus && b.plus, a.minus || b.minus)
            }
            &Node::Or(l, r) => {
                let (a, b) = (self.eval(g, l), self.eval(g, r));
                TruthStatus::new(a.plus || b.plus, a.minus && b.minus)
            }
            Node::Exists(x, c) => {
                let (x, c) = (x.clone(), *c);
                let mut out = TruthStatus::new(false, true);
                for e in s.domain() {
                    let v = self.eval(&g.bind(&x, e), c);
                    out.plus |= v.plus;
                    out.minus &= v.minus;
                }
                out
            }
            Node::Forall(x, c) => {
                let (x, c) = (x.clone(), *c);
                let mut out = TruthStatus::new(true, false);
                for e in s.domain() {
                    let v = self.eval(&g.bind(&x, e), c);
                    out.plus &= v.plus;
                    out.minus |= v.minus;
                }
                out
            }
            Node::ClaimAtom(_)
            | Node::Claim(..)
            | Node::InsertElem(..)
            | Node::DeleteElem(..)
            | Node::InsertTuple(..)
            | Node::DeleteTuple(..) => unreachable!("rejected before evaluation"),
        }
    }
}
