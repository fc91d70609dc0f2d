//! Abstract syntax for first-order logic extended with model mutation
//! operators and claim binders.

mod natural;
mod parse;
mod print;
mod table;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use natural::render_natural_language;
pub use parse::{parse_formula, ParseError, ParseErrorKind};
pub use print::{print_formula, print_highlighted};
pub use table::{index_subformulas, FormulaTable, Node, NodeId};

/// Interned identifier used for variables and vocabulary symbols.
pub type Name = Arc<str>;

/// Whether a relation symbol comes from the declared vocabulary or is an
/// auxiliary scratch relation that starts out empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    Declared,
    Auxiliary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Relation { arity: usize, kind: RelationKind },
    Function { arity: usize },
    Constant,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum VocabularyError {
    #[error("symbol `{0}` is declared more than once")]
    Duplicate(String),
    #[error("symbol `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("`{0}` is reserved and cannot name a symbol")]
    Reserved(String),
}

/// Relation, function and constant symbols. Names are unique across all
/// three categories.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    symbols: BTreeMap<Name, Symbol>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    fn declare(&mut self, name: &str, symbol: Symbol) -> Result<(), VocabularyError> {
        if is_reserved(name) {
            return Err(VocabularyError::Reserved(name.to_string()));
        }
        if self.symbols.contains_key(name) {
            return Err(VocabularyError::Duplicate(name.to_string()));
        }
        self.symbols.insert(Name::from(name), symbol);
        Ok(())
    }

    pub fn add_relation(
        &mut self,
        name: &str,
        arity: usize,
        kind: RelationKind,
    ) -> Result<(), VocabularyError> {
        if arity == 0 {
            return Err(VocabularyError::ZeroArity(name.to_string()));
        }
        self.declare(name, Symbol::Relation { arity, kind })
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), VocabularyError> {
        if arity == 0 {
            return Err(VocabularyError::ZeroArity(name.to_string()));
        }
        self.declare(name, Symbol::Function { arity })
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), VocabularyError> {
        self.declare(name, Symbol::Constant)
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> Self {
        self.add_relation(name, arity, RelationKind::Declared)
            .expect("valid relation declaration");
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.add_function(name, arity)
            .expect("valid function declaration");
        self
    }

    pub fn with_constant(mut self, name: &str) -> Self {
        self.add_constant(name).expect("valid constant declaration");
        self
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.symbols.get(name).copied()
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        match self.lookup(name)? {
            Symbol::Relation { arity, .. } => Some(arity),
            _ => None,
        }
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        match self.lookup(name)? {
            Symbol::Function { arity } => Some(arity),
            _ => None,
        }
    }

    pub fn is_constant(&self, name: &str) -> bool {
        matches!(self.lookup(name), Some(Symbol::Constant))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&Name, usize, RelationKind)> {
        self.symbols.iter().filter_map(|(n, s)| match *s {
            Symbol::Relation { arity, kind } => Some((n, arity, kind)),
            _ => None,
        })
    }

    pub fn functions(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.symbols.iter().filter_map(|(n, s)| match *s {
            Symbol::Function { arity } => Some((n, arity)),
            _ => None,
        })
    }

    pub fn constants(&self) -> impl Iterator<Item = &Name> {
        self.symbols
            .iter()
            .filter_map(|(n, s)| matches!(s, Symbol::Constant).then_some(n))
    }
}

pub(crate) const KEYWORDS: &[&str] = &[
    "not", "wnot", "det", "exists", "forall", "insert", "delete", "insertT", "deleteT", "claim",
];

/// Keywords and claim names (`C` followed by digits) cannot be used as
/// identifiers.
pub fn is_reserved(name: &str) -> bool {
    KEYWORDS.contains(&name) || is_claim_name(name)
}

pub(crate) fn is_claim_name(name: &str) -> bool {
    name.len() > 1 && name.starts_with('C') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Const(Name),
    Apply(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Name::from(name))
    }

    pub fn constant(name: &str) -> Self {
        Term::Const(Name::from(name))
    }

    pub fn apply(name: &str, args: Vec<Term>) -> Self {
        Term::Apply(Name::from(name), args)
    }

    fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Apply(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(n) | Term::Const(n) => f.write_str(n),
            Term::Apply(n, args) => {
                write!(f, "{n}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Rel(Name, Vec<Term>),
    Eq(Term, Term),
    ClaimAtom(u32),
    Not(Box<Formula>),
    /// Weak (contradictory) negation. Compositional semantics only.
    WNot(Box<Formula>),
    /// Determinacy operator. Compositional semantics only.
    Det(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Name, Box<Formula>),
    Forall(Name, Box<Formula>),
    InsertElem(Name, Box<Formula>),
    DeleteElem(Name, Box<Formula>),
    InsertTuple(Name, Vec<Name>, Box<Formula>),
    DeleteTuple(Name, Vec<Name>, Box<Formula>),
    Claim(u32, Box<Formula>),
}

/// Convenience constructors; mostly used by tests and the curated suites.
impl Formula {
    pub fn rel(name: &str, args: Vec<Term>) -> Self {
        Formula::Rel(Name::from(name), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn wnot(inner: Formula) -> Self {
        Formula::WNot(Box::new(inner))
    }

    pub fn det(inner: Formula) -> Self {
        Formula::Det(Box::new(inner))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Exists(Name::from(var), Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Forall(Name::from(var), Box::new(body))
    }

    pub fn insert_elem(var: &str, body: Formula) -> Self {
        Formula::InsertElem(Name::from(var), Box::new(body))
    }

    pub fn delete_elem(var: &str, body: Formula) -> Self {
        Formula::DeleteElem(Name::from(var), Box::new(body))
    }

    pub fn insert_tuple(rel: &str, vars: &[&str], body: Formula) -> Self {
        Formula::InsertTuple(
            Name::from(rel),
            vars.iter().map(|v| Name::from(*v)).collect(),
            Box::new(body),
        )
    }

    pub fn delete_tuple(rel: &str, vars: &[&str], body: Formula) -> Self {
        Formula::DeleteTuple(
            Name::from(rel),
            vars.iter().map(|v| Name::from(*v)).collect(),
            Box::new(body),
        )
    }

    pub fn claim(index: u32, body: Formula) -> Self {
        Formula::Claim(index, Box::new(body))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Rel(..) | Formula::Eq(..) | Formula::ClaimAtom(_) => vec![],
            Formula::Not(a)
            | Formula::WNot(a)
            | Formula::Det(a)
            | Formula::Exists(_, a)
            | Formula::Forall(_, a)
            | Formula::InsertElem(_, a)
            | Formula::DeleteElem(_, a)
            | Formula::InsertTuple(_, _, a)
            | Formula::DeleteTuple(_, _, a)
            | Formula::Claim(_, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        }
    }

    /// Number of constructors (terms not counted).
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    fn any(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    /// True when the formula uses only the compositional fragment
    /// (no mutation operators, no claims).
    pub fn is_compositional(&self) -> bool {
        !self.any(&|f| {
            matches!(
                f,
                Formula::ClaimAtom(_)
                    | Formula::Claim(..)
                    | Formula::InsertElem(..)
                    | Formula::DeleteElem(..)
                    | Formula::InsertTuple(..)
                    | Formula::DeleteTuple(..)
            )
        })
    }

    /// True when the formula has game rules for every constructor, i.e.
    /// contains no weak negation or determinacy operator.
    pub fn is_game_playable(&self) -> bool {
        !self.any(&|f| matches!(f, Formula::WNot(_) | Formula::Det(_)))
    }

    pub fn contains_element_insertion(&self) -> bool {
        self.any(&|f| matches!(f, Formula::InsertElem(..)))
    }

    /// Free variables in first-occurrence order. Quantifiers and the
    /// mutation operators all bind their variables.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        let mut push_terms = |terms: &mut dyn Iterator<Item = &Term>, bound: &Vec<Name>| {
            let mut vs = Vec::new();
            for t in terms {
                t.collect_vars(&mut vs);
            }
            for v in vs {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Rel(_, args) => push_terms(&mut args.iter(), bound),
            Formula::Eq(a, b) => push_terms(&mut [a, b].into_iter(), bound),
            Formula::ClaimAtom(_) => {}
            Formula::Not(a) | Formula::WNot(a) | Formula::Det(a) | Formula::Claim(_, a) => {
                a.collect_free(bound, out)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, a)
            | Formula::Forall(v, a)
            | Formula::InsertElem(v, a)
            | Formula::DeleteElem(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            Formula::InsertTuple(_, vs, a) | Formula::DeleteTuple(_, vs, a) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                a.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WellFormednessError {
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("`{name}` expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("`{0}` is not allowed inside insertion, deletion or claim constructs")]
    CompositionalOnly(&'static str),
}

/// Checks symbol usage against `vocab` and that weak negation and
/// determinacy stay out of the mutation/claim constructs.
pub fn check_well_formed(formula: &Formula, vocab: &Vocabulary) -> Result<(), WellFormednessError> {
    fn term(t: &Term, vocab: &Vocabulary) -> Result<(), WellFormednessError> {
        if let Term::Apply(f, args) = t {
            let expected = vocab
                .function_arity(f)
                .ok_or_else(|| WellFormednessError::UnknownFunction(f.to_string()))?;
            if expected != args.len() {
                return Err(WellFormednessError::Arity {
                    name: f.to_string(),
                    expected,
                    found: args.len(),
                });
            }
            for a in args {
                term(a, vocab)?;
            }
        }
        Ok(())
    }
    fn relation(name: &Name, found: usize, vocab: &Vocabulary) -> Result<(), WellFormednessError> {
        let expected = vocab
            .relation_arity(name)
            .ok_or_else(|| WellFormednessError::UnknownRelation(name.to_string()))?;
        if expected != found {
            return Err(WellFormednessError::Arity {
                name: name.to_string(),
                expected,
                found,
            });
        }
        Ok(())
    }
    fn go(f: &Formula, vocab: &Vocabulary, in_l: bool) -> Result<(), WellFormednessError> {
        match f {
            Formula::Rel(r, args) => {
                relation(r, args.len(), vocab)?;
                args.iter().try_for_each(|a| term(a, vocab))
            }
            Formula::Eq(a, b) => {
                term(a, vocab)?;
                term(b, vocab)
            }
            Formula::ClaimAtom(_) => Ok(()),
            Formula::WNot(_) if in_l => Err(WellFormednessError::CompositionalOnly("wnot")),
            Formula::Det(_) if in_l => Err(WellFormednessError::CompositionalOnly("det")),
            Formula::Not(a) | Formula::WNot(a) | Formula::Det(a) => go(a, vocab, in_l),
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, vocab, in_l)?;
                go(b, vocab, in_l)
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => go(a, vocab, in_l),
            Formula::InsertElem(_, a) | Formula::DeleteElem(_, a) | Formula::Claim(_, a) => {
                go(a, vocab, true)
            }
            Formula::InsertTuple(r, vs, a) | Formula::DeleteTuple(r, vs, a) => {
                relation(r, vs.len(), vocab)?;
                go(a, vocab, true)
            }
        }
    }
    go(formula, vocab, false)
}
