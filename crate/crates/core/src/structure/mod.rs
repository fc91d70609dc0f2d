//! Finite models with partial functions, partial constants and
//! three-valued relations, plus the element/tuple mutation operators.
//!
//! Structures are persistent values: tables live behind `Arc` and are only
//! copied when a mutation touches them, so cloning a structure for a new
//! game position is cheap.

mod encode;
mod model_file;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::syntax::{Name, RelationKind, Term, Vocabulary};

pub use encode::encode_model;
pub use model_file::{parse_model, write_model, ModelError};

/// Element id. Ids are assigned in declaration order and then insertion
/// order, which is also the order used by [`encode_model`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub u32);

pub type Tuple = Vec<Element>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationMode {
    /// Explicit positive and negative parts; anything else is undefined.
    Partial,
    /// Classical: everything outside the positive part is negative.
    Total,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelStatus {
    Positive,
    Negative,
    Undefined,
}

impl RelStatus {
    pub fn symbol(self) -> char {
        match self {
            RelStatus::Positive => '+',
            RelStatus::Negative => '-',
            RelStatus::Undefined => '?',
        }
    }
}

/// Status given to tuples that mention an inserted element in a partial
/// relation. Total relations always treat them as negative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreshStatus {
    #[default]
    Undefined,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationTable {
    pub arity: usize,
    pub mode: RelationMode,
    pub kind: RelationKind,
    pub positive: BTreeSet<Tuple>,
    pub negative: BTreeSet<Tuple>,
}

impl RelationTable {
    pub fn new(arity: usize, mode: RelationMode, kind: RelationKind) -> Self {
        Self {
            arity,
            mode,
            kind,
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    pub arity: usize,
    pub entries: BTreeMap<Tuple, Element>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("element {0} is not in the domain")]
    NotInDomain(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("`{name}` has arity {expected}, got a tuple of length {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("element name `{0}` is already used")]
    DuplicateElement(String),
    #[error("tuple is listed as both positive and negative in `{0}`")]
    Contradiction(String),
    #[error("total relation `{0}` cannot have an explicit negative part")]
    TotalNegative(String),
    #[error("function `{0}` has conflicting entries for the same arguments")]
    ConflictingEntry(String),
}

/// Partial map from variables to domain elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(BTreeMap<Name, Element>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<Element> {
        self.0.get(var).copied()
    }

    pub fn contains(&self, var: &str) -> bool {
        self.0.contains_key(var)
    }

    /// `g[var ↦ element]`
    pub fn bind(&self, var: &Name, element: Element) -> Self {
        let mut next = self.clone();
        next.0.insert(var.clone(), element);
        next
    }

    pub fn set(&mut self, var: &Name, element: Element) {
        self.0.insert(var.clone(), element);
    }

    /// Removes every variable mapped to `element`.
    pub fn without_element(&self, element: Element) -> Self {
        Self(
            self.0
                .iter()
                .filter(|(_, e)| **e != element)
                .map(|(v, e)| (v.clone(), *e))
                .collect(),
        )
    }

    pub fn restrict(&self, vars: &[Name]) -> Self {
        Self(
            self.0
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(v, e)| (v.clone(), *e))
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, Element)> {
        self.0.iter().map(|(v, e)| (v, *e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Name, Element)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Name, Element)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialStructure {
    names: Arc<Vec<Name>>,
    declared: u32,
    domain: Arc<BTreeSet<Element>>,
    relations: BTreeMap<Name, Arc<RelationTable>>,
    functions: BTreeMap<Name, Arc<FunctionTable>>,
    constants: BTreeMap<Name, Option<Element>>,
    fresh_counter: u32,
    fresh_status: FreshStatus,
}

impl PartialStructure {
    /// Builds a structure with the given element names and empty tables for
    /// every symbol of `vocab`. Relations default to partial mode.
    pub fn new(vocab: &Vocabulary, elements: &[&str]) -> Result<Self, StructureError> {
        let mut names: Vec<Name> = Vec::with_capacity(elements.len());
        for e in elements {
            if names.iter().any(|n| &**n == *e) {
                return Err(StructureError::DuplicateElement(e.to_string()));
            }
            names.push(Name::from(*e));
        }
        let n = names.len() as u32;
        Ok(Self {
            names: Arc::new(names),
            declared: n,
            domain: Arc::new((0..n).map(Element).collect()),
            relations: vocab
                .relations()
                .map(|(name, arity, kind)| {
                    (
                        name.clone(),
                        Arc::new(RelationTable::new(arity, RelationMode::Partial, kind)),
                    )
                })
                .collect(),
            functions: vocab
                .functions()
                .map(|(name, arity)| {
                    (
                        name.clone(),
                        Arc::new(FunctionTable {
                            arity,
                            entries: BTreeMap::new(),
                        }),
                    )
                })
                .collect(),
            constants: vocab.constants().map(|c| (c.clone(), None)).collect(),
            fresh_counter: 0,
            fresh_status: FreshStatus::Undefined,
        })
    }

    /// Structure over an empty vocabulary.
    pub fn bare(elements: &[&str]) -> Self {
        Self::new(&Vocabulary::new(), elements).expect("distinct element names")
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::new();
        for (name, rel) in &self.relations {
            v.add_relation(name, rel.arity, rel.kind)
                .expect("consistent tables");
        }
        for (name, f) in &self.functions {
            v.add_function(name, f.arity).expect("consistent tables");
        }
        for name in self.constants.keys() {
            v.add_constant(name).expect("consistent tables");
        }
        v
    }

    pub fn with_fresh_status(mut self, status: FreshStatus) -> Self {
        self.fresh_status = status;
        self
    }

    pub fn fresh_status(&self) -> FreshStatus {
        self.fresh_status
    }

    pub fn domain(&self) -> impl ExactSizeIterator<Item = Element> + '_ {
        self.domain.iter().copied()
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.domain.contains(&e)
    }

    pub fn name(&self, e: Element) -> &str {
        &self.names[e.0 as usize]
    }

    /// Looks up a current domain element by name.
    pub fn element(&self, name: &str) -> Option<Element> {
        self.domain.iter().copied().find(|e| self.name(*e) == name)
    }

    /// Position of `e` in the current domain order.
    pub fn index_of(&self, e: Element) -> Option<usize> {
        self.domain.iter().position(|x| *x == e)
    }

    pub fn is_inserted(&self, e: Element) -> bool {
        e.0 >= self.declared
    }

    pub fn relation(&self, name: &str) -> Option<&RelationTable> {
        self.relations.get(name).map(|r| &**r)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&Name, &RelationTable)> {
        self.relations.iter().map(|(n, r)| (n, &**r))
    }

    pub fn function(&self, name: &str) -> Option<&FunctionTable> {
        self.functions.get(name).map(|f| &**f)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&Name, &FunctionTable)> {
        self.functions.iter().map(|(n, f)| (n, &**f))
    }

    pub fn constant(&self, name: &str) -> Option<Element> {
        self.constants.get(name).copied().flatten()
    }

    pub fn constants(&self) -> impl Iterator<Item = (&Name, Option<Element>)> {
        self.constants.iter().map(|(n, c)| (n, *c))
    }

    fn check_tuple(
        &self,
        rel: &str,
        arity: usize,
        tuple: &[Element],
    ) -> Result<(), StructureError> {
        if tuple.len() != arity {
            return Err(StructureError::Arity {
                name: rel.to_string(),
                expected: arity,
                found: tuple.len(),
            });
        }
        for e in tuple {
            if !self.contains(*e) {
                return Err(StructureError::NotInDomain(format!("{e:?}")));
            }
        }
        Ok(())
    }

    fn relation_mut(&mut self, name: &str) -> Result<&mut RelationTable, StructureError> {
        self.relations
            .get_mut(name)
            .map(Arc::make_mut)
            .ok_or_else(|| StructureError::UnknownRelation(name.to_string()))
    }

    pub fn set_relation_mode(
        &mut self,
        name: &str,
        mode: RelationMode,
    ) -> Result<(), StructureError> {
        let rel = self.relation_mut(name)?;
        if mode == RelationMode::Total && !rel.negative.is_empty() {
            return Err(StructureError::TotalNegative(name.to_string()));
        }
        rel.mode = mode;
        Ok(())
    }

    /// Declares `tuple` positive (`true`) or negative (`false`) during
    /// construction. Unlike the mutation operators, contradicting an earlier
    /// declaration is an error.
    pub fn declare_tuple(
        &mut self,
        rel: &str,
        tuple: Tuple,
        positive: bool,
    ) -> Result<(), StructureError> {
        let arity = self
            .relation(rel)
            .ok_or_else(|| StructureError::UnknownRelation(rel.to_string()))?
            .arity;
        self.check_tuple(rel, arity, &tuple)?;
        let table = self.relation_mut(rel)?;
        if !positive && table.mode == RelationMode::Total {
            return Err(StructureError::TotalNegative(rel.to_string()));
        }
        let (own, other) = if positive {
            (&mut table.positive, &table.negative)
        } else {
            (&mut table.negative, &table.positive)
        };
        if other.contains(&tuple) {
            return Err(StructureError::Contradiction(rel.to_string()));
        }
        own.insert(tuple);
        Ok(())
    }

    pub fn define_function(
        &mut self,
        name: &str,
        args: Tuple,
        value: Element,
    ) -> Result<(), StructureError> {
        let arity = self
            .function(name)
            .ok_or_else(|| StructureError::UnknownFunction(name.to_string()))?
            .arity;
        self.check_tuple(name, arity, &args)?;
        if !self.contains(value) {
            return Err(StructureError::NotInDomain(format!("{value:?}")));
        }
        let table = Arc::make_mut(self.functions.get_mut(name).expect("checked above"));
        match table.entries.get(&args) {
            Some(v) if *v != value => Err(StructureError::ConflictingEntry(name.to_string())),
            _ => {
                table.entries.insert(args, value);
                Ok(())
            }
        }
    }

    pub fn define_constant(
        &mut self,
        name: &str,
        value: Option<Element>,
    ) -> Result<(), StructureError> {
        if let Some(v) = value {
            if !self.contains(v) {
                return Err(StructureError::NotInDomain(format!("{v:?}")));
            }
        }
        let slot = self
            .constants
            .get_mut(name)
            .ok_or_else(|| StructureError::UnknownConstant(name.to_string()))?;
        *slot = value;
        Ok(())
    }

    /// Three-valued membership of `tuple` in `rel`. Unknown relations and
    /// tuples outside the domain are reported as undefined.
    pub fn status(&self, rel: &str, tuple: &[Element]) -> RelStatus {
        let Some(table) = self.relation(rel) else {
            return RelStatus::Undefined;
        };
        if table.positive.contains(tuple) {
            RelStatus::Positive
        } else if table.mode == RelationMode::Total
            || table.negative.contains(tuple)
            || (self.fresh_status == FreshStatus::Negative
                && tuple.iter().any(|e| self.is_inserted(*e)))
        {
            RelStatus::Negative
        } else {
            RelStatus::Undefined
        }
    }

    /// Value of `term` under `g`, or `None` when it is undefined.
    pub fn eval_term(&self, g: &Assignment, term: &Term) -> Option<Element> {
        match term {
            Term::Var(v) => g.get(v),
            Term::Const(c) => self.constant(c),
            Term::Apply(f, args) => {
                let args = args
                    .iter()
                    .map(|a| self.eval_term(g, a))
                    .collect::<Option<Tuple>>()?;
                self.function(f)?.entries.get(&args).copied()
            }
        }
    }

    /// Adds a fresh isolated element. No table changes; the input is left
    /// untouched.
    pub fn insert_element(&self) -> (Self, Element) {
        let mut next = self.clone();
        let mut counter = next.fresh_counter;
        let name = loop {
            let candidate = format!("u{counter}");
            counter += 1;
            if !next.names.iter().any(|n| **n == *candidate) {
                break candidate;
            }
        };
        next.fresh_counter = counter;
        let id = Element(next.names.len() as u32);
        Arc::make_mut(&mut next.names).push(Name::from(name));
        Arc::make_mut(&mut next.domain).insert(id);
        (next, id)
    }

    /// Removes `e` and everything that mentions it: relation tuples (both
    /// parts), function entries by argument or value, and constants.
    pub fn delete_element(&self, e: Element) -> Result<Self, StructureError> {
        if !self.contains(e) {
            return Err(StructureError::NotInDomain(format!("{e:?}")));
        }
        let mut next = self.clone();
        Arc::make_mut(&mut next.domain).remove(&e);
        for rel in next.relations.values_mut() {
            let touches = rel
                .positive
                .iter()
                .chain(rel.negative.iter())
                .any(|t| t.contains(&e));
            if touches {
                let rel = Arc::make_mut(rel);
                rel.positive.retain(|t| !t.contains(&e));
                rel.negative.retain(|t| !t.contains(&e));
            }
        }
        for f in next.functions.values_mut() {
            let touches = f
                .entries
                .iter()
                .any(|(args, v)| *v == e || args.contains(&e));
            if touches {
                Arc::make_mut(f)
                    .entries
                    .retain(|args, v| *v != e && !args.contains(&e));
            }
        }
        for c in next.constants.values_mut() {
            if *c == Some(e) {
                *c = None;
            }
        }
        Ok(next)
    }

    /// Makes `tuple` positively belong to `rel`, whatever its previous status.
    pub fn insert_tuple(&self, rel: &str, tuple: &[Element]) -> Result<Self, StructureError> {
        let arity = self
            .relation(rel)
            .ok_or_else(|| StructureError::UnknownRelation(rel.to_string()))?
            .arity;
        self.check_tuple(rel, arity, tuple)?;
        let mut next = self.clone();
        let table = next.relation_mut(rel)?;
        table.negative.remove(tuple);
        table.positive.insert(tuple.to_vec());
        Ok(next)
    }

    /// Makes `tuple` not belong to `rel`, whether it was positive or
    /// undefined. Total relations only lose the positive entry.
    pub fn delete_tuple(&self, rel: &str, tuple: &[Element]) -> Result<Self, StructureError> {
        let arity = self
            .relation(rel)
            .ok_or_else(|| StructureError::UnknownRelation(rel.to_string()))?
            .arity;
        self.check_tuple(rel, arity, tuple)?;
        let mut next = self.clone();
        let table = next.relation_mut(rel)?;
        table.positive.remove(tuple);
        if table.mode == RelationMode::Partial {
            table.negative.insert(tuple.to_vec());
        }
        Ok(next)
    }

    /// All tuples of length `arity` over the current domain, in
    /// lexicographic domain order.
    pub fn tuples(&self, arity: usize) -> Vec<Tuple> {
        let mut out: Vec<Tuple> = vec![Vec::with_capacity(arity)];
        for _ in 0..arity {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    self.domain.iter().map(move |e| {
                        let mut t = prefix.clone();
                        t.push(*e);
                        t
                    })
                })
                .collect();
        }
        out
    }

    pub fn format_tuple(&self, tuple: &[Element]) -> String {
        let names: Vec<&str> = tuple.iter().map(|e| self.name(*e)).collect();
        format!("({})", names.join(","))
    }

    /// Canonical text used as the structure part of position identities.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let dom: Vec<&str> = self.domain().map(|e| self.name(e)).collect();
        s.push_str(&format!("dom[{}]", dom.join(",")));
        for (name, rel) in &self.relations {
            s.push_str(&format!(";{name}"));
            for t in &rel.positive {
                s.push_str(&format!("+{}", self.format_tuple(t)));
            }
            for t in &rel.negative {
                s.push_str(&format!("-{}", self.format_tuple(t)));
            }
        }
        for (name, f) in &self.functions {
            s.push_str(&format!(";{name}"));
            for (args, v) in &f.entries {
                s.push_str(&format!("{}>{}", self.format_tuple(args), self.name(*v)));
            }
        }
        for (name, c) in &self.constants {
            match c {
                Some(e) => s.push_str(&format!(";{name}={}", self.name(*e))),
                None => s.push_str(&format!(";{name}=?")),
            }
        }
        s
    }
}

impl fmt::Display for PartialStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_model(self))
    }
}
