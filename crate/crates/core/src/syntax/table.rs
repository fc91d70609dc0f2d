use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use super::{print_formula, Formula, Name, Term};

/// Index of a subformula occurrence. Ids follow preorder, so the root is 0.
pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Rel(Name, Vec<Term>),
    Eq(Term, Term),
    ClaimAtom(u32),
    Not(NodeId),
    WNot(NodeId),
    Det(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Exists(Name, NodeId),
    Forall(Name, NodeId),
    InsertElem(Name, NodeId),
    DeleteElem(Name, NodeId),
    InsertTuple(Name, Vec<Name>, NodeId),
    DeleteTuple(Name, Vec<Name>, NodeId),
    Claim(u32, NodeId),
}

/// Flattened view of every subformula occurrence of a root formula.
#[derive(Clone, Debug)]
pub struct FormulaTable {
    root: Formula,
    nodes: Vec<Node>,
    free_vars: Vec<Vec<Name>>,
    claim_binders: BTreeMap<u32, Vec<NodeId>>,
    fingerprint: u64,
}

impl PartialEq for FormulaTable {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl Eq for FormulaTable {}

impl FormulaTable {
    pub const ROOT: NodeId = 0;

    pub fn root(&self) -> &Formula {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn get(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate()
    }

    pub fn free_vars(&self, id: NodeId) -> &[Name] {
        &self.free_vars[id]
    }

    /// Occurrences of `claim Ci. ψ` in source order; empty when `Ci` has no
    /// binder.
    pub fn claim_binders(&self, index: u32) -> &[NodeId] {
        self.claim_binders
            .get(&index)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Stable identifier of the root formula, used to reject positions that
    /// belong to a different table.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Reconstructs the subformula rooted at `id`.
    pub fn subformula(&self, id: NodeId) -> Formula {
        let b = |c: NodeId| Box::new(self.subformula(c));
        match &self.nodes[id] {
            Node::Rel(r, args) => Formula::Rel(r.clone(), args.clone()),
            Node::Eq(a, c) => Formula::Eq(a.clone(), c.clone()),
            Node::ClaimAtom(i) => Formula::ClaimAtom(*i),
            Node::Not(c) => Formula::Not(b(*c)),
            Node::WNot(c) => Formula::WNot(b(*c)),
            Node::Det(c) => Formula::Det(b(*c)),
            Node::And(l, r) => Formula::And(b(*l), b(*r)),
            Node::Or(l, r) => Formula::Or(b(*l), b(*r)),
            Node::Exists(v, c) => Formula::Exists(v.clone(), b(*c)),
            Node::Forall(v, c) => Formula::Forall(v.clone(), b(*c)),
            Node::InsertElem(v, c) => Formula::InsertElem(v.clone(), b(*c)),
            Node::DeleteElem(v, c) => Formula::DeleteElem(v.clone(), b(*c)),
            Node::InsertTuple(r, vs, c) => Formula::InsertTuple(r.clone(), vs.clone(), b(*c)),
            Node::DeleteTuple(r, vs, c) => Formula::DeleteTuple(r.clone(), vs.clone(), b(*c)),
            Node::Claim(i, c) => Formula::Claim(*i, b(*c)),
        }
    }
}

struct Builder {
    nodes: Vec<Node>,
    free_vars: Vec<Vec<Name>>,
    claim_binders: BTreeMap<u32, Vec<NodeId>>,
}

impl Builder {
    fn visit(&mut self, f: &Formula) -> NodeId {
        let id = self.nodes.len();
        // placeholder, patched once children have ids
        self.nodes.push(Node::ClaimAtom(0));
        self.free_vars.push(f.free_vars());
        let node = match f {
            Formula::Rel(r, args) => Node::Rel(r.clone(), args.clone()),
            Formula::Eq(a, b) => Node::Eq(a.clone(), b.clone()),
            Formula::ClaimAtom(i) => Node::ClaimAtom(*i),
            Formula::Not(a) => Node::Not(self.visit(a)),
            Formula::WNot(a) => Node::WNot(self.visit(a)),
            Formula::Det(a) => Node::Det(self.visit(a)),
            Formula::And(a, b) => {
                let l = self.visit(a);
                Node::And(l, self.visit(b))
            }
            Formula::Or(a, b) => {
                let l = self.visit(a);
                Node::Or(l, self.visit(b))
            }
            Formula::Exists(v, a) => Node::Exists(v.clone(), self.visit(a)),
            Formula::Forall(v, a) => Node::Forall(v.clone(), self.visit(a)),
            Formula::InsertElem(v, a) => Node::InsertElem(v.clone(), self.visit(a)),
            Formula::DeleteElem(v, a) => Node::DeleteElem(v.clone(), self.visit(a)),
            Formula::InsertTuple(r, vs, a) => {
                Node::InsertTuple(r.clone(), vs.clone(), self.visit(a))
            }
            Formula::DeleteTuple(r, vs, a) => {
                Node::DeleteTuple(r.clone(), vs.clone(), self.visit(a))
            }
            Formula::Claim(i, a) => {
                self.claim_binders.entry(*i).or_default().push(id);
                Node::Claim(*i, self.visit(a))
            }
        };
        self.nodes[id] = node;
        id
    }
}

pub fn index_subformulas(formula: &Formula) -> FormulaTable {
    let mut builder = Builder {
        nodes: Vec::new(),
        free_vars: Vec::new(),
        claim_binders: BTreeMap::new(),
    };
    builder.visit(formula);
    let digest = Sha256::digest(print_formula(formula).as_bytes());
    let fingerprint = u64::from_be_bytes(digest[..8].try_into().expect("8 bytes"));
    FormulaTable {
        root: formula.clone(),
        nodes: builder.nodes,
        free_vars: builder.free_vars,
        claim_binders: builder.claim_binders,
        fingerprint,
    }
}
