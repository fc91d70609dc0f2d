use std::fmt::Write;

use super::{Formula, NodeId};

struct Printer {
    out: String,
    next_id: NodeId,
    highlight: Option<NodeId>,
}

impl Printer {
    fn formula(&mut self, f: &Formula) {
        let id = self.next_id;
        self.next_id += 1;
        let marked = self.highlight == Some(id);
        if marked {
            self.out.push_str("[[");
        }
        match f {
            Formula::Rel(r, args) => {
                let _ = write!(self.out, "{r}(");
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    let _ = write!(self.out, "{a}");
                }
                self.out.push(')');
            }
            Formula::Eq(a, b) => {
                let _ = write!(self.out, "{a} = {b}");
            }
            Formula::ClaimAtom(i) => {
                let _ = write!(self.out, "C{i}");
            }
            Formula::Not(a) => self.prefixed("not ", a),
            Formula::WNot(a) => self.prefixed("wnot ", a),
            Formula::Det(a) => self.prefixed("det ", a),
            Formula::And(a, b) => self.binary(a, " & ", b),
            Formula::Or(a, b) => self.binary(a, " | ", b),
            Formula::Exists(v, a) => self.prefixed(&format!("exists {v}. "), a),
            Formula::Forall(v, a) => self.prefixed(&format!("forall {v}. "), a),
            Formula::InsertElem(v, a) => self.prefixed(&format!("insert {v}. "), a),
            Formula::DeleteElem(v, a) => self.prefixed(&format!("delete {v}. "), a),
            Formula::InsertTuple(r, vs, a) => {
                self.prefixed(&format!("insertT {r}({}). ", vs.join(", ")), a)
            }
            Formula::DeleteTuple(r, vs, a) => {
                self.prefixed(&format!("deleteT {r}({}). ", vs.join(", ")), a)
            }
            Formula::Claim(i, a) => self.prefixed(&format!("claim C{i}. "), a),
        }
        if marked {
            self.out.push_str("]]");
        }
    }

    fn prefixed(&mut self, prefix: &str, body: &Formula) {
        self.out.push_str(prefix);
        self.formula(body);
    }

    fn binary(&mut self, a: &Formula, op: &str, b: &Formula) {
        self.out.push('(');
        self.formula(a);
        self.out.push_str(op);
        self.formula(b);
        self.out.push(')');
    }
}

/// Canonical concrete syntax. Re-parses to the identical AST.
pub fn print_formula(formula: &Formula) -> String {
    let mut p = Printer {
        out: String::new(),
        next_id: 0,
        highlight: None,
    };
    p.formula(formula);
    p.out
}

/// Like [`print_formula`] but wraps the subformula occurrence `active`
/// (a [`super::FormulaTable`] node id) in `[[` `]]`.
pub fn print_highlighted(formula: &Formula, active: NodeId) -> String {
    let mut p = Printer {
        out: String::new(),
        next_id: 0,
        highlight: Some(active),
    };
    p.formula(formula);
    p.out
}
