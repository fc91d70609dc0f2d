use std::fmt::Write;

use super::PartialStructure;

/// Deterministic string encoding of a finite structure, used as Turing
/// machine input.
///
/// Layout: `n=<size>;`, then for each relation in name order
/// `<name>:<arity>:` followed by one of `+ - ?` per tuple (tuples in
/// lexicographic order over domain positions) and `;`. Functions follow in
/// name order as `<name>:<arity>:` with a comma separated list holding the
/// value's domain position or `?` per argument tuple, then `;`. Constants
/// close the string as `<name>=<position or ?>;`.
pub fn encode_model(s: &PartialStructure) -> String {
    let mut out = String::new();
    let _ = write!(out, "n={};", s.domain_size());
    for (name, rel) in s.relations() {
        let _ = write!(out, "{name}:{}:", rel.arity);
        for t in s.tuples(rel.arity) {
            out.push(s.status(name, &t).symbol());
        }
        out.push(';');
    }
    for (name, f) in s.functions() {
        let _ = write!(out, "{name}:{}:", f.arity);
        let cells: Vec<String> = s
            .tuples(f.arity)
            .iter()
            .map(|t| match f.entries.get(t).and_then(|v| s.index_of(*v)) {
                Some(i) => i.to_string(),
                None => "?".to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push(';');
    }
    for (name, c) in s.constants() {
        match c.and_then(|e| s.index_of(e)) {
            Some(i) => {
                let _ = write!(out, "{name}={i};");
            }
            None => {
                let _ = write!(out, "{name}=?;");
            }
        }
    }
    out
}
