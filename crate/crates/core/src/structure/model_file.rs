//! Line-oriented model format.
//!
//! ```text
//! # comment
//! domain: a b c
//! relation R/2 partial
//!   + (a,b) (b,c)
//!   - (a,a)
//! relation S/1 total
//!   + (a)
//! function f/1:
//!   (a) -> b
//! constant c0 = a
//! constant c1 = undef
//! aux X/2
//! ```

use std::fmt::Write;

use super::{Element, PartialStructure, RelationMode, StructureError, Tuple};
use crate::syntax::{is_identifier, RelationKind, Vocabulary, VocabularyError};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ModelError {
    pub line: usize,
    pub message: String,
}

enum Block {
    None,
    Relation(String),
    Function(String),
}

enum Decl {
    Mode(String, RelationMode),
    Constant(String, Option<String>),
}

fn err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError {
        line,
        message: message.into(),
    }
}

fn parse_signature(line: usize, text: &str) -> Result<(String, usize), ModelError> {
    let (name, arity) = text
        .split_once('/')
        .ok_or_else(|| err(line, format!("expected NAME/ARITY, found `{text}`")))?;
    let name = name.trim();
    if !is_identifier(name) {
        return Err(err(line, format!("invalid symbol name `{name}`")));
    }
    let arity = arity
        .trim()
        .parse::<usize>()
        .map_err(|_| err(line, format!("invalid arity in `{text}`")))?;
    Ok((name.to_string(), arity))
}

/// Splits `(a,b) (c,d)` into element-name tuples.
fn parse_tuples(line: usize, text: &str) -> Result<Vec<Vec<String>>, ModelError> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner_end = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')'))
            .ok_or_else(|| err(line, format!("expected a tuple like (a,b), found `{rest}`")))?;
        let inner = &rest[1..=inner_end];
        let items: Vec<String> = inner
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        out.push(items);
        rest = rest[inner_end + 2..].trim_start();
    }
    Ok(out)
}

fn vocab_err(line: usize) -> impl Fn(VocabularyError) -> ModelError {
    move |e| err(line, e.to_string())
}

fn structure_err(line: usize) -> impl Fn(StructureError) -> ModelError {
    move |e| err(line, e.to_string())
}

/// Parses a model file into its vocabulary and structure.
pub fn parse_model(text: &str) -> Result<(Vocabulary, PartialStructure), ModelError> {
    let mut vocab = Vocabulary::new();
    let mut domain: Option<Vec<String>> = None;
    let mut domain_line = 0;
    let mut decls: Vec<(usize, Decl)> = Vec::new();
    // (line, relation, positive?, tuple) / (line, function, args, value)
    let mut tuples: Vec<(usize, String, bool, Vec<String>)> = Vec::new();
    let mut entries: Vec<(usize, String, Vec<String>, String)> = Vec::new();
    let mut block = Block::None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indented = content.starts_with([' ', '\t']);
        let content = content.trim();
        if indented {
            match &block {
                Block::Relation(rel) => {
                    let (positive, rest) = if let Some(r) = content.strip_prefix('+') {
                        (true, r)
                    } else if let Some(r) = content.strip_prefix('-') {
                        (false, r)
                    } else {
                        return Err(err(line, "relation lines must start with `+` or `-`"));
                    };
                    for t in parse_tuples(line, rest)? {
                        tuples.push((line, rel.clone(), positive, t));
                    }
                }
                Block::Function(f) => {
                    let (args, value) = content
                        .split_once("->")
                        .ok_or_else(|| err(line, "function lines look like `(a) -> b`"))?;
                    let mut args = parse_tuples(line, args)?;
                    if args.len() != 1 {
                        return Err(err(line, "expected exactly one argument tuple"));
                    }
                    entries.push((line, f.clone(), args.remove(0), value.trim().to_string()));
                }
                Block::None => {
                    return Err(err(
                        line,
                        "indented line outside a relation or function block",
                    ))
                }
            }
            continue;
        }
        block = Block::None;
        let (keyword, rest) = content.split_once([' ', ':']).unwrap_or((content, ""));
        let rest = rest.trim().trim_start_matches(':').trim();
        match keyword {
            "domain" => {
                if domain.is_some() {
                    return Err(err(line, "domain declared twice"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
                    return Err(err(line, format!("invalid element name `{bad}`")));
                }
                domain = Some(names);
                domain_line = line;
            }
            "relation" => {
                let mut parts = rest.split_whitespace();
                let sig = parts
                    .next()
                    .ok_or_else(|| err(line, "missing relation signature"))?;
                let (name, arity) = parse_signature(line, sig)?;
                let mode = match parts.next() {
                    None | Some("partial") => RelationMode::Partial,
                    Some("total") => RelationMode::Total,
                    Some(other) => {
                        return Err(err(line, format!("unknown relation mode `{other}`")))
                    }
                };
                vocab
                    .add_relation(&name, arity, RelationKind::Declared)
                    .map_err(vocab_err(line))?;
                decls.push((line, Decl::Mode(name.clone(), mode)));
                block = Block::Relation(name);
            }
            "aux" => {
                let (name, arity) = parse_signature(line, rest)?;
                vocab
                    .add_relation(&name, arity, RelationKind::Auxiliary)
                    .map_err(vocab_err(line))?;
            }
            "function" => {
                let (name, arity) = parse_signature(line, rest.trim_end_matches(':'))?;
                vocab.add_function(&name, arity).map_err(vocab_err(line))?;
                block = Block::Function(name);
            }
            "constant" => {
                let (name, value) = rest
                    .split_once('=')
                    .ok_or_else(|| err(line, "constants look like `constant c = a`"))?;
                let name = name.trim().to_string();
                vocab.add_constant(&name).map_err(vocab_err(line))?;
                let value = match value.trim() {
                    "undef" => None,
                    v => Some(v.to_string()),
                };
                decls.push((line, Decl::Constant(name, value)));
            }
            other => return Err(err(line, format!("unknown declaration `{other}`"))),
        }
    }

    let names = domain.unwrap_or_default();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut s = PartialStructure::new(&vocab, &refs).map_err(structure_err(domain_line))?;
    let element = |line: usize, s: &PartialStructure, name: &str| {
        s.element(name)
            .ok_or_else(|| err(line, format!("unknown element `{name}`")))
    };
    let tuple =
        |line: usize, s: &PartialStructure, items: &[String]| -> Result<Tuple, ModelError> {
            items.iter().map(|n| element(line, s, n)).collect()
        };
    for (line, decl) in &decls {
        match decl {
            Decl::Mode(name, mode) => {
                s.set_relation_mode(name, *mode)
                    .map_err(structure_err(*line))?;
            }
            Decl::Constant(name, value) => {
                let v: Option<Element> = match value {
                    Some(v) => Some(element(*line, &s, v)?),
                    None => None,
                };
                s.define_constant(name, v).map_err(structure_err(*line))?;
            }
        }
    }
    for (line, rel, positive, items) in &tuples {
        let t = tuple(*line, &s, items)?;
        s.declare_tuple(rel, t, *positive)
            .map_err(structure_err(*line))?;
    }
    for (line, f, args, value) in &entries {
        let args = tuple(*line, &s, args)?;
        let value = element(*line, &s, value)?;
        s.define_function(f, args, value)
            .map_err(structure_err(*line))?;
    }
    Ok((vocab, s))
}

/// Writes `s` in the model format; [`parse_model`] reads it back to an
/// equal structure when `s` has no inserted elements.
pub fn write_model(s: &PartialStructure) -> String {
    let mut out = String::new();
    let dom: Vec<&str> = s.domain().map(|e| s.name(e)).collect();
    let _ = writeln!(out, "domain: {}", dom.join(" "));
    for (name, rel) in s.relations() {
        if rel.kind == RelationKind::Auxiliary && rel.positive.is_empty() && rel.negative.is_empty()
        {
            let _ = writeln!(out, "aux {name}/{}", rel.arity);
            continue;
        }
        let mode = match rel.mode {
            RelationMode::Partial => "partial",
            RelationMode::Total => "total",
        };
        let _ = writeln!(out, "relation {name}/{} {mode}", rel.arity);
        for (sign, set) in [('+', &rel.positive), ('-', &rel.negative)] {
            if !set.is_empty() {
                let ts: Vec<String> = set.iter().map(|t| s.format_tuple(t)).collect();
                let _ = writeln!(out, "  {sign} {}", ts.join(" "));
            }
        }
    }
    for (name, f) in s.functions() {
        let _ = writeln!(out, "function {name}/{}:", f.arity);
        for (args, v) in &f.entries {
            let _ = writeln!(out, "  {} -> {}", s.format_tuple(args), s.name(*v));
        }
    }
    for (name, c) in s.constants() {
        let v = c
            .map(|e| s.name(e).to_string())
            .unwrap_or_else(|| "undef".into());
        let _ = writeln!(out, "constant {name} = {v}");
    }
    out
}
