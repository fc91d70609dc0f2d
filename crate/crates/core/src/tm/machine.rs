use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub const BLANK: char = '_';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    L,
    R,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub next: String,
    pub write: char,
    pub direction: Direction,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("accept and reject states must differ")]
    SameHaltStates,
    #[error("state `{0}` is not declared")]
    UnknownState(String),
    #[error("halting state `{0}` has outgoing transitions")]
    HaltingTransition(String),
    #[error("duplicate transition for ({0}, {1:?})")]
    Duplicate(String, char),
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("input symbol {0:?} is not in the input alphabet")]
    InvalidInput(char),
}

/// A deterministic machine on a one-way infinite tape. A missing transition
/// in a non-halting state rejects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachine {
    pub states: BTreeSet<String>,
    /// `None` accepts every symbol except the blank.
    pub input_alphabet: Option<BTreeSet<char>>,
    pub start: String,
    pub accept: String,
    pub reject: String,
    pub delta: BTreeMap<(String, char), Transition>,
}

impl TuringMachine {
    pub fn new(
        states: &[&str],
        start: &str,
        accept: &str,
        reject: &str,
    ) -> Result<Self, MachineError> {
        let tm = Self {
            states: states.iter().map(|s| s.to_string()).collect(),
            input_alphabet: None,
            start: start.into(),
            accept: accept.into(),
            reject: reject.into(),
            delta: BTreeMap::new(),
        };
        tm.validate()?;
        Ok(tm)
    }

    pub fn add(
        &mut self,
        state: &str,
        read: char,
        next: &str,
        write: char,
        direction: Direction,
    ) -> Result<(), MachineError> {
        for s in [state, next] {
            if !self.states.contains(s) {
                return Err(MachineError::UnknownState(s.to_string()));
            }
        }
        if state == self.accept || state == self.reject {
            return Err(MachineError::HaltingTransition(state.to_string()));
        }
        let key = (state.to_string(), read);
        if self.delta.contains_key(&key) {
            return Err(MachineError::Duplicate(state.to_string(), read));
        }
        self.delta.insert(
            key,
            Transition {
                next: next.to_string(),
                write,
                direction,
            },
        );
        Ok(())
    }

    /// Adds the same transition for every symbol in `reads`.
    pub fn add_many(
        &mut self,
        state: &str,
        reads: &str,
        next: &str,
        write_same: bool,
        direction: Direction,
    ) -> Result<(), MachineError> {
        for c in reads.chars() {
            let write = if write_same { c } else { BLANK };
            self.add(state, c, next, write, direction)?;
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), MachineError> {
        if self.accept == self.reject {
            return Err(MachineError::SameHaltStates);
        }
        for s in [&self.start, &self.accept, &self.reject] {
            if !self.states.contains(s) {
                return Err(MachineError::UnknownState(s.clone()));
            }
        }
        Ok(())
    }

    pub fn check_input(&self, input: &str) -> Result<(), MachineError> {
        for c in input.chars() {
            let ok = match &self.input_alphabet {
                Some(a) => a.contains(&c),
                None => c != BLANK,
            };
            if !ok {
                return Err(MachineError::InvalidInput(c));
            }
        }
        Ok(())
    }
}

/// Parses the line-based machine format:
///
/// ```text
/// states: q0 q1 qa qr
/// input: n=0123456789;     # optional
/// start: q0
/// accept: qa
/// reject: qr
/// delta: (q0,n) -> (q1,n,R)
/// ```
///
/// `_` is the blank.
pub fn parse_machine(text: &str) -> Result<TuringMachine, MachineError> {
    let mut states = None;
    let mut input = None;
    let (mut start, mut accept, mut reject) = (None, None, None);
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: &str| MachineError::Syntax {
            line,
            message: message.to_string(),
        };
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| syntax("expected `key: value`"))?;
        let value = value.trim();
        match key.trim() {
            "states" => {
                states = Some(
                    value
                        .split_whitespace()
                        .map(str::to_string)
                        .collect::<Vec<_>>(),
                )
            }
            "input" => {
                input = Some(
                    value
                        .chars()
                        .filter(|c| !c.is_whitespace())
                        .collect::<BTreeSet<_>>(),
                )
            }
            "start" => start = Some(value.to_string()),
            "accept" => accept = Some(value.to_string()),
            "reject" => reject = Some(value.to_string()),
            "delta" => {
                let (lhs, rhs) = value
                    .split_once("->")
                    .ok_or_else(|| syntax("expected `->`"))?;
                let strip = |s: &str| -> Option<Vec<String>> {
                    let s = s.trim().strip_prefix('(')?.strip_suffix(')')?;
                    Some(s.split(',').map(|p| p.trim().to_string()).collect())
                };
                let lhs = strip(lhs).ok_or_else(|| syntax("expected `(state,symbol)`"))?;
                let rhs = strip(rhs).ok_or_else(|| syntax("expected `(state,symbol,L|R)`"))?;
                let symbol = |s: &str| -> Result<char, MachineError> {
                    let mut cs = s.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => Ok(c),
                        _ => Err(syntax("symbols are single characters")),
                    }
                };
                if lhs.len() != 2 || rhs.len() != 3 {
                    return Err(syntax("malformed transition"));
                }
                let direction = match rhs[2].as_str() {
                    "L" => Direction::L,
                    "R" => Direction::R,
                    _ => return Err(syntax("direction must be L or R")),
                };
                rules.push((
                    lhs[0].clone(),
                    symbol(&lhs[1])?,
                    rhs[0].clone(),
                    symbol(&rhs[1])?,
                    direction,
                ));
            }
            other => return Err(syntax(&format!("unknown key `{other}`"))),
        }
    }
    let states = states.ok_or(MachineError::Missing("states"))?;
    let refs: Vec<&str> = states.iter().map(String::as_str).collect();
    let mut tm = TuringMachine::new(
        &refs,
        &start.ok_or(MachineError::Missing("start"))?,
        &accept.ok_or(MachineError::Missing("accept"))?,
        &reject.ok_or(MachineError::Missing("reject"))?,
    )?;
    tm.input_alphabet = input;
    for (q, a, q2, b, d) in rules {
        tm.add(&q, a, &q2, b, d)?;
    }
    Ok(tm)
}
