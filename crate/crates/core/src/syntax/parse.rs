use std::fmt;

use super::{is_claim_name, Formula, Name, Symbol, Term, Vocabulary, KEYWORDS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(char),
    ClaimIndexOverflow(String),
    Unexpected {
        expected: String,
        found: String,
    },
    UnknownSymbol(String),
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    CompositionalOnly(&'static str),
    TrailingInput(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Lexical(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::ClaimIndexOverflow(s) => write!(f, "claim index `{s}` is too large"),
            ParseErrorKind::Unexpected { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::Arity {
                name,
                expected,
                found,
            } => write!(f, "`{name}` expects {expected} argument(s), got {found}"),
            ParseErrorKind::CompositionalOnly(op) => write!(
                f,
                "`{op}` is not allowed inside insertion, deletion or claim constructs"
            ),
            ParseErrorKind::TrailingInput(t) => {
                write!(f, "unexpected trailing input starting at {t}")
            }
        }
    }
}

/// Parse diagnostic with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Claim(u32),
    LParen,
    RParen,
    Comma,
    Dot,
    Amp,
    Bar,
    Equals,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Claim(i) => write!(f, "`C{i}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = simple {
            bump(&mut chars);
            out.push(Spanned {
                tok,
                line: l,
                column: col,
            });
        } else if c.is_whitespace() {
            bump(&mut chars);
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            let tok = if is_claim_name(&word) {
                let index = word[1..].parse::<u32>().map_err(|_| ParseError {
                    line: l,
                    column: col,
                    kind: ParseErrorKind::ClaimIndexOverflow(word.clone()),
                })?;
                Tok::Claim(index)
            } else {
                Tok::Ident(word)
            };
            out.push(Spanned {
                tok,
                line: l,
                column: col,
            });
        } else {
            return Err(ParseError {
                line: l,
                column: col,
                kind: ParseErrorKind::Lexical(c),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    vocab: &'a Vocabulary,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            kind,
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let at = self.peek();
        self.error_at(
            at,
            ParseErrorKind::Unexpected {
                expected: expected.to_string(),
                found: at.tok.to_string(),
            },
        )
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn variable(&mut self) -> PResult<Name> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && self.vocab.lookup(s).is_none() => {
                let name = Name::from(s.as_str());
                self.next();
                Ok(name)
            }
            _ => Err(self.unexpected("variable")),
        }
    }

    fn relation_name(&mut self) -> PResult<(Name, usize)> {
        let at = self.peek().clone();
        match &at.tok {
            Tok::Ident(s) => match self.vocab.lookup(s) {
                Some(Symbol::Relation { arity, .. }) => {
                    self.next();
                    Ok((Name::from(s.as_str()), arity))
                }
                Some(_) => Err(self.unexpected("relation name")),
                None => Err(self.error_at(&at, ParseErrorKind::UnknownSymbol(s.clone()))),
            },
            _ => Err(self.unexpected("relation name")),
        }
    }

    fn check_arity(&self, at: &Spanned, name: &str, expected: usize, found: usize) -> PResult<()> {
        if expected == found {
            Ok(())
        } else {
            Err(self.error_at(
                at,
                ParseErrorKind::Arity {
                    name: name.to_string(),
                    expected,
                    found,
                },
            ))
        }
    }

    fn formula(&mut self, in_l: bool) -> PResult<Formula> {
        let at = self.peek().clone();
        match &at.tok {
            Tok::Ident(kw) => match kw.as_str() {
                "not" => {
                    self.next();
                    Ok(Formula::Not(Box::new(self.formula(in_l)?)))
                }
                "wnot" | "det" => {
                    let op = if kw == "wnot" { "wnot" } else { "det" };
                    if in_l {
                        return Err(self.error_at(&at, ParseErrorKind::CompositionalOnly(op)));
                    }
                    self.next();
                    let inner = Box::new(self.formula(in_l)?);
                    Ok(if op == "wnot" {
                        Formula::WNot(inner)
                    } else {
                        Formula::Det(inner)
                    })
                }
                "exists" | "forall" | "insert" | "delete" => {
                    let kw = kw.clone();
                    self.next();
                    let var = self.variable()?;
                    self.expect(Tok::Dot)?;
                    let body = match kw.as_str() {
                        "exists" | "forall" => Box::new(self.formula(in_l)?),
                        _ => Box::new(self.formula(true)?),
                    };
                    Ok(match kw.as_str() {
                        "exists" => Formula::Exists(var, body),
                        "forall" => Formula::Forall(var, body),
                        "insert" => Formula::InsertElem(var, body),
                        _ => Formula::DeleteElem(var, body),
                    })
                }
                "insertT" | "deleteT" => {
                    let insert = kw == "insertT";
                    self.next();
                    let rel_at = self.peek().clone();
                    let (rel, arity) = self.relation_name()?;
                    self.expect(Tok::LParen)?;
                    let mut vars = vec![self.variable()?];
                    while self.peek().tok == Tok::Comma {
                        self.next();
                        vars.push(self.variable()?);
                    }
                    self.expect(Tok::RParen)?;
                    self.check_arity(&rel_at, &rel, arity, vars.len())?;
                    self.expect(Tok::Dot)?;
                    let body = Box::new(self.formula(true)?);
                    Ok(if insert {
                        Formula::InsertTuple(rel, vars, body)
                    } else {
                        Formula::DeleteTuple(rel, vars, body)
                    })
                }
                "claim" => {
                    self.next();
                    let index = match self.peek().tok {
                        Tok::Claim(i) => i,
                        _ => return Err(self.unexpected("claim name")),
                    };
                    self.next();
                    self.expect(Tok::Dot)?;
                    Ok(Formula::Claim(index, Box::new(self.formula(true)?)))
                }
                _ => self.atom(),
            },
            Tok::LParen => {
                self.next();
                let lhs = Box::new(self.formula(in_l)?);
                let and = match self.peek().tok {
                    Tok::Amp => true,
                    Tok::Bar => false,
                    _ => return Err(self.unexpected("`&` or `|`")),
                };
                self.next();
                let rhs = Box::new(self.formula(in_l)?);
                self.expect(Tok::RParen)?;
                Ok(if and {
                    Formula::And(lhs, rhs)
                } else {
                    Formula::Or(lhs, rhs)
                })
            }
            Tok::Claim(i) => {
                let i = *i;
                self.next();
                Ok(Formula::ClaimAtom(i))
            }
            _ => Err(self.unexpected("formula")),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        let at = self.peek().clone();
        if let Tok::Ident(name) = &at.tok {
            if let Some(Symbol::Relation { arity, .. }) = self.vocab.lookup(name) {
                let name = Name::from(name.as_str());
                self.next();
                let args = self.arguments()?;
                self.check_arity(&at, &name, arity, args.len())?;
                return Ok(Formula::Rel(name, args));
            }
        }
        let lhs = self.term()?;
        self.expect(Tok::Equals)?;
        let rhs = self.term()?;
        Ok(Formula::Eq(lhs, rhs))
    }

    fn arguments(&mut self) -> PResult<Vec<Term>> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> PResult<Term> {
        let at = self.peek().clone();
        let name = match &at.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.unexpected("term")),
        };
        match self.vocab.lookup(&name) {
            Some(Symbol::Function { arity }) => {
                self.next();
                let args = self.arguments()?;
                self.check_arity(&at, &name, arity, args.len())?;
                Ok(Term::Apply(Name::from(name.as_str()), args))
            }
            Some(Symbol::Constant) => {
                self.next();
                Ok(Term::Const(Name::from(name.as_str())))
            }
            Some(Symbol::Relation { .. }) => Err(self.unexpected("term")),
            None if *self.peek_at(1) == Tok::LParen => {
                Err(self.error_at(&at, ParseErrorKind::UnknownSymbol(name)))
            }
            None => {
                self.next();
                Ok(Term::Var(Name::from(name.as_str())))
            }
        }
    }
}

/// Parses the concrete formula syntax against `vocab`.
///
/// Binary connectives are always parenthesized; identifiers that are not
/// vocabulary symbols are variables.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
        vocab,
    };
    let formula = parser.formula(false)?;
    let rest = parser.peek().clone();
    if rest.tok != Tok::Eof {
        return Err(parser.error_at(&rest, ParseErrorKind::TrailingInput(rest.tok.to_string())));
    }
    Ok(formula)
}
