//! Recursive-descent parser for propositional and conditional formulas.
//!
//! ```text
//! expr    := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("\/" and)*
//! and     := unary ("/\" unary)*
//! unary   := "~" unary | primary
//! primary := IDENT | "T" | "F" | "(" expr ("|" expr)? ")"
//! ```

use crate::error::{Error, Result};
use crate::event_algebra::{truth_set, EventAlgebra};
use crate::logic::formula::{CondFormula, PropFormula};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Top,
    Bottom,
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Bar,
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let rest = &input[i..];
        let (tok, len) = if c.is_ascii_whitespace() {
            i += 1;
            continue;
        } else if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else if rest.starts_with("/\\") {
            (Tok::And, 2)
        } else if rest.starts_with("\\/") {
            (Tok::Or, 2)
        } else if c == b'~' {
            (Tok::Not, 1)
        } else if c == b'(' {
            (Tok::LParen, 1)
        } else if c == b')' {
            (Tok::RParen, 1)
        } else if c == b'|' {
            (Tok::Bar, 1)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            let word = &rest[..len];
            let tok = match word {
                "T" => Tok::Top,
                "F" => Tok::Bottom,
                _ => Tok::Ident(word.to_string()),
            };
            (tok, len)
        } else {
            let ch = rest.chars().next().unwrap_or('?');
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{ch}`") });
        };
        out.push((tok, i));
        i += len;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Sym(String),
    Top,
    Bottom,
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Imp(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Cond(Box<Expr>, Box<Expr>, usize),
    /// A propositional subexpression at the conditional level, kept for error positions.
    At(Box<Expr>, usize),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut l = self.imp()?;
        while self.eat(&Tok::Iff) {
            let r = self.imp()?;
            l = Expr::Iff(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn imp(&mut self) -> Result<Expr> {
        let l = self.or()?;
        if self.eat(&Tok::Imp) {
            let r = self.imp()?;
            return Ok(Expr::Imp(Box::new(l), Box::new(r)));
        }
        Ok(l)
    }

    fn or(&mut self) -> Result<Expr> {
        let mut l = self.and()?;
        while self.eat(&Tok::Or) {
            let r = self.and()?;
            l = Expr::Or(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut l = self.unary()?;
        while self.eat(&Tok::And) {
            let r = self.unary()?;
            l = Expr::And(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Not) {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let start = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::At(Box::new(Expr::Sym(name)), start))
            }
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(Expr::At(Box::new(Expr::Top), start))
            }
            Some(Tok::Bottom) => {
                self.pos += 1;
                Ok(Expr::At(Box::new(Expr::Bottom), start))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.eat(&Tok::Bar) {
                    let bar = self.toks[self.pos - 1].1;
                    let ante = self.expr()?;
                    if !self.eat(&Tok::RParen) {
                        return self.err("expected `)` after conditional");
                    }
                    return Ok(Expr::Cond(Box::new(inner), Box::new(ante), bar));
                }
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(Tok::Bar) => self.err("unexpected `|`"),
            Some(_) => self.err("expected a formula"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_expr(input: &str) -> Result<Expr> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, end: input.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn to_prop(e: &Expr) -> Result<PropFormula> {
    Ok(match e {
        Expr::Sym(s) => PropFormula::Var(s.clone()),
        Expr::Top => PropFormula::Top,
        Expr::Bottom => PropFormula::Bottom,
        Expr::At(x, _) => to_prop(x)?,
        Expr::Not(x) => PropFormula::not(to_prop(x)?),
        Expr::And(l, r) => PropFormula::and(to_prop(l)?, to_prop(r)?),
        Expr::Or(l, r) => PropFormula::or(to_prop(l)?, to_prop(r)?),
        Expr::Imp(l, r) => PropFormula::implies(to_prop(l)?, to_prop(r)?),
        Expr::Iff(l, r) => PropFormula::iff(to_prop(l)?, to_prop(r)?),
        Expr::Cond(_, _, pos) => return Err(Error::NestedConditional { pos: *pos }),
    })
}

fn to_cond(e: &Expr) -> Result<CondFormula> {
    Ok(match e {
        Expr::Cond(l, r, _) => CondFormula::basic(to_prop(l)?, to_prop(r)?),
        Expr::Not(x) => CondFormula::not(to_cond(x)?),
        Expr::And(l, r) => CondFormula::and(to_cond(l)?, to_cond(r)?),
        Expr::Or(l, r) => CondFormula::or(to_cond(l)?, to_cond(r)?),
        Expr::Imp(l, r) => CondFormula::implies(to_cond(l)?, to_cond(r)?),
        Expr::Iff(l, r) => CondFormula::iff(to_cond(l)?, to_cond(r)?),
        Expr::At(_, pos) => {
            return Err(Error::Parse {
                pos: *pos,
                msg: "propositional formula outside a conditional; write (phi | psi)".into(),
            })
        }
        Expr::Sym(_) | Expr::Top | Expr::Bottom => {
            return Err(Error::Parse { pos: 0, msg: "propositional formula outside a conditional".into() })
        }
    })
}

pub fn parse_prop(input: &str) -> Result<PropFormula> {
    to_prop(&parse_expr(input)?)
}

/// Syntax only: no symbol or antecedent checks.
pub fn parse_cond_syntax(input: &str) -> Result<CondFormula> {
    to_cond(&parse_expr(input)?)
}

/// Parses a conditional formula and checks it against `alg`: every symbol
/// must be known and every antecedent satisfiable.
pub fn parse(input: &str, alg: &EventAlgebra) -> Result<CondFormula> {
    let f = parse_cond_syntax(input)?;
    validate(&f, alg)?;
    Ok(f)
}

pub fn validate(f: &CondFormula, alg: &EventAlgebra) -> Result<()> {
    for (a, b) in f.leaves() {
        truth_set(a, alg)?;
        if truth_set(b, alg)?.is_bottom() {
            return Err(Error::UnsatisfiableAntecedent(b.to_string()));
        }
    }
    Ok(())
}

/// Parses a propositional formula and checks its symbols against `alg`.
pub fn parse_prop_in(input: &str, alg: &EventAlgebra) -> Result<PropFormula> {
    let f = parse_prop(input)?;
    truth_set(&f, alg)?;
    Ok(f)
}

/// Splits `"phi |~ psi"` into its two propositional sides.
pub fn parse_nm_query(input: &str) -> Result<(PropFormula, PropFormula)> {
    let Some(at) = input.find("|~") else {
        return Err(Error::Parse { pos: 0, msg: "expected `phi |~ psi`".into() });
    };
    let lhs = parse_prop(&input[..at]).map_err(|e| shift(e, 0))?;
    let rhs = parse_prop(&input[at + 2..]).map_err(|e| shift(e, at + 2))?;
    Ok((lhs, rhs))
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        Error::NestedConditional { pos } => Error::NestedConditional { pos: pos + by },
        other => other,
    }
}
