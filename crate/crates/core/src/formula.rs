//! Formulas of the propositional language with `<>` and `[]`.
//!
//! The surface syntax is ASCII:
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := ("~" | "<>" | "[]") unary | atom
//! atom    := ident | "false" | "(" formula ")"
//! ```
//!
//! `~a` is read as `a -> false` and `a <-> b` as `(a -> b) & (b -> a)`; neither
//! survives parsing, so equality of formulas is purely syntactic on the seven
//! core constructors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Falsum,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Dia(Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn dia(body: Formula) -> Self {
        Formula::Dia(Box::new(body))
    }

    pub fn boxed(body: Formula) -> Self {
        Formula::Box(Box::new(body))
    }

    /// `f -> false`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::implies(f, Formula::Falsum)
    }

    /// `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Var(_) | Formula::Falsum => vec![],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
            Formula::Dia(a) | Formula::Box(a) => vec![a],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(name) => {
                out.insert(name.clone());
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_vars(out)),
        }
    }

    /// Replaces variables by formulas; unmapped variables are kept.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Var(name) => map.get(name).cloned().unwrap_or_else(|| self.clone()),
            Formula::Falsum => Formula::Falsum,
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map), b.substitute(map)),
            Formula::Dia(a) => Formula::dia(a.substitute(map)),
            Formula::Box(a) => Formula::boxed(a.substitute(map)),
        }
    }

    /// Renders with the minimal parentheses needed to parse back to `self`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write_prec(&mut out, 0);
        out
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Dia(_) | Formula::Box(_) => 4,
            Formula::Var(_) | Formula::Falsum => 5,
        }
    }

    fn write_prec(&self, out: &mut String, min: u8) {
        let paren = self.prec() < min;
        if paren {
            out.push('(');
        }
        match self {
            Formula::Var(name) => out.push_str(name),
            Formula::Falsum => out.push_str("false"),
            Formula::Implies(a, b) => {
                a.write_prec(out, 2);
                out.push_str(" -> ");
                b.write_prec(out, 1);
            }
            Formula::Or(a, b) => {
                a.write_prec(out, 2);
                out.push_str(" | ");
                b.write_prec(out, 3);
            }
            Formula::And(a, b) => {
                a.write_prec(out, 3);
                out.push_str(" & ");
                b.write_prec(out, 4);
            }
            Formula::Dia(a) => {
                out.push_str("<>");
                a.write_prec(out, 4);
            }
            Formula::Box(a) => {
                out.push_str("[]");
                a.write_prec(out, 4);
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Syntax error; `pos` is a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    False,
    Not,
    Dia,
    Box,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::False => "`false`".into(),
            Tok::Not => "`~`".into(),
            Tok::Dia => "`<>`".into(),
            Tok::Box => "`[]`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let err = |pos: usize, message: &str| ParseError {
        pos,
        message: message.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Imp
                } else {
                    return Err(err(i, "expected `->`"));
                }
            }
            b'[' => {
                if bytes.get(i + 1) == Some(&b']') {
                    i += 2;
                    Tok::Box
                } else {
                    return Err(err(i, "expected `[]`"));
                }
            }
            b'<' => match (bytes.get(i + 1), bytes.get(i + 2)) {
                (Some(b'>'), _) => {
                    i += 2;
                    Tok::Dia
                }
                (Some(b'-'), Some(b'>')) => {
                    i += 3;
                    Tok::Iff
                }
                _ => return Err(err(i, "expected `<>` or `<->`")),
            },
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "false" => Tok::False,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(err(i, &format!("unexpected character `{ch}`")));
            }
        };
        toks.push((start, tok));
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".to_string(),
        };
        ParseError {
            pos: self.offset(),
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Not) {
            Ok(Formula::not(self.unary()?))
        } else if self.eat(&Tok::Dia) {
            Ok(Formula::dia(self.unary()?))
        } else if self.eat(&Tok::Box) {
            Ok(Formula::boxed(self.unary()?))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::Var(name))
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::Falsum)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("`)`"));
                }
                Ok(inner)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses a formula, desugaring `~` and `<->`.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = parser.iff()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}

/// A finite set of formulas closed under immediate subformulas.
///
/// Members are kept in post-order of first discovery, so children always
/// precede their parents and evaluation can run front to back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubformulaSet {
    items: Vec<Formula>,
    index: HashMap<Formula, usize>,
}

impl SubformulaSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn get(&self, i: usize) -> &Formula {
        &self.items[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.items
    }

    fn insert_closed(&mut self, f: &Formula) {
        if self.index.contains_key(f) {
            return;
        }
        for c in f.children() {
            self.insert_closed(c);
        }
        self.index.insert(f.clone(), self.items.len());
        self.items.push(f.clone());
    }
}

/// Smallest subformula-closed set containing every formula of `fs`.
pub fn subformula_closure<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> SubformulaSet {
    let mut set = SubformulaSet::default();
    for f in fs {
        set.insert_closed(f);
    }
    set
}

/// `sub(f)`.
pub fn subformulas(f: &Formula) -> SubformulaSet {
    subformula_closure([f])
}
