//! STL* formulas: syntax tree, parser, printer and static analyses.
//!
//! Surface syntax (tightest binding first): `!`, `*( … )`, `F[a,b]`, `G[a,b]`;
//! then `U[a,b]` (right associative); then `&&`; then `||`; then `->`
//! (right associative). Atoms compare two linear expressions over current
//! values `x` and frozen values `x*`:
//!
//! ```text
//! G[10,190] F[0,50] *((F[1,50] m1* < m1) && (F[1,50] m1* > m1))
//! ```
//!
//! Coefficients are written by juxtaposition (`2 m1`, `0.5 m2*`); `2*m1` is
//! not valid because `*` after an identifier marks the frozen value.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::time::{format_time, parse_time, Time};

/// Ordered variable names of a signal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalSchema {
    names: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("signal schema has no variables")]
    Empty,
    #[error("duplicate variable name `{0}`")]
    Duplicate(String),
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
}

impl SignalSchema {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, SchemaError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(SchemaError::Empty);
        }
        for (k, n) in names.iter().enumerate() {
            if !is_identifier(n) || is_keyword(n) {
                return Err(SchemaError::InvalidName(n.clone()));
            }
            if names[..k].contains(n) {
                return Err(SchemaError::Duplicate(n.clone()));
            }
        }
        Ok(SignalSchema { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "true" | "false")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Gt,
}

/// `Σ plain[i]·x_i + Σ frozen[i]·x_i* (< | >) bound`.
///
/// Coefficient lists are sorted by variable index, without duplicates or
/// zeros, and at least one of them is non-empty.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearPredicate {
    pub plain: Vec<(usize, f64)>,
    pub frozen: Vec<(usize, f64)>,
    pub bound: f64,
    pub cmp: Cmp,
}

impl LinearPredicate {
    /// Evaluates the predicate for current values `x` and frozen values `xs`.
    pub fn holds(&self, x: &[f64], xs: &[f64]) -> bool {
        let lhs = self.lhs(x, xs);
        match self.cmp {
            Cmp::Lt => lhs < self.bound,
            Cmp::Gt => lhs > self.bound,
        }
    }

    pub fn lhs(&self, x: &[f64], xs: &[f64]) -> f64 {
        self.plain.iter().map(|&(i, a)| a * x[i]).sum::<f64>()
            + self.frozen.iter().map(|&(i, b)| b * xs[i]).sum::<f64>()
    }

    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.plain.iter().chain(self.frozen.iter()).map(|&(i, _)| i)
    }
}

/// STL* syntax tree. Variables are schema indices.
#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    True,
    False,
    Atom(LinearPredicate),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Until {
        lo: Time,
        hi: Time,
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Eventually {
        lo: Time,
        hi: Time,
        child: Box<Formula>,
    },
    Globally {
        lo: Time,
        hi: Time,
        child: Box<Formula>,
    },
    Freeze(Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn until(lo: Time, hi: Time, a: Formula, b: Formula) -> Formula {
        Formula::Until {
            lo,
            hi,
            left: Box::new(a),
            right: Box::new(b),
        }
    }
    pub fn eventually(lo: Time, hi: Time, f: Formula) -> Formula {
        Formula::Eventually {
            lo,
            hi,
            child: Box::new(f),
        }
    }
    pub fn globally(lo: Time, hi: Time, f: Formula) -> Formula {
        Formula::Globally {
            lo,
            hi,
            child: Box::new(f),
        }
    }
    pub fn freeze(f: Formula) -> Formula {
        Formula::Freeze(Box::new(f))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(c) | Formula::Freeze(c) => vec![c],
            Formula::Eventually { child, .. } | Formula::Globally { child, .. } => vec![child],
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => vec![a, b],
            Formula::Until { left, right, .. } => vec![left, right],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Every atom in the formula, in pre-order.
    pub fn atoms(&self) -> Vec<&LinearPredicate> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a LinearPredicate>) {
        if let Formula::Atom(p) = self {
            out.push(p);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Sorted, deduplicated schema indices referenced by the formula.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.atoms().iter().flat_map(|p| p.variables()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Signal length needed to evaluate the formula at time 0.
    pub fn required_length(&self) -> Time {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => Time::zero(),
            Formula::Not(c) | Formula::Freeze(c) => c.required_length(),
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => {
                a.required_length().max(b.required_length())
            }
            Formula::Until { hi, left, right, .. } => left.required_length().max(right.required_length()) + hi,
            Formula::Eventually { hi, child, .. } | Formula::Globally { hi, child, .. } => child.required_length() + hi,
        }
    }

    /// Rewrites into the core fragment `true`, atoms, `!`, `||`, `U`, `*`.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::not(Formula::True),
            Formula::Atom(p) => Formula::Atom(p.clone()),
            Formula::Not(c) => Formula::not(c.desugar()),
            Formula::Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Formula::And(a, b) => Formula::not(Formula::or(Formula::not(a.desugar()), Formula::not(b.desugar()))),
            Formula::Implies(a, b) => Formula::or(Formula::not(a.desugar()), b.desugar()),
            Formula::Until { lo, hi, left, right } => Formula::until(*lo, *hi, left.desugar(), right.desugar()),
            Formula::Eventually { lo, hi, child } => Formula::until(*lo, *hi, Formula::True, child.desugar()),
            Formula::Globally { lo, hi, child } => {
                Formula::not(Formula::until(*lo, *hi, Formula::True, Formula::not(child.desugar())))
            }
            Formula::Freeze(c) => Formula::freeze(c.desugar()),
        }
    }

    /// True when only core-fragment node kinds occur.
    pub fn is_core(&self) -> bool {
        let here = matches!(
            self,
            Formula::True
                | Formula::Atom(_)
                | Formula::Not(_)
                | Formula::Or(..)
                | Formula::Until { .. }
                | Formula::Freeze(_)
        );
        here && self.children().iter().all(|c| c.is_core())
    }

    /// Printer bound to variable names; output parses back to `self`.
    pub fn display<'a>(&'a self, schema: &'a SignalSchema) -> DisplayFormula<'a> {
        DisplayFormula { f: self, schema }
    }
}

pub struct DisplayFormula<'a> {
    f: &'a Formula,
    schema: &'a SignalSchema,
}

impl fmt::Display for DisplayFormula<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(out, self.f, self.schema)
    }
}

fn is_binary(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Or(..) | Formula::And(..) | Formula::Implies(..) | Formula::Until { .. }
    )
}

fn write_operand(out: &mut fmt::Formatter<'_>, f: &Formula, schema: &SignalSchema) -> fmt::Result {
    if is_binary(f) {
        write!(out, "(")?;
        write_formula(out, f, schema)?;
        write!(out, ")")
    } else {
        write_formula(out, f, schema)
    }
}

fn write_interval(out: &mut fmt::Formatter<'_>, lo: &Time, hi: &Time) -> fmt::Result {
    write!(out, "[{},{}]", format_time(lo), format_time(hi))
}

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula, schema: &SignalSchema) -> fmt::Result {
    match f {
        Formula::True => write!(out, "true"),
        Formula::False => write!(out, "false"),
        Formula::Atom(p) => write_predicate(out, p, schema),
        Formula::Not(c) => {
            write!(out, "!")?;
            if matches!(**c, Formula::Atom(_)) {
                write!(out, "(")?;
                write_formula(out, c, schema)?;
                write!(out, ")")
            } else {
                write_operand(out, c, schema)
            }
        }
        Formula::Freeze(c) => {
            write!(out, "*(")?;
            write_formula(out, c, schema)?;
            write!(out, ")")
        }
        Formula::Eventually { lo, hi, child } | Formula::Globally { lo, hi, child } => {
            write!(
                out,
                "{}",
                if matches!(f, Formula::Eventually { .. }) {
                    "F"
                } else {
                    "G"
                }
            )?;
            write_interval(out, lo, hi)?;
            write!(out, " ")?;
            write_operand(out, child, schema)
        }
        Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => {
            let op = match f {
                Formula::Or(..) => "||",
                Formula::And(..) => "&&",
                _ => "->",
            };
            write_operand(out, a, schema)?;
            write!(out, " {op} ")?;
            write_operand(out, b, schema)
        }
        Formula::Until { lo, hi, left, right } => {
            write_operand(out, left, schema)?;
            write!(out, " U")?;
            write_interval(out, lo, hi)?;
            write!(out, " ")?;
            write_operand(out, right, schema)
        }
    }
}

fn write_predicate(out: &mut fmt::Formatter<'_>, p: &LinearPredicate, schema: &SignalSchema) -> fmt::Result {
    // merge both lists by variable index so the printed order is stable
    let mut terms: Vec<(usize, bool, f64)> = p
        .plain
        .iter()
        .map(|&(i, a)| (i, false, a))
        .chain(p.frozen.iter().map(|&(i, b)| (i, true, b)))
        .collect();
    terms.sort_by_key(|&(i, frozen, _)| (i, frozen));
    for (k, &(i, frozen, c)) in terms.iter().enumerate() {
        let sign = if c < 0.0 { "-" } else { "+" };
        if k == 0 {
            if c < 0.0 {
                write!(out, "-")?;
            }
        } else {
            write!(out, " {sign} ")?;
        }
        let mag = c.abs();
        if mag != 1.0 {
            write!(out, "{mag} ")?;
        }
        write!(out, "{}{}", schema.name(i), if frozen { "*" } else { "" })?;
    }
    let op = match p.cmp {
        Cmp::Lt => "<",
        Cmp::Gt => ">",
    };
    if p.bound < 0.0 {
        write!(out, " {op} -{}", -p.bound)
    } else {
        write!(out, " {op} {}", p.bound)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at offset {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("equality at offset {pos} is not supported; use an interval instead, e.g. `x >= b-δ && x <= b+δ`")]
    EqualityUnsupported { pos: usize },
    #[error("interval [{lo},{hi}] at offset {pos} must satisfy 0 <= lo < hi")]
    BadInterval { pos: usize, lo: String, hi: String },
    #[error("comparison at offset {pos} has no variables")]
    ConstantComparison { pos: usize },
}

/// Non-fatal remarks produced while parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "offset {}: {}", self.pos, self.message)
    }
}

pub fn parse(text: &str, schema: &SignalSchema) -> Result<Formula, ParseError> {
    parse_with_warnings(text, schema).map(|(f, _)| f)
}

/// Parses `text`, also returning warnings for normalized comparators.
pub fn parse_with_warnings(text: &str, schema: &SignalSchema) -> Result<(Formula, Vec<Warning>), ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        schema,
        warnings: Vec::new(),
        end: text.len(),
    };
    let f = p.formula()?;
    if let Some(t) = p.peek() {
        return Err(p.error_at(t.pos, format!("unexpected {}", t.kind)));
    }
    Ok((f, p.warnings))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Frozen(String),
    Not,
    FreezeOpen,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Or,
    And,
    Arrow,
    Slash,
    Plus,
    Minus,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "number `{n}`"),
            Tok::Ident(n) => write!(f, "`{n}`"),
            Tok::Frozen(n) => write!(f, "`{n}*`"),
            Tok::Not => write!(f, "`!`"),
            Tok::FreezeOpen => write!(f, "`*(`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Or => write!(f, "`||`"),
            Tok::And => write!(f, "`&&`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Lt => write!(f, "`<`"),
            Tok::Le => write!(f, "`<=`"),
            Tok::Gt => write!(f, "`>`"),
            Tok::Ge => write!(f, "`>=`"),
            Tok::Eq => write!(f, "`=`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let syntax = |pos: usize, msg: &str| ParseError::Syntax {
        pos,
        msg: msg.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let kind = if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let frac_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == frac_start {
                    return Err(syntax(start, "expected digits after `.`"));
                }
            }
            out.push(Token {
                kind: Tok::Num(text[start..i].to_string()),
                pos: start,
            });
            continue;
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = text[start..i].to_string();
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                out.push(Token {
                    kind: Tok::Frozen(name),
                    pos: start,
                });
            } else {
                out.push(Token {
                    kind: Tok::Ident(name),
                    pos: start,
                });
            }
            continue;
        } else if two(b"||") {
            i += 2;
            Tok::Or
        } else if two(b"&&") {
            i += 2;
            Tok::And
        } else if two(b"->") {
            i += 2;
            Tok::Arrow
        } else if two(b"<=") {
            i += 2;
            Tok::Le
        } else if two(b">=") {
            i += 2;
            Tok::Ge
        } else if two(b"==") {
            i += 2;
            Tok::Eq
        } else {
            i += 1;
            match c {
                b'!' => Tok::Not,
                b'*' => {
                    while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                        i += 1;
                    }
                    if i < bytes.len() && bytes[i] == b'(' {
                        i += 1;
                        Tok::FreezeOpen
                    } else {
                        return Err(syntax(
                            start,
                            "`*` must be followed by `(` or directly follow a variable",
                        ));
                    }
                }
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBracket,
                b']' => Tok::RBracket,
                b',' => Tok::Comma,
                b'/' => Tok::Slash,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'<' => Tok::Lt,
                b'>' => Tok::Gt,
                b'=' => Tok::Eq,
                _ => {
                    let ch = text[start..].chars().next().unwrap();
                    return Err(syntax(start, &format!("unexpected character `{ch}`")));
                }
            }
        };
        out.push(Token { kind, pos: start });
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    schema: &'a SignalSchema,
    warnings: Vec<Warning>,
    end: usize,
}

/// Linear expression under construction: per-variable coefficients and a
/// constant.
#[derive(Default)]
struct Lin {
    plain: Vec<(usize, f64)>,
    frozen: Vec<(usize, f64)>,
    constant: f64,
}

fn add_coeff(list: &mut Vec<(usize, f64)>, var: usize, c: f64) {
    match list.iter_mut().find(|(i, _)| *i == var) {
        Some(e) => e.1 += c,
        None => list.push((var, c)),
    }
}

fn normalize_coeffs(mut list: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    list.retain(|&(_, c)| c != 0.0);
    list.sort_by_key(|&(i, _)| i);
    list
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&Tok> {
        self.peek().map(|t| &t.kind)
    }

    fn peek_is(&self, k: &Tok) -> bool {
        self.peek_kind() == Some(k)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn error_at(&self, pos: usize, msg: String) -> ParseError {
        ParseError::Syntax { pos, msg }
    }

    fn expect(&mut self, k: Tok) -> Result<usize, ParseError> {
        match self.peek() {
            Some(t) if t.kind == k => {
                let pos = t.pos;
                self.pos += 1;
                Ok(pos)
            }
            Some(t) => Err(self.error_at(t.pos, format!("expected {k}, found {}", t.kind))),
            None => Err(self.error_at(self.end, format!("expected {k}, found end of input"))),
        }
    }

    /// `F`, `G` or `U` directly followed by an interval.
    fn temporal_keyword(&self, name: &str) -> bool {
        matches!(self.peek_kind(), Some(Tok::Ident(n)) if n == name)
            && matches!(self.tokens.get(self.pos + 1), Some(t) if t.kind == Tok::LBracket)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek_is(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and()?;
        while self.peek_is(&Tok::Or) {
            self.pos += 1;
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.until()?;
        while self.peek_is(&Tok::And) {
            self.pos += 1;
            f = Formula::and(f, self.until()?);
        }
        Ok(f)
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.temporal_keyword("U") {
            self.pos += 1;
            let (lo, hi) = self.interval()?;
            let rhs = self.until()?;
            return Ok(Formula::until(lo, hi, lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error_at(self.end, "unexpected end of input".into()));
        };
        match &tok.kind {
            Tok::Not => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Tok::FreezeOpen => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::freeze(f))
            }
            Tok::LParen => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(n) if n == "true" => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Tok::Ident(n) if n == "false" => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Tok::Ident(n) if (n == "F" || n == "G") && self.temporal_keyword(n) => {
                let eventually = n == "F";
                self.pos += 1;
                let (lo, hi) = self.interval()?;
                let child = self.unary()?;
                Ok(if eventually {
                    Formula::eventually(lo, hi, child)
                } else {
                    Formula::globally(lo, hi, child)
                })
            }
            _ => self.atom(),
        }
    }

    fn interval(&mut self) -> Result<(Time, Time), ParseError> {
        let open = self.expect(Tok::LBracket)?;
        let lo = self.time_literal()?;
        self.expect(Tok::Comma)?;
        let hi = self.time_literal()?;
        self.expect(Tok::RBracket)?;
        if lo < Time::zero() || lo >= hi {
            return Err(ParseError::BadInterval {
                pos: open,
                lo: format_time(&lo),
                hi: format_time(&hi),
            });
        }
        Ok((lo, hi))
    }

    /// A decimal, optionally written as a fraction `p/q`.
    fn time_literal(&mut self) -> Result<Time, ParseError> {
        let pos = self.here();
        let neg = self.peek_is(&Tok::Minus);
        if neg {
            self.pos += 1;
        }
        let mut text = match self.peek_kind() {
            Some(Tok::Num(n)) => n.clone(),
            _ => return Err(self.error_at(self.here(), "expected a time bound".into())),
        };
        self.pos += 1;
        if self.peek_is(&Tok::Slash) {
            self.pos += 1;
            match self.peek_kind() {
                Some(Tok::Num(q)) => text = format!("{text}/{q}"),
                _ => return Err(self.error_at(self.here(), "expected a denominator".into())),
            }
            self.pos += 1;
        }
        match parse_time(&text) {
            Some(t) => Ok(if neg { -t } else { t }),
            None => Err(self.error_at(pos, format!("invalid time bound `{text}`"))),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let start = self.here();
        let lhs = self.linexpr()?;
        let op_pos = self.here();
        let (cmp, relaxed) = match self.peek_kind() {
            Some(Tok::Lt) => (Cmp::Lt, false),
            Some(Tok::Le) => (Cmp::Lt, true),
            Some(Tok::Gt) => (Cmp::Gt, false),
            Some(Tok::Ge) => (Cmp::Gt, true),
            Some(Tok::Eq) => return Err(ParseError::EqualityUnsupported { pos: op_pos }),
            Some(t) => return Err(self.error_at(op_pos, format!("expected a comparison, found {t}"))),
            None => return Err(self.error_at(op_pos, "expected a comparison, found end of input".into())),
        };
        self.pos += 1;
        if relaxed {
            self.warnings.push(Warning {
                pos: op_pos,
                message: "non-strict comparison treated as strict (boundary points are not distinguished)".into(),
            });
        }
        let rhs = self.linexpr()?;
        if self.peek_is(&Tok::Eq) {
            return Err(ParseError::EqualityUnsupported { pos: self.here() });
        }
        let mut plain = lhs.plain;
        let mut frozen = lhs.frozen;
        for (i, c) in rhs.plain {
            add_coeff(&mut plain, i, -c);
        }
        for (i, c) in rhs.frozen {
            add_coeff(&mut frozen, i, -c);
        }
        let plain = normalize_coeffs(plain);
        let frozen = normalize_coeffs(frozen);
        if plain.is_empty() && frozen.is_empty() {
            return Err(ParseError::ConstantComparison { pos: start });
        }
        // `0.0 - x` would print as `-0`; keep the sign canonical
        let bound = rhs.constant - lhs.constant + 0.0;
        Ok(Formula::Atom(LinearPredicate {
            plain,
            frozen,
            bound,
            cmp,
        }))
    }

    fn linexpr(&mut self) -> Result<Lin, ParseError> {
        let mut lin = Lin::default();
        let mut sign = 1.0;
        if self.peek_is(&Tok::Minus) {
            self.pos += 1;
            sign = -1.0;
        }
        loop {
            self.term(&mut lin, sign)?;
            match self.peek_kind() {
                Some(Tok::Plus) => sign = 1.0,
                Some(Tok::Minus) => sign = -1.0,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(lin)
    }

    fn term(&mut self, lin: &mut Lin, sign: f64) -> Result<(), ParseError> {
        let mut coeff = None;
        if let Some(Tok::Num(n)) = self.peek_kind() {
            let pos = self.here();
            let v: f64 = n
                .parse()
                .map_err(|_| self.error_at(pos, format!("invalid number `{n}`")))?;
            coeff = Some(v);
            self.pos += 1;
        }
        let pos = self.here();
        let (name, frozen) = match self.peek_kind() {
            Some(Tok::Ident(n)) if !is_keyword(n) && !self.temporal_keyword(n) => (n.clone(), false),
            Some(Tok::Frozen(n)) => (n.clone(), true),
            _ => {
                return match coeff {
                    Some(v) => {
                        lin.constant += sign * v;
                        Ok(())
                    }
                    None => Err(self.error_at(
                        pos,
                        match self.peek() {
                            Some(t) => format!("expected a number or variable, found {}", t.kind),
                            None => "expected a number or variable, found end of input".into(),
                        },
                    )),
                };
            }
        };
        self.pos += 1;
        let var = self
            .schema
            .index_of(&name)
            .ok_or(ParseError::UnknownVariable { pos, name })?;
        let c = sign * coeff.unwrap_or(1.0);
        if frozen {
            add_coeff(&mut lin.frozen, var, c);
        } else {
            add_coeff(&mut lin.plain, var, c);
        }
        Ok(())
    }
}
