//! Non-associative expressions over named generators: syntax tree, parser,
//! canonical printer and substitution.
//!
//! Grammar (juxtaposition is a left-associative product):
//!
//! ```text
//! expr     := ["+"|"-"] term (("+"|"-") term)*
//! term     := [rational] factor+
//! factor   := ident | "(" expr ")"
//! rational := int ["/" int]
//! ident    := letter [digits] ["#" digits]
//! ```
//!
//! The `#k` suffix marks the k-th copy of a variable produced by
//! linearization. A lone `0` parses as the zero expression.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::lincomb::LinComb;
use crate::scalar::{Field, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown symbol {text:?} at position {pos}")]
    UnknownSymbol { pos: usize, text: String },
    #[error("unbound symbol {0}")]
    Unbound(Symbol),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A generator name such as `x1`, `a2`, `c`, or the linearization copy `x#2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    letter: char,
    index: Option<u32>,
    copy: Option<u32>,
}

impl Symbol {
    pub fn new(letter: char, index: Option<u32>) -> Symbol {
        assert!(letter.is_ascii_lowercase(), "generator letters are lowercase ASCII");
        Symbol { letter, index, copy: None }
    }

    pub fn plain(letter: char) -> Symbol {
        Symbol::new(letter, None)
    }

    pub fn indexed(letter: char, index: u32) -> Symbol {
        Symbol::new(letter, Some(index))
    }

    /// `x_i`, the standard multilinear variables.
    pub fn x(i: u32) -> Symbol {
        Symbol::indexed('x', i)
    }

    pub fn with_copy(self, copy: u32) -> Symbol {
        Symbol { copy: Some(copy), ..self }
    }

    pub fn letter(&self) -> char {
        self.letter
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }

    pub fn copy(&self) -> Option<u32> {
        self.copy
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter)?;
        if let Some(i) = self.index {
            write!(f, "{i}")?;
        }
        if let Some(c) = self.copy {
            write!(f, "#{c}")?;
        }
        Ok(())
    }
}

/// A bracketed product of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RawTerm {
    Leaf(Symbol),
    Node(Box<RawTerm>, Box<RawTerm>),
}

impl RawTerm {
    pub fn leaf(s: Symbol) -> RawTerm {
        RawTerm::Leaf(s)
    }

    pub fn node(l: RawTerm, r: RawTerm) -> RawTerm {
        RawTerm::Node(Box::new(l), Box::new(r))
    }

    /// The left-normed product `(((s1 s2) s3) ... sn)`.
    pub fn left_normed(symbols: &[Symbol]) -> RawTerm {
        let mut it = symbols.iter();
        let first = RawTerm::Leaf(*it.next().expect("empty word"));
        it.fold(first, |acc, s| RawTerm::node(acc, RawTerm::Leaf(*s)))
    }

    pub fn degree(&self) -> usize {
        match self {
            RawTerm::Leaf(_) => 1,
            RawTerm::Node(l, r) => l.degree() + r.degree(),
        }
    }

    pub fn leaves(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(8);
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Symbol>) {
        match self {
            RawTerm::Leaf(s) => out.push(*s),
            RawTerm::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    fn shape(&self, out: &mut Vec<bool>) {
        match self {
            RawTerm::Leaf(_) => out.push(true),
            RawTerm::Node(l, r) => {
                out.push(false);
                l.shape(out);
                r.shape(out);
            }
        }
    }

    /// True when every right factor is a single generator.
    pub fn is_left_normed(&self) -> bool {
        match self {
            RawTerm::Leaf(_) => true,
            RawTerm::Node(l, r) => matches!(**r, RawTerm::Leaf(_)) && l.is_left_normed(),
        }
    }

    /// Replaces every leaf through `f`.
    pub fn rename<F: FnMut(Symbol) -> Symbol>(&self, f: &mut F) -> RawTerm {
        match self {
            RawTerm::Leaf(s) => RawTerm::Leaf(f(*s)),
            RawTerm::Node(l, r) => RawTerm::node(l.rename(f), r.rename(f)),
        }
    }
}

impl Ord for RawTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.degree().cmp(&other.degree()).then_with(|| self.leaves().cmp(&other.leaves())).then_with(|| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            self.shape(&mut a);
            other.shape(&mut b);
            a.cmp(&b)
        })
    }
}

impl PartialOrd for RawTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RawTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawTerm::Leaf(s) => write!(f, "{s}"),
            RawTerm::Node(l, r) => match **r {
                RawTerm::Leaf(s) => write!(f, "{l} {s}"),
                _ => write!(f, "{l} ({r})"),
            },
        }
    }
}

/// A formal linear combination of raw terms.
pub type Expression = LinComb<RawTerm>;

/// Writes a linear combination with signed coefficients, omitting unit
/// coefficients; the zero combination prints as `0`.
pub(crate) fn write_lincomb<K: Ord + Clone, F>(f: &mut fmt::Formatter<'_>, lc: &LinComb<K>, mut key: F) -> fmt::Result
where
    F: FnMut(&mut fmt::Formatter<'_>, &K) -> fmt::Result,
{
    if lc.is_zero() {
        return write!(f, "0");
    }
    for (i, (k, c)) in lc.iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, false) => {}
            (0, true) => write!(f, "-")?,
            (_, false) => write!(f, " + ")?,
            (_, true) => write!(f, " - ")?,
        }
        let mag = c.abs();
        if !mag.is_one() {
            write!(f, "{mag} ")?;
        }
        key(f, k)?;
    }
    Ok(())
}

impl fmt::Display for LinComb<RawTerm> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lincomb(f, self, |f, t| write!(f, "{t}"))
    }
}

/// Bilinear product of two expressions.
pub fn expr_mul(a: &Expression, b: &Expression) -> Expression {
    let mut out = Expression::zero(a.field());
    for (ta, ca) in a {
        for (tb, cb) in b {
            out.add_term(RawTerm::node(ta.clone(), tb.clone()), &(ca * cb));
        }
    }
    out
}

/// All generators occurring in `e`.
pub fn symbols(e: &Expression) -> BTreeSet<Symbol> {
    e.keys().flat_map(|t| t.leaves()).collect()
}

/// Simultaneous substitution of expressions for generators, expanded
/// multilinearly.
pub fn substitute(e: &Expression, binding: &BTreeMap<Symbol, Expression>) -> Result<Expression, ExprError> {
    fn go(t: &RawTerm, binding: &BTreeMap<Symbol, Expression>) -> Result<Expression, ExprError> {
        match t {
            RawTerm::Leaf(s) => binding.get(s).cloned().ok_or(ExprError::Unbound(*s)),
            RawTerm::Node(l, r) => Ok(expr_mul(&go(l, binding)?, &go(r, binding)?)),
        }
    }
    let mut out = Expression::zero(e.field());
    for (t, c) in e {
        let v = go(t, binding)?;
        if v.field() != e.field() {
            return Err(ScalarError::ContextMismatch(e.field(), v.field()).into());
        }
        out.add_scaled(&v, c);
    }
    Ok(out)
}

/// Parses an expression over the rationals.
pub fn parse(text: &str) -> Result<Expression, ExprError> {
    parse_in(text, Field::Rational)
}

/// Parses an expression with coefficients taken in `field`.
pub fn parse_in(text: &str, field: Field) -> Result<Expression, ExprError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, field, end: text.len() };
    let e = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(p.error("unexpected token"));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(Symbol),
    Int(BigInt),
    Slash,
    Plus,
    Minus,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let ch = bytes[i];
        match ch {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            b'/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            b'0'..=b'9' => {
                let j = digits(i);
                out.push((i, Tok::Int(text[i..j].parse().unwrap())));
                i = j;
            }
            b'a'..=b'z' => {
                let start = i;
                let j = digits(i + 1);
                let index = if j > i + 1 {
                    Some(
                        text[i + 1..j]
                            .parse::<u32>()
                            .map_err(|_| ExprError::Syntax { pos: i + 1, message: "index too large".into() })?,
                    )
                } else {
                    None
                };
                let mut sym = Symbol::new(ch as char, index);
                i = j;
                if i < bytes.len() && bytes[i] == b'#' {
                    let k = digits(i + 1);
                    if k == i + 1 {
                        return Err(ExprError::Syntax { pos: i, message: "expected copy number after '#'".into() });
                    }
                    let copy = text[i + 1..k]
                        .parse::<u32>()
                        .map_err(|_| ExprError::Syntax { pos: i + 1, message: "copy number too large".into() })?;
                    sym = sym.with_copy(copy);
                    i = k;
                }
                out.push((start, Tok::Ident(sym)));
            }
            b'A'..=b'Z' => {
                let j = digits(i + 1);
                return Err(ExprError::UnknownSymbol { pos: i, text: text[i..j].to_string() });
            }
            _ => {
                let c = text[i..].chars().next().unwrap();
                if c.is_alphabetic() {
                    return Err(ExprError::UnknownSymbol { pos: i, text: c.to_string() });
                }
                return Err(ExprError::Syntax { pos: i, message: format!("unexpected character {c:?}") });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    field: Field,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax { pos: self.offset(), message: message.into() }
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut out = Expression::zero(self.field);
        let mut sign = 1i64;
        match self.peek() {
            Some(Tok::Plus) => self.pos += 1,
            Some(Tok::Minus) => {
                sign = -1;
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            out.add_scaled(&t, &Scalar::from_i64(self.field, sign));
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn rational(&mut self) -> Result<Option<BigRational>, ExprError> {
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return Ok(None);
        };
        self.pos += 1;
        if let Some(Tok::Slash) = self.peek() {
            self.pos += 1;
            let Some(Tok::Int(d)) = self.peek().cloned() else {
                return Err(self.error("expected denominator"));
            };
            if d.is_zero() {
                return Err(self.error("zero denominator"));
            }
            self.pos += 1;
            return Ok(Some(BigRational::new(n, d)));
        }
        Ok(Some(BigRational::from_integer(n)))
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        let start = self.offset();
        let coeff = self.rational()?;
        let mut acc: Option<Expression> = None;
        while let Some(f) = self.factor()? {
            acc = Some(match acc {
                None => f,
                Some(a) => expr_mul(&a, &f),
            });
        }
        let coeff = match coeff {
            Some(c) => Scalar::Rational(c).to_field(self.field)?,
            None => Scalar::one(self.field),
        };
        match acc {
            Some(e) => Ok(e.scaled(&coeff)),
            None if coeff.is_zero() => Ok(Expression::zero(self.field)),
            None => Err(ExprError::Syntax { pos: start, message: "expected a generator or '('".into() }),
        }
    }

    fn factor(&mut self) -> Result<Option<Expression>, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Some(Expression::basis(self.field, RawTerm::Leaf(s))))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(Some(e))
            }
            Some(Tok::Int(_)) => Err(self.error("coefficients may only start a term")),
            _ => Ok(None),
        }
    }
}
