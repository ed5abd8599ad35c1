//! The `.gman` manifest format.
//!
//! ```text
//! manifold heisenberg
//! dim 7
//! coframe e0 e1 e2 e3 e4 e5 e6
//! param k = 1
//! d e1 = -1 e4^e5
//! d e6 = -k e0^e5 + 2*k e1^e2
//! inject rbar <49 numbers>
//! inject dphi = <4-form>
//! inject dstarphi = <2-form d*phi, or 5-form d(*phi)>
//! hypersurface M1 normal +e3 theta 0|pi/2|cs <c> <s> [B <36 numbers>]
//! ```
//!
//! `#` starts a comment. Generators without a `d` line are closed. `B` is indexed by
//! the six tangent labels in coframe order.

use std::collections::BTreeMap;
use std::fmt;

use gstruct_core::exterior::SignedIndex;
use gstruct_core::scalar::{parse_rational, Float, Rational, Scalar};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// `sign · number · param`, with either factor optional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coef {
    pub negative: bool,
    pub number: Option<String>,
    pub param: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: Coef,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Injection {
    Rbar(Vec<String>),
    /// `dφ` and either `d*φ` (grade 2) or `d∗φ` (grade 5).
    Derivatives { dphi: Vec<Term>, dstarphi: Vec<Term>, dstarphi_grade: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaSpec {
    Zero,
    HalfPi,
    Cs(String, String),
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaSpec::Zero => write!(f, "0"),
            ThetaSpec::HalfPi => write!(f, "pi/2"),
            ThetaSpec::Cs(c, s) => write!(f, "cs {c} {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypersurfaceSpec {
    pub name: String,
    pub line: usize,
    pub normal: SignedIndex,
    pub theta: ThetaSpec,
    pub shape: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub name: String,
    pub coframe: Vec<String>,
    pub params: BTreeMap<String, String>,
    /// Generator index to the terms of its `d`.
    pub d: BTreeMap<usize, Vec<Term>>,
    pub inject: Option<Injection>,
    pub hypersurfaces: Vec<HypersurfaceSpec>,
}

impl Manifest {
    pub fn label_of(&self, normal: SignedIndex) -> String {
        format!("{}{}", if normal.negative { "-" } else { "+" }, self.coframe[normal.index])
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &body[s..i], column: body[..s].chars().count() + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &body[s..], column: body[..s].chars().count() + 1 });
    }
    out
}

/// Integers, `p/q` and plain decimals.
fn is_number(text: &str) -> bool {
    parse_rational(text).is_some()
}

fn is_ident(text: &str) -> bool {
    let mut chars = text.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser {
    line: usize,
    name: Option<String>,
    dim_seen: bool,
    coframe: Option<Vec<String>>,
    params: BTreeMap<String, String>,
    d: BTreeMap<usize, Vec<Term>>,
    d_line: Option<usize>,
    rbar: Option<Vec<String>>,
    dphi: Option<(Vec<Term>, usize)>,
    dstarphi: Option<(Vec<Term>, usize, usize)>,
    inject_line: Option<usize>,
    hypersurfaces: Vec<HypersurfaceSpec>,
}

impl Parser {
    fn err<T>(&self, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, column, message: message.into() })
    }

    fn expect<'a>(&self, toks: &'a [Token<'a>], i: usize, what: &str) -> Result<&'a Token<'a>, ParseError> {
        match toks.get(i) {
            Some(t) => Ok(t),
            None => {
                let column = toks.last().map_or(1, |t| t.column + t.text.chars().count());
                self.err(column, format!("expected {what}"))
            }
        }
    }

    fn coframe(&self, column: usize) -> Result<&Vec<String>, ParseError> {
        match &self.coframe {
            Some(c) => Ok(c),
            None => self.err(column, "coframe must be declared first"),
        }
    }

    fn label(&self, tok: &Token) -> Result<usize, ParseError> {
        self.label_text(tok.text, tok.column)
    }

    fn label_text(&self, text: &str, column: usize) -> Result<usize, ParseError> {
        match self.coframe(column)?.iter().position(|l| l == text) {
            Some(i) => Ok(i),
            None => self.err(column, format!("unknown coframe label '{text}'")),
        }
    }

    fn number(&self, tok: &Token) -> Result<String, ParseError> {
        if is_number(tok.text) {
            Ok(tok.text.to_string())
        } else {
            self.err(tok.column, format!("expected a number, found '{}'", tok.text))
        }
    }

    fn numbers(&self, toks: &[Token], count: usize, what: &str) -> Result<Vec<String>, ParseError> {
        if toks.len() != count {
            let column = toks.get(count).or(toks.last()).map_or(1, |t| t.column);
            return self.err(column, format!("{what} needs {count} numbers, found {}", toks.len()));
        }
        toks.iter().map(|t| self.number(t)).collect()
    }

    fn coef(&self, text: &str, column: usize, negative: bool) -> Result<Coef, ParseError> {
        let (number, param) = match text.split_once('*') {
            Some((n, p)) => (Some(n), Some(p)),
            None if is_number(text) => (Some(text), None),
            None => (None, Some(text)),
        };
        if let Some(n) = number {
            if !is_number(n) {
                return self.err(column, format!("bad coefficient '{text}'"));
            }
        }
        if let Some(p) = param {
            if !self.params.contains_key(p) {
                return self.err(column, format!("unknown parameter '{p}'"));
            }
        }
        Ok(Coef { negative, number: number.map(str::to_string), param: param.map(str::to_string) })
    }

    /// `[±]coef? label^label…` terms joined by `+` or `-`.
    fn expression(&self, toks: &[Token], grade: Option<usize>) -> Result<(Vec<Term>, usize), ParseError> {
        if toks.is_empty() {
            return self.err(1, "empty expression");
        }
        let mut terms = Vec::new();
        let mut found_grade = None;
        let mut i = 0;
        let mut negative = false;
        let mut need_term = true;
        while i < toks.len() {
            let t = &toks[i];
            if t.text == "+" || t.text == "-" {
                if need_term && i > 0 {
                    return self.err(t.column, "two signs in a row");
                }
                negative = t.text == "-";
                need_term = true;
                i += 1;
                continue;
            }
            if !need_term {
                return self.err(t.column, format!("expected '+' or '-', found '{}'", t.text));
            }
            let (mut text, mut column) = (t.text, t.column);
            if let Some(rest) = text.strip_prefix('-') {
                negative = !negative;
                text = rest;
                column += 1;
            } else if let Some(rest) = text.strip_prefix('+') {
                text = rest;
                column += 1;
            }
            let is_monomial = |s: &str| s.contains('^') || self.coframe.as_ref().is_some_and(|c| c.iter().any(|l| l == s));
            let coef = if is_monomial(text) {
                Coef { negative, number: None, param: None }
            } else {
                let c = self.coef(text, column, negative)?;
                i += 1;
                match toks.get(i) {
                    Some(m) if is_monomial(m.text) => {
                        text = m.text;
                        column = m.column;
                    }
                    Some(m) => return self.err(m.column, format!("expected a wedge monomial, found '{}'", m.text)),
                    None => return self.err(column + text.chars().count(), "coefficient without a monomial"),
                }
                c
            };
            let mut indices = Vec::new();
            let mut offset = column;
            for part in text.split('^') {
                let idx = self.label_text(part, offset)?;
                if indices.contains(&idx) {
                    return self.err(offset, format!("repeated label '{part}' in monomial"));
                }
                indices.push(idx);
                offset += part.chars().count() + 1;
            }
            match (found_grade, grade) {
                (_, Some(g)) if indices.len() != g => {
                    return self.err(column, format!("expected a {g}-form term, found degree {}", indices.len()))
                }
                (Some(g), _) if indices.len() != g => return self.err(column, "terms of different degrees"),
                _ => found_grade = Some(indices.len()),
            }
            terms.push(Term { coef, indices });
            negative = false;
            need_term = false;
            i += 1;
        }
        if need_term {
            let last = toks.last().expect("non-empty");
            return self.err(last.column, "dangling sign");
        }
        Ok((terms, found_grade.unwrap_or(0)))
    }

    fn check_injection_allowed(&self, column: usize) -> Result<(), ParseError> {
        if let Some(l) = self.d_line {
            return self.err(column, format!("torsion injection conflicts with the structure equations on line {l}"));
        }
        Ok(())
    }

    fn statement(&mut self, toks: &[Token]) -> Result<(), ParseError> {
        let head = &toks[0];
        match head.text {
            "manifold" => {
                if self.name.is_some() {
                    return self.err(head.column, "duplicate manifold line");
                }
                let name = self.expect(toks, 1, "a manifold name")?;
                if toks.len() > 2 {
                    return self.err(toks[2].column, "unexpected token");
                }
                self.name = Some(name.text.to_string());
            }
            "dim" => {
                let t = self.expect(toks, 1, "a dimension")?;
                if t.text != "7" {
                    return self.err(t.column, format!("only dimension 7 is supported, found '{}'", t.text));
                }
                if toks.len() > 2 {
                    return self.err(toks[2].column, "unexpected token");
                }
                self.dim_seen = true;
            }
            "coframe" => {
                if self.coframe.is_some() {
                    return self.err(head.column, "duplicate coframe line");
                }
                let labels: Vec<String> = toks[1..].iter().map(|t| t.text.to_string()).collect();
                if labels.len() != 7 {
                    return self.err(head.column, format!("coframe needs 7 labels, found {}", labels.len()));
                }
                for (i, t) in toks[1..].iter().enumerate() {
                    if !is_ident(t.text) {
                        return self.err(t.column, format!("invalid label '{}'", t.text));
                    }
                    if labels[..i].contains(&labels[i]) {
                        return self.err(t.column, format!("duplicate label '{}'", t.text));
                    }
                }
                self.coframe = Some(labels);
            }
            "param" => {
                let id = self.expect(toks, 1, "a parameter name")?;
                if !is_ident(id.text) {
                    return self.err(id.column, format!("invalid parameter name '{}'", id.text));
                }
                if self.coframe.as_ref().is_some_and(|c| c.iter().any(|l| l == id.text)) {
                    return self.err(id.column, "parameter name clashes with a coframe label");
                }
                if self.params.contains_key(id.text) {
                    return self.err(id.column, format!("duplicate parameter '{}'", id.text));
                }
                let eq = self.expect(toks, 2, "'='")?;
                if eq.text != "=" {
                    return self.err(eq.column, "expected '='");
                }
                let v = self.expect(toks, 3, "a value")?;
                let value = self.number(v)?;
                if toks.len() > 4 {
                    return self.err(toks[4].column, "unexpected token");
                }
                self.params.insert(id.text.to_string(), value);
            }
            "d" => {
                let g = self.expect(toks, 1, "a generator")?;
                let idx = self.label(g)?;
                if let Some(l) = self.inject_line {
                    return self.err(head.column, format!("structure equations conflict with the torsion injection on line {l}"));
                }
                if self.d.contains_key(&idx) {
                    return self.err(g.column, format!("duplicate d for generator '{}'", g.text));
                }
                let eq = self.expect(toks, 2, "'='")?;
                if eq.text != "=" {
                    return self.err(eq.column, "expected '='");
                }
                self.expect(toks, 3, "an expression")?;
                let (terms, _) = self.expression(&toks[3..], Some(2))?;
                self.d.insert(idx, terms);
                self.d_line.get_or_insert(self.line);
            }
            "inject" => {
                self.check_injection_allowed(head.column)?;
                let kind = self.expect(toks, 1, "rbar, dphi or dstarphi")?;
                match kind.text {
                    "rbar" => {
                        if self.rbar.is_some() || self.dphi.is_some() || self.dstarphi.is_some() {
                            return self.err(kind.column, "torsion is already injected");
                        }
                        self.rbar = Some(self.numbers(&toks[2..], 49, "rbar")?);
                    }
                    "dphi" | "dstarphi" => {
                        if self.rbar.is_some() {
                            return self.err(kind.column, "torsion is already injected as rbar");
                        }
                        let taken = if kind.text == "dphi" { self.dphi.is_some() } else { self.dstarphi.is_some() };
                        if taken {
                            return self.err(kind.column, format!("duplicate inject {}", kind.text));
                        }
                        let eq = self.expect(toks, 2, "'='")?;
                        if eq.text != "=" {
                            return self.err(eq.column, "expected '='");
                        }
                        self.expect(toks, 3, "an expression")?;
                        if kind.text == "dphi" {
                            let (terms, _) = self.expression(&toks[3..], Some(4))?;
                            self.dphi = Some((terms, self.line));
                        } else {
                            let (terms, grade) = self.expression(&toks[3..], None)?;
                            if grade != 2 && grade != 5 {
                                return self.err(toks[3].column, format!("dstarphi must be a 2-form or a 5-form, found degree {grade}"));
                            }
                            self.dstarphi = Some((terms, grade, self.line));
                        }
                    }
                    other => return self.err(kind.column, format!("unknown injection '{other}'")),
                }
                self.inject_line.get_or_insert(self.line);
            }
            "hypersurface" => self.hypersurface(toks)?,
            other => return self.err(head.column, format!("unknown statement '{other}'")),
        }
        Ok(())
    }

    fn hypersurface(&mut self, toks: &[Token]) -> Result<(), ParseError> {
        let name = self.expect(toks, 1, "a hypersurface name")?;
        if self.hypersurfaces.iter().any(|h| h.name == name.text) {
            return self.err(name.column, format!("duplicate hypersurface '{}'", name.text));
        }
        let kw = self.expect(toks, 2, "'normal'")?;
        if kw.text != "normal" {
            return self.err(kw.column, "expected 'normal'");
        }
        let n = self.expect(toks, 3, "a signed normal such as +e3")?;
        let (negative, label) = match n.text.split_at(n.text.len().min(1)) {
            ("+", rest) => (false, rest),
            ("-", rest) => (true, rest),
            _ => return self.err(n.column, "the normal needs an explicit sign, e.g. +e3"),
        };
        let index = self.label_text(label, n.column + 1)?;
        let kw = self.expect(toks, 4, "'theta'")?;
        if kw.text != "theta" {
            return self.err(kw.column, "expected 'theta'");
        }
        let t = self.expect(toks, 5, "0, pi/2 or cs <c> <s>")?;
        let (theta, mut next) = match t.text {
            "0" => (ThetaSpec::Zero, 6),
            "pi/2" => (ThetaSpec::HalfPi, 6),
            "cs" => {
                let c = self.number(self.expect(toks, 6, "cos theta")?)?;
                let s = self.number(self.expect(toks, 7, "sin theta")?)?;
                if !on_unit_circle(&c, &s) {
                    return self.err(toks[6].column, format!("c^2 + s^2 != 1 for ({c}, {s})"));
                }
                (ThetaSpec::Cs(c, s), 8)
            }
            other => return self.err(t.column, format!("expected 0, pi/2 or cs, found '{other}'")),
        };
        let mut shape = None;
        if let Some(b) = toks.get(next) {
            if b.text != "B" {
                return self.err(b.column, format!("expected 'B', found '{}'", b.text));
            }
            next += 1;
            let entries = self.numbers(&toks[next..], 36, "B")?;
            for i in 0..6 {
                for j in 0..i {
                    if !same_number(&entries[i * 6 + j], &entries[j * 6 + i]) {
                        return self.err(toks[next + i * 6 + j].column, "B must be symmetric");
                    }
                }
            }
            shape = Some(entries);
        }
        self.hypersurfaces.push(HypersurfaceSpec {
            name: name.text.to_string(),
            line: self.line,
            normal: SignedIndex { index, negative },
            theta,
            shape,
        });
        Ok(())
    }
}

/// Exactly on the circle, or within the float tolerance (a float pair).
fn on_unit_circle(c: &str, s: &str) -> bool {
    let (Some(c), Some(s)) = (parse_rational(c), parse_rational(s)) else {
        return false;
    };
    let exact = c.clone() * c.clone() + s.clone() * s.clone();
    exact == Rational::one() || {
        let (c, s) = (Float::from_rational(&c), Float::from_rational(&s));
        (c * c + s * s - Float::one()).is_zero()
    }
}

fn same_number(a: &str, b: &str) -> bool {
    parse_rational(a) == parse_rational(b)
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ParseError> {
    let mut p = Parser {
        line: 0,
        name: None,
        dim_seen: false,
        coframe: None,
        params: BTreeMap::new(),
        d: BTreeMap::new(),
        d_line: None,
        rbar: None,
        dphi: None,
        dstarphi: None,
        inject_line: None,
        hypersurfaces: Vec::new(),
    };
    for (n, line) in text.lines().enumerate() {
        p.line = n + 1;
        let toks = tokenize(line);
        if !toks.is_empty() {
            p.statement(&toks)?;
        }
    }
    let end = text.lines().count().max(1);
    let fail = |line: usize, message: &str| Err(ParseError { line, column: 1, message: message.into() });
    let Some(name) = p.name else { return fail(end, "missing manifold line") };
    if !p.dim_seen {
        return fail(end, "missing dim line");
    }
    let Some(coframe) = p.coframe else { return fail(end, "missing coframe line") };
    let inject = match (p.rbar, p.dphi, p.dstarphi) {
        (Some(r), _, _) => Some(Injection::Rbar(r)),
        (None, Some((dphi, _)), Some((dstarphi, grade, _))) => Some(Injection::Derivatives { dphi, dstarphi, dstarphi_grade: grade }),
        (None, Some((_, line)), None) => return fail(line, "inject dphi needs a matching inject dstarphi"),
        (None, None, Some((_, _, line))) => return fail(line, "inject dstarphi needs a matching inject dphi"),
        (None, None, None) => None,
    };
    if inject.is_some() {
        if let Some(h) = p.hypersurfaces.iter().find(|h| h.shape.is_none()) {
            return fail(h.line, "hypersurfaces of injected torsion data need an explicit B");
        }
    }
    Ok(Manifest { name, coframe, params: p.params, d: p.d, inject, hypersurfaces: p.hypersurfaces })
}
