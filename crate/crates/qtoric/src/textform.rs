//! Tokenizer and element expression parser.
//!
//! Elements are written in the canonical text form, e.g.
//! `3/2*q^-1*x1^2*x2 + xs`, which is an ordinary arithmetic expression over
//! generator names, the deformation parameter q, integers, `+ - * / ^` and
//! parentheses. Parsing evaluates the expression with braided multiplication,
//! so unsorted products like `xs*x*xs` normalize with the correct phases.
//! Rendering produces a valid expression, making the round trip exact.
//! `#` starts a line comment. The same tokenizer drives the workspace DSL.

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::scalar::Scalar;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Sym(char),
    Arrow,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub kind: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&d) = chars.peek() {
                if d == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    name.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            toks.push(Token { kind: Tok::Ident(name), line, col: start_col });
            continue;
        }
        if c.is_ascii_digit() {
            let mut num = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    num.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let value: i64 = num.parse().map_err(|_| Error::Syntax {
                line,
                col: start_col,
                msg: format!("integer literal `{num}` out of range"),
            })?;
            toks.push(Token { kind: Tok::Int(value), line, col: start_col });
            continue;
        }
        if c == '"' {
            chars.next();
            col += 1;
            let mut s = String::new();
            let mut closed = false;
            while let Some(d) = chars.next() {
                col += 1;
                match d {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => {
                        let Some(esc) = chars.next() else { break };
                        col += 1;
                        match esc {
                            '"' => s.push('"'),
                            '\\' => s.push('\\'),
                            'n' => s.push('\n'),
                            other => {
                                return Err(Error::Syntax {
                                    line,
                                    col,
                                    msg: format!("unknown escape `\\{other}`"),
                                })
                            }
                        }
                    }
                    '\n' => {
                        return Err(Error::Syntax {
                            line,
                            col: start_col,
                            msg: "unterminated string".into(),
                        })
                    }
                    other => s.push(other),
                }
            }
            if !closed {
                return Err(Error::Syntax {
                    line,
                    col: start_col,
                    msg: "unterminated string".into(),
                });
            }
            toks.push(Token { kind: Tok::Str(s), line, col: start_col });
            continue;
        }
        if c == '-' {
            chars.next();
            col += 1;
            if chars.peek() == Some(&'>') {
                chars.next();
                col += 1;
                toks.push(Token { kind: Tok::Arrow, line, col: start_col });
            } else {
                toks.push(Token { kind: Tok::Sym('-'), line, col: start_col });
            }
            continue;
        }
        if "+*/^()[]{},;:=".contains(c) {
            chars.next();
            col += 1;
            toks.push(Token { kind: Tok::Sym(c), line, col: start_col });
            continue;
        }
        return Err(Error::Syntax { line, col, msg: format!("unexpected character `{c}`") });
    }
    Ok(toks)
}

pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    pub fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.kind)
    }

    pub fn next(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1));
        let at_end = self.pos >= self.toks.len();
        Error::Syntax {
            line: if self.toks.is_empty() { 1 } else { line },
            col: if self.toks.is_empty() { 1 } else if at_end { col + 1 } else { col },
            msg: msg.into(),
        }
    }

    pub fn eat_arrow(&mut self) -> bool {
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected identifier")),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected `{kw}`"))),
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                true
            }
            _ => false,
        }
    }

    pub fn expect_int(&mut self) -> Result<i64> {
        let neg = self.eat_sym('-');
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("expected integer")),
        }
    }

    pub fn expect_str(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected string literal")),
        }
    }
}

// ---- element expressions ----

pub(crate) fn parse_element_expr(cur: &mut Cursor, p: &Arc<Presentation>) -> Result<Element> {
    let mut acc = parse_term(cur, p)?;
    loop {
        if cur.eat_sym('+') {
            let rhs = parse_term(cur, p)?;
            acc = acc.add(&rhs)?;
        } else if cur.eat_sym('-') {
            let rhs = parse_term(cur, p)?;
            acc = acc.sub(&rhs)?;
        } else {
            break;
        }
    }
    Ok(acc)
}

fn parse_term(cur: &mut Cursor, p: &Arc<Presentation>) -> Result<Element> {
    let mut acc = parse_factor(cur, p)?;
    loop {
        if cur.eat_sym('*') {
            let rhs = parse_factor(cur, p)?;
            acc = acc.mul(&rhs)?;
        } else if cur.eat_sym('/') {
            let rhs = parse_factor(cur, p)?;
            let inv = rhs
                .monomial_inverse()
                .map_err(|_| cur.err("can only divide by an invertible monomial or coefficient"))?;
            acc = acc.mul(&inv)?;
        } else {
            break;
        }
    }
    Ok(acc)
}

fn parse_factor(cur: &mut Cursor, p: &Arc<Presentation>) -> Result<Element> {
    if cur.eat_sym('-') {
        return Ok(parse_factor(cur, p)?.neg());
    }
    let base = parse_primary(cur, p)?;
    if cur.eat_sym('^') {
        let e = cur.expect_int()?;
        base.int_pow(e)
    } else {
        Ok(base)
    }
}

fn parse_primary(cur: &mut Cursor, p: &Arc<Presentation>) -> Result<Element> {
    match cur.peek().cloned() {
        Some(Tok::Int(v)) => {
            cur.next();
            Ok(p.scalar_element(Scalar::from_int(v)))
        }
        Some(Tok::Ident(name)) => {
            cur.next();
            if name == "q" {
                Ok(p.scalar_element(Scalar::q_pow(1)))
            } else {
                p.generator_by_name(&name)
            }
        }
        Some(Tok::Sym('(')) => {
            cur.next();
            let e = parse_element_expr(cur, p)?;
            cur.expect_sym(')')?;
            Ok(e)
        }
        _ => Err(cur.err("expected integer, generator, `q` or `(`")),
    }
}

impl Element {
    /// Integer power; negative exponents require a single invertible monomial.
    pub fn int_pow(&self, k: i64) -> Result<Element> {
        if k >= 0 {
            self.pow(k as u32)
        } else {
            self.monomial_inverse()?.pow((-k) as u32)
        }
    }

    /// Inverse of a single-term element whose support uses only invertible
    /// generators (or no generators at all).
    pub fn monomial_inverse(&self) -> Result<Element> {
        let mut it = self.terms();
        let Some((mono, coeff)) = it.next() else {
            return Err(Error::DivisionByZero);
        };
        if it.next().is_some() {
            return Err(Error::ZeroElement);
        }
        let p = self.algebra();
        for (i, e) in mono.0.iter().enumerate() {
            if *e != 0 && !p.generators()[i].invertible {
                return Err(Error::NegativeExponent(p.generators()[i].name.clone()));
            }
        }
        let inv_mono = crate::algebra::Monomial(mono.0.iter().map(|e| -e).collect());
        let phase = p.reorder_phase(&inv_mono, mono);
        let c = coeff.inv()?.mul(&Scalar::q_pow(-phase));
        p.monomial_element(inv_mono, c)
    }
}

impl Presentation {
    /// Parse the canonical element text form.
    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<Element> {
        let mut cur = Cursor::new(tokenize(text)?);
        let e = parse_element_expr(&mut cur, self)?;
        if !cur.at_end() {
            return Err(cur.err("trailing input after element"));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::deformation::DegreeVector;
    use proptest::prelude::*;

    #[test]
    fn parse_basic_forms() {
        let t = catalog::nc_torus_rank2();
        let x = t.generator(0).unwrap();
        let xs = t.generator(1).unwrap();
        assert_eq!(t.parse_element("x").unwrap(), x);
        assert_eq!(t.parse_element("0").unwrap(), t.zero());
        assert_eq!(
            t.parse_element("3/2*q^-1*x^2*xs").unwrap(),
            x.pow(2)
                .unwrap()
                .mul(&xs)
                .unwrap()
                .scale(&Scalar::rational(3, 2).mul(&Scalar::q_pow(-1)))
        );
        // unsorted words normalize with phases
        let w = t.parse_element("xs*x*xs").unwrap();
        assert_eq!(w, t.from_word(&[1, 0, 1], Scalar::one()).unwrap());
    }

    #[test]
    fn parse_rejects_garbage() {
        let t = catalog::nc_torus_rank2();
        assert!(matches!(t.parse_element("x +"), Err(Error::Syntax { .. })));
        assert!(matches!(t.parse_element("x y"), Err(Error::Syntax { .. })));
        assert_eq!(t.parse_element("nope").unwrap_err(), Error::UnknownGenerator("nope".into()));
        assert_eq!(t.parse_element("x^-1").unwrap_err(), Error::NegativeExponent("x".into()));
    }

    #[test]
    fn multi_term_coefficients_round_trip() {
        let t = catalog::nc_torus_rank2();
        let e = t.parse_element("(1 + q)*x - (q^2 - 3)*xs + 1/2").unwrap();
        let back = t.parse_element(&e.render()).unwrap();
        assert_eq!(back, e);
    }

    fn arb_element() -> impl Strategy<Value = String> {
        // random small expressions over the rank-2 torus
        let atom = prop_oneof![
            Just("x".to_string()),
            Just("xs".to_string()),
            Just("q".to_string()),
            (1i64..5).prop_map(|n| n.to_string()),
        ];
        proptest::collection::vec((atom, -2i64..4), 1..5).prop_map(|parts| {
            parts
                .iter()
                .enumerate()
                .map(|(i, (a, k))| {
                    let f = if a == "q" || a.chars().all(|c| c.is_ascii_digit()) {
                        format!("{a}^{}", k.abs())
                    } else {
                        format!("{a}^{}", (k.rem_euclid(3)) + 1)
                    };
                    if i == 0 {
                        f
                    } else if k % 2 == 0 {
                        format!(" + {f}")
                    } else {
                        format!("*{f}")
                    }
                })
                .collect::<String>()
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(src in arb_element()) {
            let t = catalog::nc_torus_rank2();
            let e = t.parse_element(&src).unwrap();
            let back = t.parse_element(&e.render()).unwrap();
            prop_assert_eq!(back, e);
        }
    }

    #[test]
    fn invertible_division() {
        // localization generator y is invertible: y^-1 parses
        let d = crate::deformation::DeformationData::new(vec![vec![0]]).unwrap();
        let f = crate::presentation::Presentation::free(
            d,
            vec![crate::algebra::GeneratorSpec::new("t", DegreeVector(vec![0]))],
        )
        .unwrap();
        let t = f.generator(0).unwrap();
        let loc = crate::presentation::localize(&f, &t).unwrap();
        let y_inv = loc.algebra.parse_element("y^-1").unwrap();
        let y = loc.algebra.generator(1).unwrap();
        assert_eq!(y_inv.mul(&y).unwrap(), loc.algebra.one());
        let div = loc.algebra.parse_element("t/y").unwrap();
        let t_loc = loc.algebra.generator(0).unwrap();
        assert_eq!(div, t_loc.mul(&y_inv).unwrap());
    }
}
