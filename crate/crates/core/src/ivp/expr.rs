//! Polynomial vector fields and their natural interval extension.
//!
//! Grammar, with the usual precedence:
//!
//! ```text
//! field  := expr (';' expr)*
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | atom
//! atom   := number | 'y' index | '(' expr ')'
//! number := integer | integer '/' integer | integer '.' digits
//! ```
//!
//! Variables are `y1 … yn`. A slash is only accepted inside a rational
//! literal; the fields have no division.

use std::fmt;

use crate::error::{Error, Result};
use crate::interval_domain::{Interval, IntervalBox};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldExpr {
    Const(Rational),
    /// Zero-based variable index.
    Var(usize),
    Neg(Box<FieldExpr>),
    Add(Box<FieldExpr>, Box<FieldExpr>),
    Sub(Box<FieldExpr>, Box<FieldExpr>),
    Mul(Box<FieldExpr>, Box<FieldExpr>),
}

impl FieldExpr {
    pub fn eval(&self, y: &[Interval]) -> Interval {
        match self {
            FieldExpr::Const(c) => Interval::point(c.clone()),
            FieldExpr::Var(i) => y[*i].clone(),
            FieldExpr::Neg(a) => -&a.eval(y),
            FieldExpr::Add(a, b) => &a.eval(y) + &b.eval(y),
            FieldExpr::Sub(a, b) => &a.eval(y) - &b.eval(y),
            FieldExpr::Mul(a, b) => &a.eval(y) * &b.eval(y),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            FieldExpr::Const(_) => None,
            FieldExpr::Var(i) => Some(*i),
            FieldExpr::Neg(a) => a.max_var(),
            FieldExpr::Add(a, b) | FieldExpr::Sub(a, b) | FieldExpr::Mul(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldExpr::Const(c) => write!(f, "{}", format_rational(c)),
            FieldExpr::Var(i) => write!(f, "y{}", i + 1),
            FieldExpr::Neg(a) => write!(f, "-({a})"),
            FieldExpr::Add(a, b) => write!(f, "({a} + {b})"),
            FieldExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            FieldExpr::Mul(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

/// Natural interval extension of the field on a non-bottom box.
pub fn eval_field(field: &[FieldExpr], y: &IntervalBox) -> Result<IntervalBox> {
    let dims = y.dims().ok_or(Error::BottomInput)?;
    if dims.len() != field.len() {
        return Err(Error::dims(field.len(), dims.len()));
    }
    if let Some(v) = field.iter().filter_map(FieldExpr::max_var).max() {
        if v >= dims.len() {
            return Err(Error::dims(dims.len(), v + 1));
        }
    }
    Ok(IntervalBox::Boxed(
        field.iter().map(|e| e.eval(dims)).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Semi,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let err = |position: usize, message: &str| Error::ParseError {
        position,
        message: message.to_string(),
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' | b'-' | b'*' | b'(' | b')' | b';' => {
                let tok = match c {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    _ => Tok::Semi,
                };
                out.push((start, tok));
                i += 1;
            }
            b'/' => return Err(err(start, "division is not supported")),
            b'y' => {
                i += 1;
                let digits = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let index: usize = text[digits..i]
                    .parse()
                    .map_err(|_| err(start, "expected a variable index after 'y'"))?;
                if index == 0 {
                    return Err(err(start, "variables are numbered from y1"));
                }
                out.push((start, Tok::Var(index - 1)));
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                } else {
                    // rational literal p/q, allowing spaces around the slash
                    let mut j = i;
                    while j < bytes.len() && bytes[j] == b' ' {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j] == b'/' {
                        j += 1;
                        while j < bytes.len() && bytes[j] == b' ' {
                            j += 1;
                        }
                        let den = j;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        if den == j {
                            return Err(err(den, "expected a denominator"));
                        }
                        i = j;
                    }
                }
                let lit: String = text[start..i].chars().filter(|c| *c != ' ').collect();
                let value = parse_rational(&lit).map_err(|_| err(start, "invalid number"))?;
                out.push((start, Tok::Num(value)));
            }
            _ => return Err(err(start, &format!("unexpected character {:?}", c as char))),
        }
    }
    Ok(out)
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
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn fail<T>(&self, message: &str) -> Result<T> {
        Err(Error::ParseError {
            position: self.offset(),
            message: message.to_string(),
        })
    }

    fn expr(&mut self) -> Result<FieldExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = FieldExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = FieldExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<FieldExpr> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            lhs = FieldExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<FieldExpr> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(FieldExpr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<FieldExpr> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(FieldExpr::Const(v))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(FieldExpr::Var(i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.fail("expected a number, variable, or '('"),
            None => self.fail("unexpected end of input"),
        }
    }
}

/// Parses `n` semicolon-separated component expressions over `y1 … yn`.
pub fn parse_field(text: &str, n: usize) -> Result<Vec<FieldExpr>> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let mut out = vec![p.expr()?];
    loop {
        match p.peek() {
            None => break,
            Some(Tok::Semi) => {
                p.pos += 1;
                out.push(p.expr()?);
            }
            Some(_) => return p.fail("expected an operator, ';', or end of input"),
        }
    }
    if out.len() != n {
        return Err(Error::dims(n, out.len()));
    }
    // positions of variables for the range check
    for (pos, tok) in &p.toks {
        if let Tok::Var(i) = tok {
            if *i >= n {
                return Err(Error::ParseError {
                    position: *pos,
                    message: format!("variable y{} outside 1..={n}", i + 1),
                });
            }
        }
    }
    Ok(out)
}
