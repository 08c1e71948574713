//! Parser for frame entry expressions.
//!
//! Grammar: variables `x1..xn`, rational or decimal literals, `+ - * /`,
//! integer powers `^` (or `**`), parentheses, and the functions `sin`, `cos`,
//! `exp`. Entries without function calls convert to exact rational functions.

use crate::algebra::rational::{parse_rational, to_f64};
use crate::algebra::{RatFunc, Rational};
use crate::field::NumField;
use num::{One, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{message} at offset {offset} in `{source_text}`")]
pub struct ExprError {
    pub message: String,
    pub offset: usize,
    pub source_text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str, nvars: usize) -> Result<Expr, ExprError> {
        let mut p = Parser { src: text, bytes: text.as_bytes(), pos: 0, nvars };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// True when the expression contains no transcendental calls.
    pub fn is_rational(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_rational(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.is_rational() && b.is_rational(),
            Expr::Call(..) => false,
        }
    }

    /// Exact conversion; `None` for transcendental entries or division by zero.
    pub fn to_ratfunc(&self, n: usize) -> Option<RatFunc> {
        Some(match self {
            Expr::Num(q) => RatFunc::constant(n, q.clone()),
            Expr::Var(i) => RatFunc::var(n, *i),
            Expr::Neg(a) => a.to_ratfunc(n)?.neg(),
            Expr::Add(a, b) => a.to_ratfunc(n)?.add(&b.to_ratfunc(n)?),
            Expr::Sub(a, b) => a.to_ratfunc(n)?.sub(&b.to_ratfunc(n)?),
            Expr::Mul(a, b) => a.to_ratfunc(n)?.mul(&b.to_ratfunc(n)?),
            Expr::Div(a, b) => a.to_ratfunc(n)?.div(&b.to_ratfunc(n)?)?,
            Expr::Pow(a, e) => {
                let base = a.to_ratfunc(n)?;
                let mut acc = RatFunc::constant(n, Rational::one());
                for _ in 0..e.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                if *e < 0 {
                    RatFunc::constant(n, Rational::one()).div(&acc)?
                } else {
                    acc
                }
            }
            Expr::Call(..) => return None,
        })
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Num(q) => to_f64(q),
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval_f64(x),
            Expr::Add(a, b) => a.eval_f64(x) + b.eval_f64(x),
            Expr::Sub(a, b) => a.eval_f64(x) - b.eval_f64(x),
            Expr::Mul(a, b) => a.eval_f64(x) * b.eval_f64(x),
            Expr::Div(a, b) => a.eval_f64(x) / b.eval_f64(x),
            Expr::Pow(a, e) => a.eval_f64(x).powi(*e),
            Expr::Call(f, a) => f.apply(a.eval_f64(x)),
        }
    }

    fn constant_value(&self) -> Option<Rational> {
        match self {
            Expr::Num(q) => Some(q.clone()),
            _ => None,
        }
    }

    pub fn to_numeric(&self) -> NumField {
        if let Some(q) = self.constant_value() {
            return NumField::constant_f64(to_f64(&q));
        }
        let e = Arc::new(self.clone());
        NumField::from_fn(move |x| e.eval_f64(x))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Expr::Num(q) => write!(f, "({}/{})", q.numer(), q.denom()),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, e) => write!(f, "({a})^{e}"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError { message: msg.to_string(), offset: self.pos, source_text: self.src.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                b'-' => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') if self.bytes.get(self.pos + 1) != Some(&b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        let is_pow = match self.peek() {
            Some(b'^') => {
                self.pos += 1;
                true
            }
            Some(b'*') if self.bytes.get(self.pos + 1) == Some(&b'*') => {
                self.pos += 2;
                true
            }
            _ => false,
        };
        if !is_pow {
            return Ok(base);
        }
        self.skip_ws();
        let neg = if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer exponent"));
        }
        let e: i32 = self.src[start..self.pos].parse().map_err(|_| self.error("exponent too large"))?;
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.bytes.len() {
                    let c = self.bytes[self.pos];
                    let exp_sign = (c == b'+' || c == b'-') && matches!(self.bytes[self.pos - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let text = &self.src[start..self.pos];
                parse_rational(text).map(Expr::Num).ok_or_else(|| ExprError {
                    message: format!("bad number `{text}`"),
                    offset: start,
                    source_text: self.src.to_string(),
                })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word = &self.src[start..self.pos];
                let func = match word {
                    "sin" => Some(Func::Sin),
                    "cos" => Some(Func::Cos),
                    "exp" => Some(Func::Exp),
                    _ => None,
                };
                if let Some(func) = func {
                    if self.peek() != Some(b'(') {
                        return Err(self.error("expected `(` after function name"));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    if self.peek() != Some(b')') {
                        return Err(self.error("expected `)`"));
                    }
                    self.pos += 1;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                let idx = word
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= self.nvars);
                match idx {
                    Some(i) => Ok(Expr::Var(i - 1)),
                    None => Err(ExprError {
                        message: format!("unknown identifier `{word}` (variables are x1..x{})", self.nvars),
                        offset: start,
                        source_text: self.src.to_string(),
                    }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Literal zero entry.
pub fn is_zero_literal(e: &Expr) -> bool {
    matches!(e, Expr::Num(q) if q.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn parses_rational_expressions() {
        let e = Expr::parse("1 + x1^2", 2).unwrap();
        assert!(e.is_rational());
        let r = e.to_ratfunc(2).unwrap();
        assert_eq!(r.eval(&[int(2), int(0)]), Some(int(5)));
        let e = Expr::parse("x2/(1+x1)**2 - 3/4", 2).unwrap();
        let r = e.to_ratfunc(2).unwrap();
        assert_eq!(r.eval(&[int(1), int(4)]), Some(int(1) - rat(3, 4)));
        let e = Expr::parse("-x1*x2^-1", 2).unwrap();
        assert_eq!(e.to_ratfunc(2).unwrap().eval(&[int(3), int(2)]), Some(rat(-3, 2)));
        assert_eq!(Expr::parse("2.5e-1", 1).unwrap(), Expr::Num(rat(1, 4)));
    }

    #[test]
    fn transcendental_entries_are_numeric_only() {
        let e = Expr::parse("exp(x1) * cos(x2)", 2).unwrap();
        assert!(!e.is_rational());
        assert!(e.to_ratfunc(2).is_none());
        let v = e.to_numeric().value(&[0.0, 0.0]);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reports_errors_with_offsets() {
        let err = Expr::parse("x1 + y", 2).unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(Expr::parse("x3", 2).is_err());
        assert!(Expr::parse("(x1", 1).is_err());
        assert!(Expr::parse("x1^x1", 1).is_err());
        assert!(Expr::parse("1/(x1-x1)", 1).unwrap().to_ratfunc(1).is_none());
    }

    #[test]
    fn display_round_trips() {
        let e = Expr::parse("-(x1 - 2/3)*sin(x2)^2", 2).unwrap();
        let again = Expr::parse(&e.to_string(), 2).unwrap();
        assert_eq!(again.eval_f64(&[0.3, 0.7]), e.eval_f64(&[0.3, 0.7]));
    }
}
