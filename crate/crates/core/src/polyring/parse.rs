//! Parser for polynomial expressions.
//!
//! Accepts the canonical text form (`-27*a^2*d^2 + 18*a*b*c*d`) and the usual
//! hand-written extensions: parentheses, nested products, division by a
//! rational constant, and integer powers of any subexpression.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{MultiPoly, Rational, VariableId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
        } else if ch.is_ascii_digit() {
            let mut text = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                text.push(d);
                chars.next();
            }
            out.push(Token::Num(text.parse().expect("digits")));
        } else if ch.is_ascii_alphabetic() {
            let mut text = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_alphanumeric() {
                    break;
                }
                text.push(d);
                chars.next();
            }
            out.push(Token::Ident(text));
        } else if "+-*/^()".contains(ch) {
            out.push(Token::Op(ch));
            chars.next();
        } else {
            return Err(Error::Parse(format!("unexpected character {ch:?} at offset {pos}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(Error::Parse("division is only allowed by a nonzero constant".into()));
                }
                acc = acc.scale(&d.constant_term().recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = (&n)
                        .try_into()
                        .map_err(|_| Error::Parse(format!("exponent {n} too large")))?;
                    Ok(base.pow(e))
                }
                other => Err(Error::Parse(format!("expected an exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Token::Num(n) => Ok(MultiPoly::constant(Rational::from_integer(n))),
            Token::Ident(name) => VariableId::parse(&name)
                .map(MultiPoly::var)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}"))),
            Token::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing closing parenthesis".into()));
                }
                Ok(inner)
            }
            Token::Op(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

pub fn parse_poly(s: &str) -> Result<MultiPoly> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// Parses an exact rational such as `-3`, `5/4` or ` 7 `.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let r: Rational = s
        .parse()
        .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))?;
    if r.denom().is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(r)
}

impl FromStr for MultiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}
