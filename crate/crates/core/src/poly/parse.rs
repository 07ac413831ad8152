//! Text form of polynomials.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | name | '(' expr ')'
//! ```
//!
//! `/` is only allowed inside a numeric literal and juxtaposition is never
//! multiplication.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Monomial, Polynomial, MAX_VARS};
use crate::rational::Rational;

/// Largest exponent accepted after `^`.
const MAX_EXPONENT: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("division by zero in coefficient at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("ring dimension {0} is not supported")]
    BadDimension(usize),
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

/// Parses with the default names `z1..zn`.
pub fn parse(text: &str, n: usize) -> Result<Polynomial, ParseError> {
    parse_with_names(text, &default_names(n))
}

pub fn parse_with_names(text: &str, names: &[String]) -> Result<Polynomial, ParseError> {
    if names.len() > MAX_VARS {
        return Err(ParseError::BadDimension(names.len()));
    }
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        names,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.names.len()
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
            let e: u32 = digits
                .parse()
                .ok()
                .filter(|e| *e <= MAX_EXPONENT)
                .ok_or(ParseError::Syntax {
                    pos: start,
                    message: format!("exponent exceeds {MAX_EXPONENT}"),
                })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.n();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let numer: BigInt = self.digits().parse().expect("digit run");
                let mut value = Rational::from_integer(numer);
                if let Some(b'/') = self.peek() {
                    self.pos += 1;
                    self.skip_ws();
                    let slash = self.pos;
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(self.error("`/` must be followed by an integer literal"));
                    }
                    let denom: BigInt = d.parse().expect("digit run");
                    if denom.is_zero() {
                        return Err(ParseError::DivisionByZero { pos: slash });
                    }
                    value /= Rational::from_integer(denom);
                }
                Ok(Polynomial::constant(n, value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                match self.names.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::term(n, Monomial::var(i), Rational::from_integer(1.into()))),
                    None => Err(ParseError::UnknownVariable { name, pos: start }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
