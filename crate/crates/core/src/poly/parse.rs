//! Recursive-descent parser for the polynomial grammar:
//! variables `x0..xN` and `t`, operators `+ - * ^`, integer exponents,
//! rational literals such as `3/4`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Poly, ParamPoly};
use crate::error::{CremonaError, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Var(usize),
    T,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => (out.push(Token::Plus), i += 1).1,
            '-' => (out.push(Token::Minus), i += 1).1,
            '*' => (out.push(Token::Star), i += 1).1,
            '^' => (out.push(Token::Caret), i += 1).1,
            '/' => (out.push(Token::Slash), i += 1).1,
            '(' => (out.push(Token::LParen), i += 1).1,
            ')' => (out.push(Token::RParen), i += 1).1,
            't' => (out.push(Token::T), i += 1).1,
            'x' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(CremonaError::Parse("variable x needs an index".into()));
                }
                let idx: String = chars[start..j].iter().collect();
                out.push(Token::Var(idx.parse().map_err(|_| CremonaError::Parse(format!("bad index {idx}")))?));
                i = j;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let lit: String = chars[i..j].iter().collect();
                out.push(Token::Num(lit.parse().expect("digits")));
                i = j;
            }
            other => return Err(CremonaError::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    field: Field,
    n: usize,
}

impl Parser {
    fn nvars(&self) -> usize {
        self.n + 2
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Token::Num(e)) => {
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| CremonaError::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(CremonaError::Parse("expected integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let nvars = self.nvars();
        match self.next() {
            Some(Token::Num(num)) => {
                let den = if self.peek() == Some(&Token::Slash) {
                    self.pos += 1;
                    match self.next() {
                        Some(Token::Num(d)) => d,
                        _ => return Err(CremonaError::Parse("expected denominator".into())),
                    }
                } else {
                    BigInt::from(1)
                };
                if den == BigInt::from(0) {
                    return Err(CremonaError::DivisionByZero);
                }
                let c = Scalar::from_rational(self.field, &BigRational::new(num, den))?;
                Ok(Poly::constant(self.field, nvars, c))
            }
            Some(Token::Var(i)) => {
                if i > self.n {
                    return Err(CremonaError::Parse(format!("variable x{i} exceeds x{}", self.n)));
                }
                Ok(Poly::var(self.field, nvars, i))
            }
            Some(Token::T) => Ok(Poly::var(self.field, nvars, self.n + 1)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(CremonaError::Parse("missing ')'".into())),
                }
            }
            Some(tok) => Err(CremonaError::Parse(format!("unexpected token {tok:?}"))),
            None => Err(CremonaError::Parse("unexpected end of input".into())),
        }
    }
}

/// Parses over `x0..xn` plus `t` (as the last variable).
fn parse_flat(field: Field, n: usize, s: &str) -> Result<Poly> {
    let mut parser = Parser { tokens: tokenize(s)?, pos: 0, field, n };
    if parser.tokens.is_empty() {
        return Err(CremonaError::Parse("empty polynomial".into()));
    }
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(CremonaError::Parse(format!("trailing input in {s:?}")));
    }
    Ok(p)
}

/// Parses a polynomial in `x0..xn` over `field`; `t` is rejected.
pub fn parse_poly(field: Field, n: usize, s: &str) -> Result<Poly> {
    let flat = parse_flat(field, n, s)?;
    if flat.uses_var(n + 1) {
        return Err(CremonaError::Parse("parameter t is not allowed here".into()));
    }
    let q = flat.into_param();
    Ok(q.map_coeffs(|c| c.coeff(0)))
}

/// Parses a polynomial in `x0..xn` whose coefficients may involve `t`.
pub fn parse_param_poly(field: Field, n: usize, s: &str) -> Result<ParamPoly> {
    Ok(parse_flat(field, n, s)?.into_param())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_and_errors() {
        let f = parse_poly(Field::Rationals, 1, "3/4*x0 - -x1").unwrap();
        assert_eq!(f.to_string(), "3/4*x0 + x1");
        assert!(parse_poly(Field::Rationals, 1, "x2").is_err());
        assert!(parse_poly(Field::Rationals, 1, "t*x0").is_err());
        assert!(parse_poly(Field::Rationals, 1, "x0 +").is_err());
        assert!(parse_poly(Field::Rationals, 1, "x0)").is_err());
        assert!(parse_poly(Field::Rationals, 1, "").is_err());
    }

    #[test]
    fn prime_field_literals() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(parse_poly(f7, 1, "-x0 + 1/2").unwrap().to_string(), "6*x0 + 4");
    }
}
