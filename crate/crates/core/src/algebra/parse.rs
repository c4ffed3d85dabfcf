//! Text format for integer polynomials in `t` and `u`.
//!
//! Accepts integer literals, the variables `t` and `u`, `+ - *`, `^` with a
//! nonnegative integer exponent, and parentheses, e.g. `u^2 - t^3 + 2*t - 1`.
//! Whitespace is ignored. Anything else (decimals, division, other names) is
//! rejected with the byte offset of the offending token.

use num_bigint::BigInt;

use super::BivPoly;
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 256;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    T,
    U,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'.' || bytes[i] == b'e' || bytes[i] == b'E') {
                    return Err(err(i, "non-integer coefficient"));
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            't' => Tok::T,
            'u' => Tok::U,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '.' => return Err(err(i, "non-integer coefficient")),
            '/' => return Err(err(i, "division is not supported; coefficients must be integers")),
            other => return Err(err(i, format!("unexpected character {other:?}"))),
        };
        out.push((i, tok));
        i += 1;
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
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<BivPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BivPoly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BivPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BivPoly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Some(Tok::Int(e)) => {
                    let e: u32 = e
                        .try_into()
                        .ok()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| err(at, format!("exponent exceeds {MAX_EXPONENT}")))?;
                    Ok(base.pow(e))
                }
                _ => Err(err(at, "expected a nonnegative integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<BivPoly> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(c)) => Ok(BivPoly::constant(c)),
            Some(Tok::T) => Ok(BivPoly::var_t()),
            Some(Tok::U) => Ok(BivPoly::var_u()),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.offset();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err(close, "expected ')'")),
                }
            }
            Some(tok) => Err(err(at, format!("unexpected token {tok:?}"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

/// Parses a polynomial in `t` and `u` with integer coefficients.
pub fn parse_bivariate(text: &str) -> Result<BivPoly> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let poly = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return Err(err(parser.offset(), "trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_caret_powers() {
        let g = parse_bivariate("u^2 - t^3 + 2*t - 1").unwrap();
        assert_eq!(g, BivPoly::from_terms(&[(0, 2, 1), (3, 0, -1), (1, 0, 2), (0, 0, -1)]));
    }

    #[test]
    fn whitespace_variations_agree() {
        let a = parse_bivariate("u^2-t^3+2*t-1").unwrap();
        let b = parse_bivariate("  u ^ 2 -   t^3\t+ 2 * t -1 ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn products_and_parentheses() {
        let a = parse_bivariate("u^2 - t*(t-1)*(t-2)").unwrap();
        let b = parse_bivariate("u^2 - t^3 + 3*t^2 - 2*t").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_bivariate("-(u - 1)^2").unwrap(), parse_bivariate("-u^2 + 2*u - 1").unwrap());
    }

    #[test]
    fn rejects_non_integer_coefficients() {
        assert!(matches!(parse_bivariate("u^2 - 0.5*t"), Err(Error::Parse { offset: 7, .. })));
        assert!(matches!(parse_bivariate("u^2 - t/2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_bivariate("u^2 - 1e3"), Err(Error::Parse { .. })));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "u^", "u^-1", "(u + t", "u t", "x^2 - t", "u^2 -", "u^100000"] {
            assert!(parse_bivariate(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn display_round_trips() {
        for text in ["u^2 - t^3 + 2*t - 1", "3*u^3*t - u + 7", "t*u^2 - 1"] {
            let g = parse_bivariate(text).unwrap();
            assert_eq!(parse_bivariate(&g.to_string()).unwrap(), g);
        }
    }
}
