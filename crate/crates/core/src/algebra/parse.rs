//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nonneg-int)?
//! base   := rational | coordinate | '(' expr ')'
//! rational := int ('/' posint)?
//! ```

use super::{Coordinate, MultiPoly, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownVariable { offset, .. } => {
                *offset
            }
        }
    }
}

pub fn parse_expr(s: &str) -> Result<MultiPoly, ParseError> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat(b'+') {
                acc += &self.term()?;
            } else if self.eat(b'-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let b = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected a non-negative integer exponent"));
            }
            let n: u32 = digits.parse().map_err(|_| ParseError::Syntax {
                offset: start,
                message: "exponent too large".into(),
            })?;
            if n > 255 {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: "exponent too large".into(),
                });
            }
            return Ok(b.pow(n));
        }
        Ok(b)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn base(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().parse().unwrap();
                let save = self.pos;
                if self.eat(b'/') {
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.digits();
                    if d.is_empty() {
                        self.pos = save;
                        return Err(ParseError::Syntax {
                            offset: at,
                            message: "expected a denominator".into(),
                        });
                    }
                    let d: BigInt = d.parse().unwrap();
                    if d.is_zero() {
                        return Err(ParseError::Syntax {
                            offset: at,
                            message: "zero denominator".into(),
                        });
                    }
                    return Ok(MultiPoly::constant(Rational::new(n, d)));
                }
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Coordinate::from_name(name)
                    .map(MultiPoly::var)
                    .ok_or_else(|| ParseError::UnknownVariable {
                        name: name.to_string(),
                        offset: start,
                    })
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        let f = parse_expr("p111 - p112 - 2*p122").unwrap();
        assert_eq!(f.to_string(), "p111 - p112 - 2*p122");
        let g = parse_expr("(x1 + 1)^2 - 1/2*p11").unwrap();
        assert_eq!(g.to_string(), "x1^2 + 2*x1 - 1/2*p11 + 1");
        assert_eq!(parse_expr(" - u ").unwrap().to_string(), "-u");
    }

    #[test]
    fn reports_offsets() {
        assert_eq!(
            parse_expr("p11 + q3").unwrap_err(),
            ParseError::UnknownVariable {
                name: "q3".into(),
                offset: 6
            }
        );
        assert_eq!(parse_expr("p11 +").unwrap_err().offset(), 5);
        assert_eq!(parse_expr("(p11").unwrap_err().offset(), 4);
        assert_eq!(parse_expr("p11^").unwrap_err().offset(), 4);
        assert_eq!(parse_expr("3/0").unwrap_err().offset(), 2);
        assert_eq!(parse_expr("p11 p12").unwrap_err().offset(), 4);
    }
}
