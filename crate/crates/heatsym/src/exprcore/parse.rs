//! Text parser for the expression grammar.
//!
//! Grammar (integers, rationals `p/q`, symbol names, `+ - * ^`, parentheses):
//!
//! ```text
//! expr   := [ '+' | '-' ] term { ('+' | '-') term }
//! term   := factor { '*' factor }
//! factor := atom [ '^' uint ]
//! atom   := '(' expr ')' | number | name
//! number := uint [ '/' uint ]
//! ```
//!
//! Exponents must be nonnegative integers; implicit multiplication is not
//! allowed. Errors carry the byte offset into the input.

use super::{Expr, Symbol};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

/// Parse failure with the byte position in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax { pos: usize, message: String },
    UnknownIdentifier { pos: usize, name: String },
    BadExponent { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownIdentifier { pos, .. }
            | ParseError::BadExponent { pos } => *pos,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, message } => write!(f, "syntax error at {pos}: {message}"),
            ParseError::UnknownIdentifier { pos, name } => {
                write!(f, "unknown identifier `{name}` at {pos}")
            }
            ParseError::BadExponent { pos } => {
                write!(f, "exponent at {pos} must be a nonnegative integer")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let start = self.pos;
            let c = self.src[self.pos];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'+' => {
                    out.push((Tok::Plus, start));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((Tok::Minus, start));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((Tok::Star, start));
                    self.pos += 1;
                }
                b'/' => {
                    out.push((Tok::Slash, start));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((Tok::Caret, start));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((Tok::LParen, start));
                    self.pos += 1;
                }
                b')' => {
                    out.push((Tok::RParen, start));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    out.push((Tok::Int(digits.parse().unwrap()), start));
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    out.push((Tok::Name(name.to_string()), start));
                }
                other => {
                    return Err(ParseError::Syntax {
                        pos: start,
                        message: format!("unexpected character `{}`", other as char),
                    });
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.idx += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos(),
                message: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.idx += 1;
            }
            Some(Tok::Minus) => {
                negate = true;
                self.idx += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    let rhs = self.term()?;
                    acc = acc + rhs;
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    let rhs = self.term()?;
                    acc = acc - rhs;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.idx += 1;
            let rhs = self.factor()?;
            acc = acc * rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.idx += 1;
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let exp = u32::try_from(&n).map_err(|_| ParseError::BadExponent { pos })?;
                    Ok(base.pow(exp))
                }
                _ => Err(ParseError::BadExponent { pos }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Int(numer)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.idx += 1;
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(denom)) => {
                            if denom.is_zero() {
                                return Err(ParseError::Syntax {
                                    pos: dpos,
                                    message: "zero denominator".to_string(),
                                });
                            }
                            Ok(Expr::from_rational(BigRational::new(numer, denom)))
                        }
                        _ => Err(ParseError::Syntax {
                            pos: dpos,
                            message: "expected integer denominator".to_string(),
                        }),
                    }
                } else {
                    Ok(Expr::from_rational(BigRational::from_integer(numer)))
                }
            }
            Some(Tok::Name(name)) => match Symbol::from_name(&name) {
                Some(sym) => Ok(Expr::symbol(sym)),
                None => Err(ParseError::UnknownIdentifier { pos, name }),
            },
            _ => Err(ParseError::Syntax {
                pos,
                message: "expected `(`, number, or name".to_string(),
            }),
        }
    }
}

/// Parse `text` into a canonical [`Expr`].
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = Lexer { src: text.as_bytes(), pos: 0 }.tokens()?;
    let mut parser = Parser { toks, idx: 0, end: text.len() };
    let e = parser.expr()?;
    if parser.idx != parser.toks.len() {
        return Err(ParseError::Syntax {
            pos: parser.pos(),
            message: "trailing input".to_string(),
        });
    }
    Ok(e)
}
