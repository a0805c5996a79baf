//! Recursive-descent parser for the coefficient grammar:
//!
//! ```text
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' NAT)?
//! atom   := RATIONAL | IDENT | '(' expr ')' | ('sin' | 'cos') '(' NAT? '*'? IDENT ')'
//! ```
//!
//! `RATIONAL` is `INT ('/' NAT)?`. A leading minus on an expression is
//! accepted so that printed canonical forms parse back.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{Patch, Rational, ScalarExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownCoordinate(String),
    AngleOutsideTrig(String),
    NonAngleInTrig(String),
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} at position {position}", describe(kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(m) => format!("syntax error: {m}"),
        ParseErrorKind::UnknownCoordinate(n) => format!("unknown coordinate `{n}`"),
        ParseErrorKind::AngleOutsideTrig(n) => {
            format!("angle coordinate `{n}` used outside sin/cos")
        }
        ParseErrorKind::NonAngleInTrig(n) => {
            format!("non-angle coordinate `{n}` inside sin/cos")
        }
        ParseErrorKind::ZeroDenominator => "zero denominator".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Num(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
                    position: start,
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    patch: &'a Patch,
}

/// Parses `text` over the coordinates of `patch` into canonical form.
pub fn parse(text: &str, patch: &Patch) -> Result<ScalarExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        patch,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.syntax(format!("unexpected {}", show(t)))),
    }
}

fn show(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Slash => "`/`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, msg: String) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax(msg),
            position: self.here(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}, found {}", show(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ScalarExpr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let n = self.nat("exponent")?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn nat(&mut self, what: &str) -> Result<u32, ParseError> {
        let at = self.here();
        match self.bump() {
            Tok::Num(n) => n.to_u32().ok_or(ParseError {
                kind: ParseErrorKind::Syntax(format!("{what} too large")),
                position: at,
            }),
            t => Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("expected {what}, found {}", show(&t))),
                position: at,
            }),
        }
    }

    fn atom(&mut self) -> Result<ScalarExpr, ParseError> {
        let at = self.here();
        match self.bump() {
            Tok::Num(n) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dat = self.here();
                    let d = match self.bump() {
                        Tok::Num(d) => d,
                        t => {
                            return Err(ParseError {
                                kind: ParseErrorKind::Syntax(format!(
                                    "expected denominator, found {}",
                                    show(&t)
                                )),
                                position: dat,
                            })
                        }
                    };
                    if d.is_zero() {
                        return Err(ParseError {
                            kind: ParseErrorKind::ZeroDenominator,
                            position: dat,
                        });
                    }
                    Ok(ScalarExpr::constant(Rational::new(n, d)))
                } else {
                    Ok(ScalarExpr::constant(Rational::from_integer(n)))
                }
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) if (name == "sin" || name == "cos") && *self.peek() == Tok::LParen => {
                self.bump();
                let freq = if matches!(self.peek(), Tok::Num(_)) {
                    let k = self.nat("frequency")?;
                    if *self.peek() == Tok::Star {
                        self.bump();
                    }
                    k
                } else {
                    1
                };
                let vat = self.here();
                let var = match self.bump() {
                    Tok::Ident(v) => v,
                    t => {
                        return Err(ParseError {
                            kind: ParseErrorKind::Syntax(format!(
                                "expected angle coordinate, found {}",
                                show(&t)
                            )),
                            position: vat,
                        })
                    }
                };
                let idx = self.lookup(&var, vat)?;
                if !self.patch.coord(idx).angle {
                    return Err(ParseError {
                        kind: ParseErrorKind::NonAngleInTrig(var),
                        position: vat,
                    });
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(if name == "sin" {
                    ScalarExpr::sin(idx, freq)
                } else {
                    ScalarExpr::cos(idx, freq)
                })
            }
            Tok::Ident(name) => {
                let idx = self.lookup(&name, at)?;
                if self.patch.coord(idx).angle {
                    return Err(ParseError {
                        kind: ParseErrorKind::AngleOutsideTrig(name),
                        position: at,
                    });
                }
                Ok(ScalarExpr::var(idx))
            }
            t => Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("unexpected {}", show(&t))),
                position: at,
            }),
        }
    }

    fn lookup(&self, name: &str, at: usize) -> Result<usize, ParseError> {
        self.patch.index_of(name).ok_or(ParseError {
            kind: ParseErrorKind::UnknownCoordinate(name.to_string()),
            position: at,
        })
    }
}
