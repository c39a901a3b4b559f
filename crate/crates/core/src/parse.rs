//! Recursive-descent parser for polynomial expressions over `Q`.
//!
//! Grammar (see `docs/grammar.md`):
//!
//! ```text
//! expr   = [ "+" | "-" ] term { ( "+" | "-" ) term } ;
//! term   = factor { ( "*" | "/" ) factor } ;
//! factor = "-" factor | power ;
//! power  = atom [ "^" uint ] ;
//! atom   = uint | ident | "(" expr ")" ;
//! ```
//!
//! Division is only allowed by nonzero constants. Juxtaposition is an error.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::poly::QPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
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
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((Tok::Num(n), start));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn constant(&self, c: BigRational) -> QPoly {
        QPoly::constant(Rationals, self.vars.len(), c)
    }

    fn expr(&mut self) -> Result<QPoly> {
        let mut acc = match self.peek() {
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            Tok::Minus => {
                self.bump();
                -&self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    let pos = self.pos();
                    self.bump();
                    let d = self.factor()?;
                    if !d.is_constant() {
                        return self.err(pos, "division by a non-constant expression");
                    }
                    let Some(inv) = Rationals.inv(&d.constant_term()) else {
                        return self.err(pos, "division by zero");
                    };
                    acc = acc.scale(&inv);
                }
                Tok::Num(_) | Tok::Ident(_) | Tok::LParen => {
                    return self.err(self.pos(), "expected an operator; juxtaposition is not multiplication");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<QPoly> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.factor()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let caret = self.pos();
        self.bump();
        let Tok::Num(n) = self.peek().clone() else {
            return self.err(caret, "exponent must be an unsigned integer literal");
        };
        self.bump();
        if *self.peek() == Tok::Caret {
            return self.err(self.pos(), "chained exponents need parentheses");
        }
        let e: u32 = match u32::try_from(&n) {
            Ok(e) if e <= 1000 => e,
            _ => return self.err(caret, "exponent too large"),
        };
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<QPoly> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(self.constant(BigRational::from_integer(n))),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(QPoly::var(Rationals, self.vars.len(), i)),
                None => self.err(pos, format!("unknown variable '{name}'")),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err(self.pos(), "expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => self.err(pos, "unexpected end of input"),
            t => self.err(pos, format!("unexpected token {t:?}")),
        }
    }
}

/// Parse `src` as a polynomial in the given variables.
pub fn parse_polynomial<S: AsRef<str>>(src: &str, vars: &[S]) -> Result<QPoly> {
    let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
    for (i, v) in vars.iter().enumerate() {
        let ok = v
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || vars[..i].contains(v) {
            return Err(Error::Usage(format!("invalid or duplicate variable name '{v}'")));
        }
    }
    let mut p = Parser {
        toks: tokenize(src)?,
        at: 0,
        vars: &vars,
    };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err(p.pos(), "unexpected trailing input");
    }
    Ok(out)
}

/// Two-line rendering of a parse error with a caret under the offending column.
pub fn render_parse_error(src: &str, err: &Error) -> String {
    match err {
        Error::Parse { pos, msg } => format!("{src}\n{}^ {msg}", " ".repeat(*pos)),
        other => other.to_string(),
    }
}
