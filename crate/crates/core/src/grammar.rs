//! Text syntax for polynomials and field constants.
//!
//! ```text
//! sum     := ['+'|'-'] product (('+'|'-') product)*
//! product := power ('*' power)*
//! power   := atom ['^' integer]
//! atom    := integer ['/' integer] | ident | '(' sum ')'
//! ident   := z | zb | i | w              field constants ζ, ζ̄, i, ζ₁₂
//!          | [abcdfg][0-9]*               orbit parameter, slot suffix
//!          | [xyz][0-9]+_[1-3][1-3]       generic factor coordinate
//! ```
//! Whitespace is insignificant.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::poly::{FactorSlot, Letter, Polynomial, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                out.push((start, Tok::Int(src[start..pos].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                out.push((start, Tok::Ident(src[start..pos].to_string())));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((start, tok));
        pos += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn sum(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        let mut first = true;
        loop {
            let negate = match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    false
                }
                Some(Tok::Minus) => {
                    self.bump();
                    true
                }
                _ if first => false,
                _ => break,
            };
            let term = self.product()?;
            if negate {
                acc = &acc - &term;
            } else {
                acc.add_assign_ref(&term);
            }
            first = false;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let rhs = self.power()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) if e <= 64 => e,
                        _ => return self.err("exponent out of range"),
                    };
                    return Ok(base.pow(e));
                }
                _ => {
                    self.at -= 1;
                    return self.err("expected integer exponent");
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => Ok(Polynomial::constant(Rational::new(n, d).into())),
                        Some(Tok::Int(_)) => {
                            self.at -= 1;
                            self.err("zero denominator")
                        }
                        _ => {
                            self.at -= 1;
                            self.err("expected denominator")
                        }
                    }
                } else {
                    Ok(Polynomial::constant(Rational::from_integer(n).into()))
                }
            }
            Some(Tok::Ident(name)) => match ident(&name) {
                Some(p) => Ok(p),
                None => {
                    self.at -= 1;
                    self.err(format!("unknown identifier {name:?}"))
                }
            },
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.at -= 1;
                        self.err("expected ')'")
                    }
                }
            }
            Some(_) => {
                self.at -= 1;
                self.err("expected a number, identifier or '('")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

fn ident(name: &str) -> Option<Polynomial> {
    match name {
        "z" => return Some(Cyclotomic::zeta().into()),
        "zb" => return Some(Cyclotomic::zeta_bar().into()),
        "i" => return Some(Cyclotomic::imag().into()),
        "w" => return Some(Cyclotomic::root12().into()),
        _ => {}
    }
    parse_var(name).map(Polynomial::var)
}

/// Parses a variable name as printed by `Var`'s `Display`.
pub fn parse_var(name: &str) -> Option<Var> {
    let mut chars = name.chars();
    let head = chars.next()?;
    let rest = chars.as_str();
    if let Some(letter) = Letter::from_char(head) {
        if rest.is_empty() {
            return Some(Var::param(0, letter));
        }
        if rest.bytes().all(|b| b.is_ascii_digit()) && !rest.starts_with('0') {
            return rest.parse().ok().map(|slot| Var::param(slot, letter));
        }
        return None;
    }
    let slot = match head {
        'x' => FactorSlot::X,
        'y' => FactorSlot::Y,
        'z' => FactorSlot::Z,
        _ => return None,
    };
    let (term, rc) = rest.split_once('_')?;
    if term.is_empty() || !term.bytes().all(|b| b.is_ascii_digit()) || term.starts_with('0') {
        return None;
    }
    let rc = rc.as_bytes();
    if rc.len() != 2 || !(b'1'..=b'3').contains(&rc[0]) || !(b'1'..=b'3').contains(&rc[1]) {
        return None;
    }
    Some(Var::Factor {
        term: term.parse().ok()?,
        slot,
        row: rc[0] - b'0',
        col: rc[1] - b'0',
    })
}

pub fn parse_polynomial(src: &str) -> Result<Polynomial> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let out = p.sum()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a field constant written in the same syntax (no variables).
pub fn parse_cyclotomic(src: &str) -> Result<Cyclotomic> {
    let p = parse_polynomial(src)?;
    p.as_constant().ok_or_else(|| Error::Parse {
        pos: 0,
        msg: format!("expected a constant, found variables in {src:?}"),
    })
}
