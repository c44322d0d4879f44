//! Recursive-descent parser for the polynomial text format.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nonneg-int)?
//! atom   := int | int '/' int | 'x' | 'y' | 't' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. There is no implicit multiplication: `2x` is an error.

use num_bigint::BigInt;

use super::{BiPoly, Monomial, Poly, PolyError, UniPoly};
use crate::numeric::{CoeffDomain, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
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

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("'{n}'"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

fn syntax(pos: usize, message: impl Into<String>) -> PolyError {
    PolyError::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, M: Monomial> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    domain: CoeffDomain,
    _ring: std::marker::PhantomData<&'a M>,
}

impl<M: Monomial> Parser<'_, M> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly<M>, PolyError> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<M>, PolyError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly<M>, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e = u32::try_from(&n).map_err(|_| syntax(pos, format!("exponent {n} too large")))?;
                    return Ok(base.pow(e));
                }
                Some(t) => return Err(syntax(pos, format!("expected exponent, found {}", describe(&t)))),
                None => return Err(syntax(pos, "expected exponent, found end of input")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<M>, PolyError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d == BigInt::from(0) {
                                return Err(syntax(dpos, "zero denominator"));
                            }
                            Ok(Poly::constant(Scalar::from_ratio(self.domain, &n, &d)?))
                        }
                        _ => Err(syntax(dpos, "expected integer denominator")),
                    }
                } else {
                    Ok(Poly::constant(Scalar::from_bigint(self.domain, &n)))
                }
            }
            Some(Tok::Ident(name)) => match M::variable(&name) {
                Some(m) => Ok(Poly::term(Scalar::one(self.domain), m)),
                None => Err(PolyError::UnknownVariable { pos, name }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(t) => Err(syntax(close, format!("expected ')', found {}", describe(&t)))),
                    None => Err(syntax(close, "expected ')', found end of input")),
                }
            }
            Some(t) => Err(syntax(pos, format!("unexpected {}", describe(&t)))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn parse<M: Monomial>(text: &str, domain: CoeffDomain) -> Result<Poly<M>, PolyError> {
    let mut p: Parser<'_, M> = Parser {
        toks: lex(text)?,
        idx: 0,
        end: text.len(),
        domain,
        _ring: std::marker::PhantomData,
    };
    let out = p.expr()?;
    if let Some(t) = p.peek() {
        let msg = match t {
            Tok::Ident(_) | Tok::Int(_) | Tok::LParen => {
                format!("unexpected {} (write '*' for multiplication)", describe(t))
            }
            t => format!("unexpected {}", describe(t)),
        };
        return Err(syntax(p.pos(), msg));
    }
    Ok(out)
}

/// Parses a polynomial in `x` and `y`.
pub fn parse_bipoly(text: &str, domain: CoeffDomain) -> Result<BiPoly, PolyError> {
    parse(text, domain)
}

/// Parses a polynomial in `t`.
pub fn parse_unipoly(text: &str, domain: CoeffDomain) -> Result<UniPoly, PolyError> {
    parse(text, domain)
}
