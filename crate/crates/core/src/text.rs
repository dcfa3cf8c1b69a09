//! Text grammar for field elements and skew series.
//!
//! ```text
//! series := ['+'|'-'] term (('+'|'-') term)* [('+') 'O(x^' int ')']
//! term   := factor (('*'|'/') factor)*       -- at most one x-power, never divided by
//! factor := 'x' ['^' int] | atom ['^' int]
//! atom   := integer | generator | '(' elem ')'
//! elem   := ['+'|'-'] eterm (('+'|'-') eterm)*
//! eterm  := atom ['^' int] (('*'|'/') atom ['^' int])*
//! ```
//!
//! The generator symbol is `g` for finite fields and `t` for `Q(t)`.
//! Printing always emits ascending exponents and an explicit `O(x^prec)`.

use num_bigint::BigInt;
use thiserror::Error;

use crate::field::AutField;
use crate::series::{SeriesError, SkewRing, SkewSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

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
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, TextError> {
    let bytes = src.as_bytes();
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
                out.push((start, Tok::Int(src[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(TextError::Syntax { pos: i, msg: format!("unexpected character {ch:?}") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

type Terms<E> = Vec<(i64, E)>;

struct Parser<'a, F: AutField> {
    field: &'a F,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl<'a, F: AutField> Parser<'a, F> {
    fn new(field: &'a F, src: &str) -> Result<Self, TextError> {
        Ok(Parser { field, toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TextError> {
        Err(TextError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), TextError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn signed_int(&mut self) -> Result<i64, TextError> {
        let neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        match self.peek().clone() {
            Tok::Int(v) => {
                let v: i64 = match i64::try_from(&v) {
                    Ok(v) => v,
                    Err(_) => return self.err("exponent out of range"),
                };
                self.bump();
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected integer exponent"),
        }
    }

    fn is_x(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "x")
    }

    fn is_big_oh(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "O") && *self.peek_at(1) == Tok::LParen
    }

    fn pow(&self, base: F::Elem, e: i64, at: usize) -> Result<F::Elem, TextError> {
        let k = self.field;
        let b = if e < 0 {
            k.inv(&base)
                .ok_or_else(|| TextError::Syntax { pos: at, msg: "zero raised to a negative power".into() })?
        } else {
            base
        };
        let mut acc = k.one();
        for _ in 0..e.unsigned_abs() {
            acc = k.mul(&acc, &b);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<F::Elem, TextError> {
        let k = self.field;
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(k.from_int(&v))
            }
            Tok::Ident(name) if name == k.generator_symbol() => {
                self.bump();
                Ok(k.generator())
            }
            Tok::Ident(name) => self.err(format!("unknown symbol {name:?}")),
            Tok::LParen => {
                self.bump();
                let e = self.elem()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => self.err("expected a number, the generator, or '('"),
        }
    }

    fn powered_atom(&mut self) -> Result<F::Elem, TextError> {
        let a = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            let e = self.signed_int()?;
            return self.pow(a, e, at);
        }
        Ok(a)
    }

    fn eterm(&mut self) -> Result<F::Elem, TextError> {
        let k = self.field;
        let mut acc = self.powered_atom()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let b = self.powered_atom()?;
                    acc = k.mul(&acc, &b);
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let b = self.powered_atom()?;
                    acc = k
                        .div(&acc, &b)
                        .ok_or_else(|| TextError::Syntax { pos: at, msg: "division by zero".into() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn elem(&mut self) -> Result<F::Elem, TextError> {
        let k = self.field;
        let mut neg = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                neg = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let first = self.eterm()?;
        let mut acc = if neg { k.neg(&first) } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.eterm()?;
                    acc = k.add(&acc, &t);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.eterm()?;
                    acc = k.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    /// A series term: product of field factors and at most one power of x.
    fn sterm(&mut self) -> Result<(i64, F::Elem), TextError> {
        let k = self.field;
        let mut coeff = k.one();
        let mut exp: Option<i64> = None;
        let mut op = Tok::Star;
        loop {
            if self.is_x() {
                if op == Tok::Slash {
                    return self.err("division by a power of x is not supported");
                }
                if exp.is_some() {
                    return self.err("more than one power of x in a term");
                }
                self.bump();
                exp = Some(if *self.peek() == Tok::Caret {
                    self.bump();
                    self.signed_int()?
                } else {
                    1
                });
            } else {
                let at = self.offset();
                let f = self.powered_atom()?;
                coeff = if op == Tok::Slash {
                    k.div(&coeff, &f)
                        .ok_or_else(|| TextError::Syntax { pos: at, msg: "division by zero".into() })?
                } else {
                    k.mul(&coeff, &f)
                };
            }
            match self.peek() {
                Tok::Star | Tok::Slash => op = self.bump(),
                _ => return Ok((exp.unwrap_or(0), coeff)),
            }
        }
    }

    fn big_oh(&mut self) -> Result<i64, TextError> {
        self.bump();
        self.expect(Tok::LParen, "'('")?;
        if !self.is_x() {
            return self.err("expected x inside O(...)");
        }
        self.bump();
        let e = if *self.peek() == Tok::Caret {
            self.bump();
            self.signed_int()?
        } else {
            1
        };
        self.expect(Tok::RParen, "')'")?;
        Ok(e)
    }

    fn series(&mut self) -> Result<(Terms<F::Elem>, Option<i64>), TextError> {
        let k = self.field;
        let mut terms = Vec::new();
        let mut prec = None;
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            if self.is_big_oh() {
                if sign < 0 {
                    return self.err("O(...) cannot be negated");
                }
                prec = Some(self.big_oh()?);
                break;
            }
            let (e, c) = self.sterm()?;
            terms.push((e, if sign < 0 { k.neg(&c) } else { c }));
            sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => break,
            };
            self.bump();
        }
        if *self.peek() != Tok::End {
            return self.err("unexpected trailing input");
        }
        Ok((terms, prec))
    }
}

/// Parses a field element.
pub fn parse_elem<F: AutField>(field: &F, src: &str) -> Result<F::Elem, TextError> {
    let mut p = Parser::new(field, src)?;
    let e = p.elem()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses a series. Without an `O(x^N)` suffix the precision is
/// `val + default_prec`, where `val` is the least exponent with a nonzero
/// coefficient (or 0 when there is none).
pub fn parse_series<F: AutField>(
    d: &SkewRing<F>,
    src: &str,
    default_prec: i64,
) -> Result<SkewSeries<F::Elem>, TextError> {
    let k = d.field();
    let (terms, prec) = Parser::new(k, src)?.series()?;
    let prec = match prec {
        Some(p) => p,
        None => {
            let merged = d.from_terms(&terms, terms.iter().map(|(e, _)| e + 1).max().unwrap_or(0).max(1))?;
            merged.valuation().unwrap_or(0) + default_prec
        }
    };
    Ok(d.from_terms(&terms, prec)?)
}

fn needs_parens(s: &str) -> bool {
    !s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'^' || b == b'*')
}

/// Canonical text: nonzero terms by ascending exponent, then `O(x^prec)`.
pub fn format_series<F: AutField>(field: &F, f: &SkewSeries<F::Elem>) -> String {
    let mut parts = Vec::new();
    for (e, c) in f.terms() {
        if field.is_zero(c) {
            continue;
        }
        let cs = field.format_elem(c);
        let cs = if needs_parens(&cs) { format!("({cs})") } else { cs };
        parts.push(format!("{cs}*x^{e}"));
    }
    parts.push(format!("O(x^{})", f.prec()));
    parts.join(" + ")
}
