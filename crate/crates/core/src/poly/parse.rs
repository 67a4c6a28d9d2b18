//! Recursive-descent parser for polynomial strings.
//!
//! ```text
//! expr   := sign? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := int | ident | '(' expr ')'
//! ident  := [a-z][0-9]*
//! ```
//!
//! Multiplication is always explicit: `x1y1` is read as one (unknown)
//! identifier, and `2x` is a syntax error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{Ambient, PolyError, RationalPolynomial};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str) -> Result<Vec<(Tok, usize)>, PolyError> {
        let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let end = t.0 == Tok::End;
            out.push(t);
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize), PolyError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if let Some(&n) = self.src.get(self.pos) {
                if n.is_ascii_alphabetic() || n == b'_' || n == b'(' {
                    return Err(PolyError::Syntax {
                        offset: self.pos,
                        message: "implicit multiplication is not allowed; use `*`".into(),
                    });
                }
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let v: BigInt = digits.parse().expect("digit run");
            return Ok((Tok::Int(v), start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            return Ok((Tok::Ident(word.to_string()), start));
        }
        Err(PolyError::Syntax { offset: start, message: format!("unexpected character `{}`", c as char) })
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    ambient: &'a Ambient,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<RationalPolynomial, PolyError> {
        let negate = match self.peek() {
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
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.try_add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalPolynomial, PolyError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.try_mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalPolynomial, PolyError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(v) => {
                let Some(k) = v.to_u32() else {
                    return self.err("exponent too large");
                };
                self.bump();
                Ok(base.pow(k))
            }
            _ => self.err("expected a non-negative integer exponent after `^`"),
        }
    }

    fn base(&mut self) -> Result<RationalPolynomial, PolyError> {
        let off = self.offset();
        match self.bump() {
            Tok::Int(v) => Ok(RationalPolynomial::constant(self.ambient, BigRational::from_integer(v))),
            Tok::Ident(name) => match self.ambient.var_index(&name) {
                Some(idx) => Ok(RationalPolynomial::var(self.ambient, idx)),
                None => Err(PolyError::UnknownVariable { name, offset: off }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(PolyError::Syntax { offset: off, message: "unexpected end of input".into() }),
            t => Err(PolyError::Syntax { offset: off, message: format!("unexpected token {t:?}") }),
        }
    }
}

/// Parse a polynomial string on the given ambient.
pub fn parse_poly(text: &str, ambient: &Ambient) -> Result<RationalPolynomial, PolyError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, i: 0, ambient };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input (implicit multiplication is not allowed)");
    }
    Ok(out)
}
