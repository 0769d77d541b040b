//! Text syntax for globe words.
//!
//! ```text
//! word := atom ("o" LEVEL atom)*            left-associative
//! atom := "v" INT | "G" DIGIT+ | "inv" LEVEL "(" word ")"
//!       | "s" LEVEL LEVEL "(" word ")" | "(" word ")"
//! ```
//!
//! Levels are single digits. `Display` on [`Word`] prints this syntax back.

use std::fmt;

use thiserror::Error;

use super::{GlobeError, Word};
use crate::complex::{Simplex, SkeletalComplex, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSimplex(Simplex),
    UnknownVertex(VertexId),
    Globe(GlobeError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => f.write_str(m),
            ParseErrorKind::UnknownSimplex(s) => write!(f, "{s} is not a simplex of the complex"),
            ParseErrorKind::UnknownVertex(v) => write!(f, "v{v} is not a vertex of the complex"),
            ParseErrorKind::Globe(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

/// Parses `text` into a validated word over `c`.
pub fn parse_word(text: &str, c: &SkeletalComplex) -> Result<Word, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        complex: c,
    };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    complex: &'a SkeletalComplex,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    fn at(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{}`", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn level(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(d) if d.is_ascii_digit() => {
                self.pos += 1;
                Ok((d - b'0') as usize)
            }
            _ => Err(self.syntax("expected a level digit")),
        }
    }

    fn digits(&mut self) -> Result<&[u8], ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|d| d.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut left = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() != Some(b'o') {
                return Ok(left);
            }
            let op = self.pos;
            self.pos += 1;
            let level = self.level()?;
            let right = self.atom()?;
            left = Word::compose(level, left, right)
                .map_err(|e| self.at(op, ParseErrorKind::Globe(e)))?;
        }
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'v') => {
                self.pos += 1;
                let d = self.digits()?;
                let v: VertexId = std::str::from_utf8(d)
                    .expect("ascii digits")
                    .parse()
                    .map_err(|_| self.at(start, ParseErrorKind::Syntax("vertex id too large".into())))?;
                if !self.complex.has_vertex(v) {
                    return Err(self.at(start, ParseErrorKind::UnknownVertex(v)));
                }
                Ok(Word::vertex(v))
            }
            Some(b'G') => {
                self.pos += 1;
                let d = self.digits()?;
                let verts: Vec<VertexId> = d.iter().map(|b| (b - b'0') as VertexId).collect();
                let s = Simplex::new(&verts).filter(|s| s.dim() >= 1).ok_or_else(|| {
                    self.at(
                        start,
                        ParseErrorKind::Syntax("a generator names 2 to 4 vertices".into()),
                    )
                })?;
                if !self.complex.contains(&s) {
                    return Err(self.at(start, ParseErrorKind::UnknownSimplex(s)));
                }
                Word::gen(s).map_err(|e| self.at(start, ParseErrorKind::Globe(e)))
            }
            Some(b'i') => {
                if !self.keyword("inv") {
                    return Err(self.syntax("expected `inv`"));
                }
                let level = self.level()?;
                self.expect(b'(')?;
                let child = self.word()?;
                self.expect(b')')?;
                Word::invert(level, child).map_err(|e| self.at(start, ParseErrorKind::Globe(e)))
            }
            Some(b's') => {
                self.pos += 1;
                let i = self.level()?;
                let k = self.level()?;
                self.expect(b'(')?;
                let child = self.word()?;
                self.expect(b')')?;
                Word::degenerate(i, k, child).map_err(|e| self.at(start, ParseErrorKind::Globe(e)))
            }
            Some(c) => Err(self.syntax(format!("unexpected `{}`", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}
