//! Text syntax for cuspidals, segments, series and (multi)segment lists.
//!
//! ```text
//! cuspidal     := "nu(" exp ")" [ "*" rho ] | rho
//! rho          := "rho(" name "," size [ "," name ] ")"
//! segment      := cuspidal ".." cuspidal | "[" cuspidal ".." cuspidal "]"
//! factor       := cuspidal | "Q[" segment "]" | "Z[" segment "]"
//! series       := factor { "x" factor }
//! generic      := "Q(" segment { ";" segment } ")" | "Q[" segment "]"
//! multisegment := "Z(" segment { ";" segment } ")"
//! ```
//!
//! Every `Display` impl in the crate prints in this syntax.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::segment::{parse_rational, Cuspidal, CuspidalLine, Multisegment, Rational, Segment};
use crate::series::{Factor, GenericRep, PrincipalSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseErrorKind {
    /// Malformed text.
    Syntax,
    /// Well-formed text naming an invalid object.
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "invalid expression",
        };
        write!(
            f,
            "{kind} at {}:{}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Star,
    Comma,
    Semi,
    DotDot,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Num(s) => write!(f, "'{s}'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBrack => write!(f, "'['"),
            Tok::RBrack => write!(f, "']'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Comma => write!(f, "','"),
            Tok::Semi => write!(f, "';'"),
            Tok::DotDot => write!(f, "'..'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    lines: HashMap<String, CuspidalLine>,
}

fn locate(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(src: &str, offset: usize, kind: ParseErrorKind, message: String) -> ParseError {
    let (line, column) = locate(src, offset);
    ParseError {
        kind,
        line,
        column,
        message,
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        let single = match ch {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBrack),
            b']' => Some(Tok::RBrack),
            b'*' => Some(Tok::Star),
            b',' => Some(Tok::Comma),
            b';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(t) = single {
            toks.push((t, start));
            i += 1;
        } else if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch == b'.' {
            if bytes.get(i + 1) == Some(&b'.') {
                toks.push((Tok::DotDot, start));
                i += 2;
            } else {
                return Err(error_at(
                    src,
                    start,
                    ParseErrorKind::Syntax,
                    "expected '..'".into(),
                ));
            }
        } else if ch == b'-' || ch == b'+' || ch.is_ascii_digit() {
            if !ch.is_ascii_digit() {
                i += 1;
            }
            let digits = |i: &mut usize| {
                let s = *i;
                while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                    *i += 1;
                }
                *i > s
            };
            if !digits(&mut i) {
                return Err(error_at(
                    src,
                    start,
                    ParseErrorKind::Syntax,
                    "expected digits".into(),
                ));
            }
            if bytes.get(i) == Some(&b'/') {
                i += 1;
                if !digits(&mut i) {
                    return Err(error_at(
                        src,
                        start,
                        ParseErrorKind::Syntax,
                        "expected denominator".into(),
                    ));
                }
            }
            let text = src[start..i].trim_start_matches('+').to_string();
            toks.push((Tok::Num(text), start));
        } else if ch.is_ascii_alphabetic() || ch == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            toks.push((Tok::Ident(src[start..i].to_string()), start));
        } else {
            let c = src[start..].chars().next().unwrap();
            return Err(error_at(
                src,
                start,
                ParseErrorKind::Syntax,
                format!("unexpected character '{c}'"),
            ));
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(toks)
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        Ok(Parser {
            src,
            toks: tokenize(src)?,
            pos: 0,
            lines: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, expected: &str) -> ParseError {
        error_at(
            self.src,
            self.offset(),
            ParseErrorKind::Syntax,
            format!("expected {expected}, found {}", self.peek()),
        )
    }

    fn semantic(&self, at: usize, err: impl fmt::Display) -> ParseError {
        error_at(self.src, at, ParseErrorKind::Semantic, err.to_string())
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(&tok.to_string()))
        }
    }

    fn at_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.syntax("end of input"))
        }
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(s) => parse_rational(&s)
                .ok_or_else(|| self.semantic(at, format!("invalid exponent '{s}'"))),
            _ => {
                self.pos -= 1;
                Err(self.syntax("an exponent"))
            }
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            Tok::Ident(s) | Tok::Num(s) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.syntax("a line name"))
            }
        }
    }

    fn rho(&mut self) -> Result<CuspidalLine, ParseError> {
        let at = self.offset();
        self.bump(); // rho
        self.expect(Tok::LParen)?;
        let id = self.name()?;
        self.expect(Tok::Comma)?;
        let size_at = self.offset();
        let size = match self.bump() {
            Tok::Num(s) => s
                .parse::<u32>()
                .map_err(|_| self.semantic(size_at, format!("invalid line size '{s}'")))?,
            _ => {
                self.pos -= 1;
                return Err(self.syntax("a line size"));
            }
        };
        let dual = if *self.peek() == Tok::Comma {
            self.bump();
            Some(self.name()?)
        } else {
            None
        };
        self.expect(Tok::RParen)?;
        let line = match dual {
            Some(d) => CuspidalLine::new(id.clone(), size, d),
            None => CuspidalLine::self_dual(id.clone(), size),
        }
        .map_err(|e| self.semantic(at, e))?;
        if line.is_trivial() {
            return Ok(line);
        }
        for (key, l) in [(line.id(), line.clone()), (line.dual_id(), line.dual())] {
            match self.lines.get(key) {
                Some(prev) if *prev != l => {
                    return Err(
                        self.semantic(at, format!("line '{key}' is declared inconsistently"))
                    )
                }
                Some(_) => {}
                None => {
                    self.lines.insert(key.to_string(), l);
                }
            }
        }
        Ok(line)
    }

    fn cuspidal(&mut self) -> Result<Cuspidal, ParseError> {
        if self.at_ident("rho") {
            let line = self.rho()?;
            return Ok(Cuspidal::new(line, Rational::from_integer(0)));
        }
        if !self.at_ident("nu") {
            return Err(self.syntax("'nu' or 'rho'"));
        }
        self.bump();
        self.expect(Tok::LParen)?;
        let exp = self.exponent()?;
        self.expect(Tok::RParen)?;
        let line = if *self.peek() == Tok::Star {
            self.bump();
            if !self.at_ident("rho") {
                return Err(self.syntax("'rho'"));
            }
            self.rho()?
        } else {
            CuspidalLine::trivial()
        };
        Ok(Cuspidal::new(line, exp))
    }

    fn segment(&mut self) -> Result<Segment, ParseError> {
        let at = self.offset();
        let bracketed = *self.peek() == Tok::LBrack;
        if bracketed {
            self.bump();
        }
        let a = self.cuspidal()?;
        self.expect(Tok::DotDot)?;
        let b = self.cuspidal()?;
        if bracketed {
            self.expect(Tok::RBrack)?;
        }
        Segment::from_ends(a, b).map_err(|e| self.semantic(at, e))
    }

    fn segment_list(&mut self) -> Result<Vec<Segment>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut segs = vec![self.segment()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            segs.push(self.segment()?);
        }
        self.expect(Tok::RParen)?;
        Ok(segs)
    }

    fn bracketed_segment(&mut self) -> Result<Segment, ParseError> {
        self.expect(Tok::LBrack)?;
        let d = self.segment()?;
        self.expect(Tok::RBrack)?;
        Ok(d)
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        if self.at_ident("Q") {
            self.bump();
            Ok(Factor::q(self.bracketed_segment()?))
        } else if self.at_ident("Z") {
            self.bump();
            Ok(Factor::z(self.bracketed_segment()?))
        } else if self.at_ident("nu") || self.at_ident("rho") {
            Ok(Factor::Cuspidal(self.cuspidal()?))
        } else {
            Err(self.syntax("a factor"))
        }
    }
}

fn wrap_semantic(src: &str, e: Error) -> ParseError {
    match e {
        Error::Parse(p) => p,
        other => error_at(src, 0, ParseErrorKind::Semantic, other.to_string()),
    }
}

fn run<T>(
    src: &str,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut p = Parser::new(src)?;
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

pub fn parse_cuspidal(src: &str) -> Result<Cuspidal, ParseError> {
    run(src, |p| p.cuspidal())
}

pub fn parse_segment(src: &str) -> Result<Segment, ParseError> {
    run(src, |p| p.segment())
}

pub fn parse_factor(src: &str) -> Result<Factor, ParseError> {
    run(src, |p| p.factor())
}

pub fn parse_series(src: &str) -> Result<PrincipalSeries, ParseError> {
    let factors = run(src, |p| {
        let mut factors = vec![p.factor()?];
        while p.at_ident("x") {
            p.bump();
            factors.push(p.factor()?);
        }
        Ok(factors)
    })?;
    PrincipalSeries::new(factors).map_err(|e| wrap_semantic(src, e))
}

pub fn parse_generic(src: &str) -> Result<GenericRep, ParseError> {
    let segs = run(src, |p| {
        if !p.at_ident("Q") {
            return Err(p.syntax("'Q'"));
        }
        p.bump();
        if *p.peek() == Tok::LBrack {
            Ok(vec![p.bracketed_segment()?])
        } else {
            p.segment_list()
        }
    })?;
    GenericRep::new(segs).map_err(|e| wrap_semantic(src, e))
}

pub fn parse_multisegment(src: &str) -> Result<Multisegment, ParseError> {
    let segs = run(src, |p| {
        if !p.at_ident("Z") {
            return Err(p.syntax("'Z'"));
        }
        p.bump();
        p.segment_list()
    })?;
    Ok(Multisegment::new(segs))
}
