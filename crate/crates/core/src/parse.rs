//! The curve-file input language: a small polynomial expression grammar and
//! the JSON curve-file schema.
//!
//! Grammar:
//! ```text
//! expr  := ['-'] term (('+'|'-') term)*
//! term  := coeff ['*' atom] | atom
//! atom  := var ['^' nat]
//! coeff := int ['/' posint]
//! ```
//! Whitespace is insignificant, like terms combine, zero coefficients are
//! elided.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;

use crate::algebra::{Polynomial, Rational, Var};
use crate::curve::{CurveElement, Parametrization};
use crate::error::{Error, Result};

/// JSON schema of a curve file.
#[derive(Debug, Deserialize)]
pub struct CurveFile {
    pub branches: usize,
    pub vars: Vec<String>,
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Tok<'a> {
    Int(&'a str),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

struct Lexer<'a> {
    toks: Vec<(Tok<'a>, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(src: &str) -> Result<Lexer<'_>> {
    let mut toks = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    while i < bytes.len() {
        let (l, c) = (line, col);
        let ch = bytes[i] as char;
        match ch {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            ch if ch.is_whitespace() => {}
            '+' => toks.push((Tok::Plus, l, c)),
            '-' => toks.push((Tok::Minus, l, c)),
            '*' => toks.push((Tok::Star, l, c)),
            '^' => toks.push((Tok::Caret, l, c)),
            '/' => toks.push((Tok::Slash, l, c)),
            '0'..='9' => {
                let start = i;
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    col += 1;
                }
                toks.push((Tok::Int(&src[start..=i]), l, c));
            }
            ch if ch.is_ascii_alphabetic() || ch == '_' => {
                let start = i;
                while i + 1 < bytes.len()
                    && ((bytes[i + 1] as char).is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                    col += 1;
                }
                toks.push((Tok::Ident(&src[start..=i]), l, c));
            }
            other => {
                return Err(Error::Parse {
                    line: l,
                    col: c,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
        col += 1;
    }
    Ok(Lexer { toks, pos: 0, end: (line, col) })
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn next(&mut self) -> Option<(Tok<'a>, usize, usize)> {
        let t = self.toks.get(self.pos).copied();
        self.pos += 1;
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.1, t.2)).unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse { line, col, message: message.into() }
    }
}

/// Parses one polynomial expression in the declared variable.
pub fn parse_poly(src: &str, var_name: &str, var: Var) -> Result<Polynomial> {
    let mut lx = lex(src)?;
    let mut terms: Vec<(u64, Rational)> = Vec::new();
    let mut negate = false;
    if lx.peek() == Some(Tok::Minus) {
        lx.next();
        negate = true;
    }
    loop {
        let (exp, coeff) = parse_term(&mut lx, var_name)?;
        terms.push((exp, if negate { -coeff } else { coeff }));
        match lx.peek() {
            None => break,
            Some(Tok::Plus) => {
                lx.next();
                negate = false;
            }
            Some(Tok::Minus) => {
                lx.next();
                negate = true;
            }
            Some(_) => return Err(lx.error("expected `+` or `-` between terms")),
        }
    }
    Ok(Polynomial::from_terms(var, terms))
}

fn parse_term(lx: &mut Lexer<'_>, var_name: &str) -> Result<(u64, Rational)> {
    match lx.peek() {
        Some(Tok::Int(_)) => {
            let coeff = parse_coeff(lx)?;
            if lx.peek() == Some(Tok::Star) {
                lx.next();
                let exp = parse_atom(lx, var_name)?;
                Ok((exp, coeff))
            } else {
                Ok((0, coeff))
            }
        }
        Some(Tok::Ident(_)) => {
            let exp = parse_atom(lx, var_name)?;
            Ok((exp, Rational::from_integer(BigInt::from(1))))
        }
        _ => Err(lx.error("expected a coefficient or the branch variable")),
    }
}

fn parse_atom(lx: &mut Lexer<'_>, var_name: &str) -> Result<u64> {
    match lx.next() {
        Some((Tok::Ident(name), line, col)) => {
            if name != var_name {
                return Err(Error::WrongVariable {
                    expected: var_name.to_string(),
                    found: name.to_string(),
                    line,
                    col,
                });
            }
            if lx.peek() == Some(Tok::Caret) {
                lx.next();
                match lx.next() {
                    Some((Tok::Int(digits), line, col)) => digits.parse::<u64>().map_err(|_| {
                        Error::Parse { line, col, message: "exponent out of range".into() }
                    }),
                    _ => Err(lx.error("expected an exponent after `^`")),
                }
            } else {
                Ok(1)
            }
        }
        _ => Err(lx.error("expected the branch variable")),
    }
}

fn parse_coeff(lx: &mut Lexer<'_>) -> Result<Rational> {
    let numer = match lx.next() {
        Some((Tok::Int(digits), _, _)) => digits.parse::<BigInt>().expect("digits"),
        _ => return Err(lx.error("expected an integer")),
    };
    if lx.peek() == Some(Tok::Slash) {
        lx.next();
        match lx.next() {
            Some((Tok::Int(digits), line, col)) => {
                let denom = digits.parse::<BigInt>().expect("digits");
                if denom.is_zero() {
                    return Err(Error::Parse {
                        line,
                        col,
                        message: "zero denominator in coefficient".into(),
                    });
                }
                Ok(Rational::new(numer, denom))
            }
            _ => Err(lx.error("expected a positive integer denominator")),
        }
    } else {
        Ok(Rational::from_integer(numer))
    }
}

/// Decodes the JSON layer of a curve file without building the curve.
pub fn curve_file_from_str(src: &str) -> Result<CurveFile> {
    serde_json::from_str(src).map_err(|e| Error::Schema(e.to_string()))
}

/// Parses and validates a curve file read from a string, returning the
/// normalized parametrization.
pub fn parse_curve_str(src: &str) -> Result<Parametrization> {
    let file = curve_file_from_str(src)?;
    parametrization_of(&file)
}

/// Reads a curve file from disk.
pub fn parse_curve_file(path: impl AsRef<Path>) -> Result<Parametrization> {
    let src = std::fs::read_to_string(path)?;
    parse_curve_str(&src)
}

fn parametrization_of(file: &CurveFile) -> Result<Parametrization> {
    let n = file.branches;
    if n == 0 {
        return Err(Error::Schema("`branches` must be at least 1".into()));
    }
    if file.vars.len() != n {
        return Err(Error::Schema(format!(
            "expected {n} variable names, found {}",
            file.vars.len()
        )));
    }
    for (i, v) in file.vars.iter().enumerate() {
        if file.vars[..i].contains(v) {
            return Err(Error::Schema(format!("duplicate variable name `{v}`")));
        }
    }
    if file.generators.is_empty() {
        return Err(Error::Schema("at least one generator is required".into()));
    }
    let mut elements = Vec::with_capacity(file.generators.len());
    for (row_idx, row) in file.generators.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Schema(format!(
                "generator {} has {} coordinates, expected {n}",
                row_idx + 1,
                row.len()
            )));
        }
        let polys = row
            .iter()
            .enumerate()
            .map(|(i, expr)| parse_poly(expr, &file.vars[i], Var(i)))
            .collect::<Result<Vec<_>>>()?;
        elements.push(CurveElement::from_polys(polys));
    }
    Parametrization::over_branches(n, elements).normalize()
}
