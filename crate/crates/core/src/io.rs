//! Line-oriented game file format.
//!
//! ```text
//! # comment
//! format: 1
//! resources: A B C
//! players: 3
//! strategy: A,B
//! strategy: A,C
//! payoff A: 10 8 1
//! payoff B: 10 4 1/2
//! payoff C: 8 6 0.5
//! ```
//!
//! `players:` and the payoff rows may be omitted together, which yields a bare
//! game form. Payoff literals are integers, `n/d` fractions, or decimals, all
//! read exactly.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::model::{CongestionGame, GameForm};
use crate::scalar::Payoff;
use crate::{Game, Rational};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnsupportedVersion,
    DuplicateSection,
    UnknownResource,
    DuplicateResource,
    DuplicateStrategy,
    MalformedRational,
    PayoffArity,
    MissingSection,
    InvalidGame,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { kind, line, column, message: message.into() }
    }
}

/// A parsed file: a full game, or a form when payoffs are absent.
#[derive(Clone, Debug, PartialEq)]
pub enum GameFile {
    Game(Game),
    Form(GameForm),
}

impl GameFile {
    pub fn form(&self) -> &GameForm {
        match self {
            GameFile::Game(g) => g.form(),
            GameFile::Form(f) => f,
        }
    }

    pub fn into_game(self) -> Option<Game> {
        match self {
            GameFile::Game(g) => Some(g),
            GameFile::Form(_) => None,
        }
    }
}

/// Reads `int`, `int/int` or a decimal literal as an exact rational.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let value = if let Some((n, d)) = body.split_once('/') {
        if !digits(n) || !digits(d) {
            return None;
        }
        let d = BigInt::from_str(d).ok()?;
        if d.is_zero() {
            return None;
        }
        Rational::new(BigInt::from_str(n).ok()?, d)
    } else if let Some((int, frac)) = body.split_once('.') {
        if (int.is_empty() && frac.is_empty()) || !(int.is_empty() || digits(int)) || !(frac.is_empty() || digits(frac)) {
            return None;
        }
        let whole = if int.is_empty() { BigInt::zero() } else { BigInt::from_str(int).ok()? };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let part = if frac.is_empty() { BigInt::zero() } else { BigInt::from_str(frac).ok()? };
        Rational::new(whole * &scale + part, scale)
    } else {
        if !digits(body) {
            return None;
        }
        Rational::from_integer(BigInt::from_str(body).ok()?)
    };
    Some(if negative { -value } else { value })
}

/// Splits on whitespace, keeping 1-based columns.
fn tokens(s: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            if let Some(b) = start.take() {
                out.push((offset + b + 1, &s[b..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((offset + b + 1, &s[b..]));
    }
    out
}

pub fn parse_game_file(text: &str) -> Result<GameFile, ParseError> {
    use ParseErrorKind::*;

    let mut resources: Option<(usize, Vec<String>)> = None;
    let mut players: Option<(usize, usize)> = None;
    let mut strategies: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut payoffs: Vec<Option<(usize, Vec<Rational>)>> = Vec::new();
    let mut saw_version = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some(colon) = line.find(':') else {
            let col = line.len() - line.trim_start().len() + 1;
            return Err(ParseError::new(Syntax, line_no, col, "expected `<directive>: ...`"));
        };
        let head = line[..colon].trim();
        let rest = &line[colon + 1..];
        let rest_col = colon + 1;
        let head_col = line.len() - line.trim_start().len() + 1;

        if head == "format" {
            let toks = tokens(rest, rest_col);
            match toks.as_slice() {
                [(_, v)] if *v == FORMAT_VERSION.to_string() => {}
                [(c, v)] => {
                    return Err(ParseError::new(UnsupportedVersion, line_no, *c, format!("unsupported format version {v}")))
                }
                _ => return Err(ParseError::new(Syntax, line_no, rest_col + 1, "expected a single version number")),
            }
            if std::mem::replace(&mut saw_version, true) {
                return Err(ParseError::new(DuplicateSection, line_no, head_col, "repeated `format:` line"));
            }
        } else if head == "resources" {
            if resources.is_some() {
                return Err(ParseError::new(DuplicateSection, line_no, head_col, "repeated `resources:` line"));
            }
            let toks = tokens(rest, rest_col);
            if toks.is_empty() {
                return Err(ParseError::new(Syntax, line_no, rest_col + 1, "no resources listed"));
            }
            let mut names: Vec<String> = Vec::new();
            for (col, name) in toks {
                if names.iter().any(|n| n == name) {
                    return Err(ParseError::new(DuplicateResource, line_no, col, format!("resource {name} declared twice")));
                }
                if name.contains(',') {
                    return Err(ParseError::new(Syntax, line_no, col, "resource names are separated by spaces"));
                }
                names.push(name.to_string());
            }
            payoffs = vec![None; names.len()];
            resources = Some((line_no, names));
        } else if head == "players" {
            if players.is_some() {
                return Err(ParseError::new(DuplicateSection, line_no, head_col, "repeated `players:` line"));
            }
            let toks = tokens(rest, rest_col);
            let [(col, v)] = toks.as_slice() else {
                return Err(ParseError::new(Syntax, line_no, rest_col + 1, "expected a single player count"));
            };
            match v.parse::<usize>() {
                Ok(n) if n >= 1 => players = Some((line_no, n)),
                _ => return Err(ParseError::new(Syntax, line_no, *col, format!("invalid player count {v:?}"))),
            }
        } else if head == "strategy" {
            let Some((_, names)) = &resources else {
                return Err(ParseError::new(MissingSection, line_no, head_col, "`resources:` must come before strategies"));
            };
            let mut members = Vec::new();
            let mut offset = rest_col;
            for part in rest.split(',') {
                let name = part.trim();
                let col = offset + part.len() - part.trim_start().len() + 1;
                offset += part.len() + 1;
                if name.is_empty() {
                    return Err(ParseError::new(Syntax, line_no, col, "empty resource name in strategy"));
                }
                let Some(r) = names.iter().position(|n| n == name) else {
                    return Err(ParseError::new(UnknownResource, line_no, col, format!("unknown resource {name}")));
                };
                if members.contains(&r) {
                    return Err(ParseError::new(Syntax, line_no, col, format!("resource {name} repeated in strategy")));
                }
                members.push(r);
            }
            let mut sorted = members.clone();
            sorted.sort_unstable();
            if strategies.iter().any(|(_, s)| {
                let mut t = s.clone();
                t.sort_unstable();
                t == sorted
            }) {
                return Err(ParseError::new(DuplicateStrategy, line_no, rest_col + 1, "duplicate strategy"));
            }
            strategies.push((line_no, members));
        } else if let Some(name) = head.strip_prefix("payoff") {
            let name = name.trim();
            let Some((_, names)) = &resources else {
                return Err(ParseError::new(MissingSection, line_no, head_col, "`resources:` must come before payoffs"));
            };
            let name_col = head_col + head.find(name).unwrap_or(0);
            let Some(r) = names.iter().position(|n| n == name) else {
                return Err(ParseError::new(UnknownResource, line_no, name_col, format!("unknown resource {name:?}")));
            };
            if payoffs[r].is_some() {
                return Err(ParseError::new(DuplicateSection, line_no, head_col, format!("repeated payoff row for {name}")));
            }
            let mut row = Vec::new();
            for (col, tok) in tokens(rest, rest_col) {
                let Some(v) = parse_rational(tok) else {
                    return Err(ParseError::new(MalformedRational, line_no, col, format!("malformed rational {tok:?}")));
                };
                row.push(v);
            }
            if row.is_empty() {
                return Err(ParseError::new(PayoffArity, line_no, rest_col + 1, "empty payoff row"));
            }
            payoffs[r] = Some((line_no, row));
        } else {
            return Err(ParseError::new(Syntax, line_no, head_col, format!("unknown directive {head:?}")));
        }
    }

    let end = text.lines().count().max(1);
    let Some((_, names)) = resources else {
        return Err(ParseError::new(MissingSection, end, 1, "missing `resources:` line"));
    };
    if strategies.is_empty() {
        return Err(ParseError::new(MissingSection, end, 1, "no `strategy:` lines"));
    }
    let lists: Vec<Vec<usize>> = strategies.iter().map(|(_, s)| s.clone()).collect();
    let form = GameForm::new(names, lists).map_err(|e| ParseError::new(InvalidGame, end, 1, e.to_string()))?;

    let any_payoff = payoffs.iter().any(Option::is_some);
    if !any_payoff {
        return Ok(GameFile::Form(form));
    }
    let Some((_, n)) = players else {
        return Err(ParseError::new(MissingSection, end, 1, "payoff rows need a `players:` line"));
    };
    let mut rows = Vec::with_capacity(payoffs.len());
    for (r, entry) in payoffs.into_iter().enumerate() {
        let Some((line_no, row)) = entry else {
            return Err(ParseError::new(
                MissingSection,
                end,
                1,
                format!("missing payoff row for {}", form.resource_name(r)),
            ));
        };
        if row.len() < n {
            return Err(ParseError::new(
                PayoffArity,
                line_no,
                1,
                format!("payoff row for {} has {} entries, need {n}", form.resource_name(r), row.len()),
            ));
        }
        rows.push(row);
    }
    let game = CongestionGame::new(form, n, rows).map_err(|e| ParseError::new(InvalidGame, end, 1, e.to_string()))?;
    Ok(GameFile::Game(game))
}

fn write_form(out: &mut String, form: &GameForm) -> fmt::Result {
    writeln!(out, "format: {FORMAT_VERSION}")?;
    writeln!(out, "resources: {}", form.resources().join(" "))?;
    for i in 0..form.num_strategies() {
        let names: Vec<&str> = form.declared_members(i).iter().map(|&r| form.resource_name(r)).collect();
        writeln!(out, "strategy: {}", names.join(","))?;
    }
    Ok(())
}

pub fn serialize_form(form: &GameForm) -> String {
    let mut out = String::new();
    write_form(&mut out, form).expect("writing to a String");
    out
}

/// Writes every stored payoff entry (rows longer than the player count included).
pub fn serialize_game<T: Payoff>(game: &CongestionGame<T>) -> String {
    let mut out = String::new();
    write_form(&mut out, game.form()).expect("writing to a String");
    let _ = writeln!(out, "players: {}", game.players());
    for (r, row) in game.payoff_rows().iter().enumerate() {
        let values: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "payoff {}: {}", game.form().resource_name(r), values.join(" "));
    }
    out
}

/// `n` or `n/d`.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
