//! Operator files and the built-in corpus.
//!
//! ```text
//! # Airy equation on the affine line
//! name = airy
//! a2 = 1
//! a0 = -z
//! Z = {inf}
//! ```
//!
//! `aN = <expression>` sets the coefficient of `∂^N` (missing ones are 0);
//! `Z = {…}` lists the singular points as rationals or `inf`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::expr::parse_expr_at;
use super::poly::{Point, RatFunc};
use super::{ConnectionSpec, DiffOp};
use crate::error::{Error, Result};
use crate::linalg::Q;

/// Parses `0`, `-1/2` or `inf`; `line` and `column` locate errors.
pub fn parse_point(text: &str, line: usize, column: usize) -> Result<Point> {
    let t = text.trim();
    if t == "inf" || t == "∞" {
        return Ok(Point::Infinity);
    }
    let bad = || Error::parse(line, column, format!("bad point '{t}'"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Point::Finite(Q::new(n, d)))
}

/// Parses an operator file into its name and connection data.
pub fn parse_operator_file(text: &str) -> Result<(String, ConnectionSpec)> {
    let mut name = String::from("operator");
    let mut coeffs: BTreeMap<usize, RatFunc> = BTreeMap::new();
    let mut z: Option<Vec<Point>> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(Error::parse(line, col, "expected 'key = value'"));
        };
        let key = content[..eq].trim();
        let key_col = content.len() - content.trim_start().len() + 1;
        let value = &content[eq + 1..];
        let value_col = eq + 2;
        match key {
            "name" => name = value.trim().to_string(),
            "Z" => {
                let v = value.trim();
                let lead = value.len() - value.trim_start().len();
                let inner = v
                    .strip_prefix('{')
                    .and_then(|s| s.strip_suffix('}'))
                    .ok_or_else(|| Error::parse(line, value_col + lead, "expected '{…}'"))?;
                let mut pts = Vec::new();
                let mut col = value_col + lead + 1;
                for item in inner.split(',') {
                    if !item.trim().is_empty() {
                        let off = item.len() - item.trim_start().len();
                        pts.push(parse_point(item, line, col + off)?);
                    }
                    col += item.chars().count() + 1;
                }
                z = Some(pts);
            }
            k if k.starts_with('a') && k.len() > 1 && k[1..].chars().all(|c| c.is_ascii_digit()) => {
                let i: usize =
                    k[1..].parse().map_err(|_| Error::parse(line, key_col, "coefficient index too large"))?;
                if coeffs.insert(i, parse_expr_at(value, line, value_col)?).is_some() {
                    return Err(Error::parse(line, key_col, format!("duplicate coefficient {k}")));
                }
            }
            other => return Err(Error::parse(line, key_col, format!("unknown key '{other}'"))),
        }
    }
    let n = coeffs.keys().next_back().copied().unwrap_or(0);
    let list = (0..=n).map(|i| coeffs.get(&i).cloned().unwrap_or_else(RatFunc::zero)).collect();
    let op = DiffOp::new(list)?;
    let z = z.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing singular set 'Z = {…}'"))?;
    Ok((name, ConnectionSpec::new(op, z)?))
}

/// Canonical text: name, nonzero coefficients by index, then `Z`.
pub fn format_operator_file(name: &str, s: &ConnectionSpec) -> String {
    let mut out = format!("name = {name}\n");
    for (i, a) in s.op().coeffs().iter().enumerate() {
        if !a.is_zero() {
            out.push_str(&format!("a{i} = {a}\n"));
        }
    }
    let pts: Vec<String> = s.singular().iter().map(ToString::to_string).collect();
    out.push_str(&format!("Z = {{{}}}\n", pts.join(", ")));
    out
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
}

impl CorpusEntry {
    pub fn spec(&self) -> Result<ConnectionSpec> {
        parse_operator_file(self.source).map(|(_, s)| s)
    }
}

const CORPUS: &[(&str, &str)] = &[
    ("trivial-gm", "a1 = 1\nZ = {0, inf}\n"),
    ("trivial-three-points", "a1 = 1\nZ = {0, 1, inf}\n"),
    ("exp-pole", "a1 = z^2\na0 = 1\nZ = {0, inf}\n"),
    ("euler-two", "a1 = z\na0 = -2\nZ = {0, inf}\n"),
    ("euler-half", "a1 = z\na0 = -1/2\nZ = {0, inf}\n"),
    ("exp-affine", "a1 = 1\na0 = -1\nZ = {inf}\n"),
    ("airy", "a2 = 1\na0 = -z\nZ = {inf}\n"),
    ("euler-rank-two", "a2 = z^2\na1 = z\na0 = -1\nZ = {0, inf}\n"),
    ("mixed-slopes", "a2 = z^2\na1 = z + 1 + 2/z\na0 = 2/z^3 - 4/z^2\nZ = {0, inf}\n"),
    ("legendre-type", "a1 = z(z-1)\na0 = -1/2\nZ = {0, 1, inf}\n"),
];

/// Regular, irregular single-slope, mixed-slope and rank-two operators.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    CORPUS.iter().map(|&(name, source)| CorpusEntry { name, source }).collect()
}
