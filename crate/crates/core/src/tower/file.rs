//! Text formats for towers and block-union coverings.
//!
//! ```text
//! # tower file
//! tower padic depth=4 p=3
//! ```
//!
//! ```text
//! # cover file: one region per line
//! sector -1/8 3/8
//! disk 1/2
//! residue 2 1
//! blocks 2 s(1,0) s(1,1)
//! points 0 2
//! ```

use num_traits::Zero;

use super::{make_tower, BlockId, CoveringTower, Generator, Region};
use crate::error::{Error, Result};
use crate::linalg::Q;

/// A tower description: generator, prime where needed, depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    pub generator: String,
    pub p: Option<u64>,
    pub depth: usize,
}

impl TowerSpec {
    pub fn build(&self) -> Result<CoveringTower> {
        make_tower(Generator::from_name(&self.generator, self.p)?, self.depth)
    }
}

impl std::fmt::Display for TowerSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "tower {} depth={}", self.generator, self.depth)?;
        if let Some(p) = self.p {
            write!(f, " p={p}")?;
        }
        Ok(())
    }
}

/// Significant lines with their 1-based numbers and the column of their
/// first non-blank character.
fn lines(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        (!trimmed.is_empty()).then(|| (i + 1, content.len() - content.trim_start().len() + 1, trimmed))
    })
}

/// Whitespace-separated words with their 1-based columns.
fn words(line: &str, start: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut col = start;
    for piece in line.split(' ') {
        if !piece.is_empty() {
            out.push((col, piece));
        }
        col += piece.chars().count() + 1;
    }
    out
}

pub fn parse_tower_file(text: &str) -> Result<TowerSpec> {
    let mut spec: Option<TowerSpec> = None;
    for (line, col, content) in lines(text) {
        let ws = words(content, col);
        if ws[0].1 != "tower" {
            return Err(Error::parse(line, ws[0].0, format!("expected 'tower', found '{}'", ws[0].1)));
        }
        if spec.is_some() {
            return Err(Error::parse(line, ws[0].0, "duplicate 'tower' line"));
        }
        let (gcol, generator) = *ws.get(1).ok_or_else(|| Error::parse(line, col + 5, "missing generator"))?;
        let mut p = None;
        let mut depth = None;
        for &(c, w) in &ws[2..] {
            let (key, value) =
                w.split_once('=').ok_or_else(|| Error::parse(line, c, format!("expected key=value, found '{w}'")))?;
            let num: u64 = value
                .parse()
                .map_err(|_| Error::parse(line, c + key.len() + 1, format!("invalid number '{value}'")))?;
            match key {
                "depth" => depth = Some(num as usize),
                "p" => p = Some(num),
                _ => return Err(Error::parse(line, c, format!("unknown key '{key}'"))),
            }
        }
        let depth = depth.ok_or_else(|| Error::parse(line, gcol, "missing depth=N"))?;
        spec = Some(TowerSpec { generator: generator.to_string(), p, depth });
    }
    spec.ok_or_else(|| Error::parse(1, 1, "missing 'tower' line"))
}

fn parse_q(line: usize, col: usize, w: &str) -> Result<Q> {
    w.parse::<Q>().map_err(|_| Error::parse(line, col, format!("invalid rational '{w}'")))
}

fn parse_usize(line: usize, col: usize, w: &str) -> Result<usize> {
    w.parse().map_err(|_| Error::parse(line, col, format!("invalid number '{w}'")))
}

/// Parses `g(x,y)`, `s(j,i)`, `d(a)` or `e(x)`.
pub fn parse_block_id(text: &str) -> Option<BlockId> {
    let (tag, rest) = text.split_once('(')?;
    let inner = rest.strip_suffix(')')?;
    let ints: Option<Vec<i64>> = inner.split(',').map(|s| s.trim().parse().ok()).collect();
    match (tag, ints?.as_slice()) {
        ("g", &[x, y]) => Some(BlockId::Grid(x, y)),
        ("s", &[j, i]) => Some(BlockId::Polar(j, i)),
        ("d", &[a]) if a >= 0 => Some(BlockId::Residue(a as u64)),
        ("e", &[x]) if x >= 0 => Some(BlockId::Point(x as usize)),
        _ => None,
    }
}

fn parse_region(line: usize, ws: &[(usize, &str)]) -> Result<Region> {
    let (col, kind) = ws[0];
    let arity = |n: usize| -> Result<()> {
        if ws.len() != n + 1 {
            return Err(Error::parse(line, col, format!("'{kind}' takes {n} argument(s)")));
        }
        Ok(())
    };
    let q_at = |k: usize| parse_q(line, ws[k].0, ws[k].1);
    let positive = |k: usize| -> Result<Q> {
        let v = q_at(k)?;
        if v <= Q::zero() {
            return Err(Error::parse(line, ws[k].0, "radius must be positive"));
        }
        Ok(v)
    };
    match kind {
        "whole" => {
            arity(0)?;
            Ok(Region::Whole)
        }
        "sector" => {
            arity(2)?;
            let (from, to) = (q_at(1)?, q_at(2)?);
            if from >= to {
                return Err(Error::parse(line, ws[2].0, "sector needs from < to"));
            }
            Ok(Region::Sector { from, to })
        }
        "disk" => {
            arity(1)?;
            Ok(Region::Disk { radius: positive(1)? })
        }
        "annulus" => {
            arity(2)?;
            let (inner, outer) = (q_at(1)?, positive(2)?);
            if inner < Q::zero() || inner >= outer {
                return Err(Error::parse(line, ws[1].0, "annulus needs 0 <= inner < outer"));
            }
            Ok(Region::Annulus { inner, outer })
        }
        "residue" => {
            arity(2)?;
            let value = parse_usize(line, ws[1].0, ws[1].1)? as u64;
            Ok(Region::Residue { value, level: parse_usize(line, ws[2].0, ws[2].1)? })
        }
        "blocks" => {
            if ws.len() < 2 {
                return Err(Error::parse(line, col, "'blocks' needs a level"));
            }
            let level = parse_usize(line, ws[1].0, ws[1].1)?;
            let ids = ws[2..]
                .iter()
                .map(|&(c, w)| parse_block_id(w).ok_or_else(|| Error::parse(line, c, format!("invalid block '{w}'"))))
                .collect::<Result<_>>()?;
            Ok(Region::Blocks { level, ids })
        }
        "points" => Ok(Region::Points(ws[1..].iter().map(|&(c, w)| parse_usize(line, c, w)).collect::<Result<_>>()?)),
        other => Err(Error::parse(line, col, format!("unknown region '{other}'"))),
    }
}

/// One region per line. Block lists must not contain spaces inside ids.
pub fn parse_cover_file(text: &str) -> Result<Vec<Region>> {
    lines(text).map(|(line, col, content)| parse_region(line, &words(content, col))).collect()
}

pub fn format_cover(cover: &[Region]) -> String {
    cover.iter().map(|r| format!("{r}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{quarter_sectors, ratio};

    #[test]
    fn tower_lines() {
        let s = parse_tower_file("# padic\ntower padic depth=4 p=3\n").unwrap();
        assert_eq!(s, TowerSpec { generator: "padic".into(), p: Some(3), depth: 4 });
        assert_eq!(s.to_string(), "tower padic depth=4 p=3");
        assert!(matches!(parse_tower_file("tower metric"), Err(Error::Parse { line: 1, column: 7, .. })));
        assert!(matches!(parse_tower_file("tower metric depth=x"), Err(Error::Parse { column: 20, .. })));
        assert!(matches!(parse_tower_file(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn cover_roundtrip() {
        let mut cover = quarter_sectors();
        cover.push(Region::Disk { radius: ratio(1, 2) });
        cover.push(Region::Residue { value: 2, level: 1 });
        cover.push(Region::Blocks { level: 2, ids: vec![BlockId::Polar(1, 0), BlockId::Grid(-1, 2)] });
        cover.push(Region::Points(vec![0, 2]));
        cover.push(Region::Annulus { inner: ratio(1, 4), outer: ratio(1, 2) });
        assert_eq!(parse_cover_file(&format_cover(&cover)).unwrap(), cover);
        assert!(matches!(parse_cover_file("whole\ncone 1"), Err(Error::Parse { line: 2, column: 1, .. })));
        assert!(matches!(parse_cover_file("  disk -1"), Err(Error::Parse { line: 1, column: 8, .. })));
    }
}
