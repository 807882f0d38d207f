//! Towers of finite coverings: depth-`N` approximations of precompact
//! (quasi-)uniform spaces and their completions.
//!
//! Levels are implicit dyadic (or `p`-adic) grids, so any level can be
//! evaluated without materializing the ones above it.
//!
//! * `metric`: the punctured unit disk `Δ* ⊂ ℝ²`. At level `k` (`h = 2^-k`)
//!   the blocks are the open squares of half-side `h` centred at grid
//!   vertices `(ix·h, iy·h)`, intersected with `Δ*`, kept when nonempty.
//! * `sectorial`: `Δ*` in polar coordinates `(r, θ) ∈ (0,1) × ℝ/ℤ` (θ in
//!   turns). Blocks are products of the open stars of radial vertices
//!   `j·h` (`0 ≤ j ≤ 2^k`, clipped to `(0,1)`) and angular vertices `i/2^k`.
//! * `padic(p)`: the closed unit disk of `ℤ_p`; level `k` is the partition
//!   into the residue disks `a + p^k ℤ_p`.
//! * `formal(p)`: the `p` residue classes, repeated at every level.
//! * `finite`: a finite quasi-uniformity as a depth-one tower with blocks
//!   `E_min(x)`.
//!
//! Blocks are open stars, so two blocks are adjacent iff they intersect. For
//! the disk generators a block at level `k+1` lies in its parent at level
//! `k`, and level `k+2` star-refines level `k`; for the others consecutive
//! levels star-refine.

mod analysis;
mod file;
mod geometry;
mod region;

pub use analysis::{
    bornology_at_depth, check_uniform_continuity, enumerate_threads, is_tukey_at_depth, is_uniform_covering,
    puncture_quotient, thread_pair, Bornology, ContinuityEntry, ContinuityOutcome, ContinuityReport, CoveringVerdict,
    ThreadClass, ThreadEnumeration, ThreadTag, TowerMap,
};
pub use file::{format_cover, parse_block_id, parse_cover_file, parse_tower_file, TowerSpec};
pub use region::{quarter_sectors, Region};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::quniform::QUniformity;

/// Largest level evaluated for the dyadic generators.
pub const MAX_LEVEL: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Metric,
    Sectorial,
    Padic(u64),
    Formal(u64),
    Finite(QUniformity),
}

impl Generator {
    /// Parses `metric`, `sectorial`, `padic`, `formal` (with `p`) names.
    pub fn from_name(name: &str, p: Option<u64>) -> Result<Self> {
        let prime = || -> Result<u64> {
            let p = p.ok_or_else(|| Error::UnknownGenerator(format!("{name} needs p")))?;
            if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
                return Err(Error::UnknownGenerator(format!("{name}: p = {p} is not prime")));
            }
            Ok(p)
        };
        match name {
            "metric" | "metric_disk" => Ok(Generator::Metric),
            "sectorial" | "sectorial_disk" => Ok(Generator::Sectorial),
            "padic" | "padic_disk" => Ok(Generator::Padic(prime()?)),
            "formal" => Ok(Generator::Formal(prime()?)),
            other => Err(Error::UnknownGenerator(other.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Generator::Metric => "metric".into(),
            Generator::Sectorial => "sectorial".into(),
            Generator::Padic(p) => format!("padic(p={p})"),
            Generator::Formal(p) => format!("formal(p={p})"),
            Generator::Finite(_) => "finite".into(),
        }
    }

    /// Levels `k + stride` star-refine level `k`.
    pub fn star_stride(&self) -> usize {
        match self {
            Generator::Metric | Generator::Sectorial => 2,
            _ => 1,
        }
    }
}

/// A block of some level, named by its grid coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockId {
    /// Metric square centred at `(ix, iy)·2^-k`.
    Grid(i64, i64),
    /// Sectorial block at radial vertex `j`, angular vertex `i`.
    Polar(i64, i64),
    /// Residue disk `a + p^k ℤ_p`, `0 ≤ a < p^k`.
    Residue(u64),
    /// `E_min(x)` of a finite model.
    Point(usize),
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockId::Grid(x, y) => write!(f, "g({x},{y})"),
            BlockId::Polar(j, i) => write!(f, "s({j},{i})"),
            BlockId::Residue(a) => write!(f, "d({a})"),
            BlockId::Point(x) => write!(f, "e({x})"),
        }
    }
}

/// A point of the underlying space in the generator's native encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SamplePoint {
    Cartesian(Q, Q),
    /// Radius and angle in turns.
    Polar(Q, Q),
    /// A `p`-adic integer known modulo `p^digits`.
    Adic {
        value: u64,
        digits: usize,
    },
    Label(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringTower {
    generator: Generator,
    depth: usize,
}

/// Result of checking star-refinement at every level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCertificate {
    pub stride: usize,
    /// For each fine level `k + stride`, the number of blocks checked.
    pub checked: Vec<(usize, usize)>,
    /// `(fine level, block)` whose star fits in no coarse block.
    pub failures: Vec<(usize, BlockId)>,
    /// Blocks not contained in their designated parent.
    pub parent_failures: Vec<(usize, BlockId)>,
}

impl StarCertificate {
    pub fn verified(&self) -> bool {
        self.failures.is_empty() && self.parent_failures.is_empty()
    }
}

pub fn make_tower(generator: Generator, depth: usize) -> Result<CoveringTower> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let depth = match &generator {
        Generator::Finite(u) => {
            u.check()?;
            1
        }
        Generator::Metric | Generator::Sectorial if depth > MAX_LEVEL => {
            return Err(Error::TooLarge { size: depth, limit: MAX_LEVEL })
        }
        Generator::Padic(p) | Generator::Formal(p) if (*p as f64).powi(depth as i32) > 1e8 => {
            return Err(Error::TooLarge { size: depth, limit: (8.0 / (*p as f64).log10()) as usize })
        }
        _ => depth,
    };
    Ok(CoveringTower { generator, depth })
}

fn pow(p: u64, k: usize) -> u64 {
    p.pow(k as u32)
}

impl CoveringTower {
    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.generator {
            Generator::Finite(u) => u.is_symmetric_flag(),
            _ => true,
        }
    }

    fn finite_blocks(&self) -> Vec<crate::relation::Subset> {
        match &self.generator {
            Generator::Finite(u) => u.e_min().expect("checked").rows().to_vec(),
            _ => Vec::new(),
        }
    }

    /// Blocks of level `k` (1-based), in a fixed order.
    pub fn level_blocks(&self, k: usize) -> Vec<BlockId> {
        match &self.generator {
            Generator::Metric => {
                let m = 1i64 << k;
                (-m..=m)
                    .flat_map(|x| (-m..=m).map(move |y| (x, y)))
                    .filter(|&(x, y)| geometry::metric_kept(k, x, y))
                    .map(|(x, y)| BlockId::Grid(x, y))
                    .collect()
            }
            Generator::Sectorial => {
                let m = 1i64 << k;
                (0..=m).flat_map(|j| (0..m).map(move |i| BlockId::Polar(j, i))).collect()
            }
            Generator::Padic(p) => (0..pow(*p, k)).map(BlockId::Residue).collect(),
            Generator::Formal(p) => (0..*p).map(BlockId::Residue).collect(),
            Generator::Finite(u) => (0..u.base().size()).map(BlockId::Point).collect(),
        }
    }

    pub fn level_size(&self, k: usize) -> usize {
        match &self.generator {
            Generator::Sectorial => ((1usize << k) + 1) << k,
            Generator::Padic(p) => pow(*p, k) as usize,
            Generator::Formal(p) => *p as usize,
            Generator::Finite(u) => u.base().size(),
            Generator::Metric => self.level_blocks(k).len(),
        }
    }

    pub fn has_block(&self, k: usize, b: BlockId) -> bool {
        match (&self.generator, b) {
            (Generator::Metric, BlockId::Grid(x, y)) => geometry::metric_kept(k, x, y),
            (Generator::Sectorial, BlockId::Polar(j, i)) => (0..=1i64 << k).contains(&j) && (0..1i64 << k).contains(&i),
            (Generator::Padic(p), BlockId::Residue(a)) => a < pow(*p, k),
            (Generator::Formal(p), BlockId::Residue(a)) => a < *p,
            (Generator::Finite(u), BlockId::Point(x)) => x < u.base().size(),
            _ => false,
        }
    }

    /// Blocks of level `k` meeting `b` (including `b`), sorted.
    pub fn neighbors(&self, k: usize, b: BlockId) -> Vec<BlockId> {
        let mut out: Vec<BlockId> = match (&self.generator, b) {
            (Generator::Metric, BlockId::Grid(x, y)) => (-1..=1)
                .flat_map(|dx| (-1..=1).map(move |dy| (x + dx, y + dy)))
                .filter(|&(a, c)| geometry::metric_kept(k, a, c) && geometry::metric_overlap(k, x, y, a, c))
                .map(|(a, c)| BlockId::Grid(a, c))
                .collect(),
            (Generator::Sectorial, BlockId::Polar(j, i)) => {
                let m = 1i64 << k;
                (-1..=1)
                    .flat_map(|dj| (-1..=1).map(move |di| (j + dj, (i + di).rem_euclid(m))))
                    .filter(|&(a, _)| (0..=m).contains(&a))
                    .map(|(a, c)| BlockId::Polar(a, c))
                    .collect()
            }
            (Generator::Finite(_), BlockId::Point(x)) => {
                let blocks = self.finite_blocks();
                (0..blocks.len()).filter(|&y| !blocks[x].is_disjoint(&blocks[y])).map(BlockId::Point).collect()
            }
            _ => vec![b],
        };
        out.sort();
        out.dedup();
        out
    }

    /// Designated parent at level `k - 1` of a block of level `k ≥ 2`.
    pub fn parent(&self, k: usize, b: BlockId) -> BlockId {
        match (&self.generator, b) {
            (Generator::Metric, BlockId::Grid(x, y)) => BlockId::Grid((x + 1).div_euclid(2), (y + 1).div_euclid(2)),
            (Generator::Sectorial, BlockId::Polar(j, i)) => {
                BlockId::Polar((j + 1).div_euclid(2), ((i + 1).div_euclid(2)).rem_euclid(1 << (k - 1)))
            }
            (Generator::Padic(p), BlockId::Residue(a)) => BlockId::Residue(a % pow(*p, k - 1)),
            _ => b,
        }
    }

    /// Chain `B_1 ⊇ … ⊇ B_k = b` of designated parents.
    pub fn parent_chain(&self, k: usize, b: BlockId) -> Vec<BlockId> {
        let mut chain = vec![b];
        let mut cur = b;
        for level in (2..=k).rev() {
            cur = self.parent(level, cur);
            chain.push(cur);
        }
        chain.reverse();
        chain
    }

    /// Whether block `fine` of level `kf` lies in block `coarse` of level `kc`.
    pub fn block_within(&self, kf: usize, fine: BlockId, kc: usize, coarse: BlockId) -> bool {
        match (&self.generator, fine, coarse) {
            (Generator::Metric, BlockId::Grid(..), BlockId::Grid(..))
            | (Generator::Sectorial, BlockId::Polar(..), BlockId::Polar(..)) => {
                geometry::box_of(&self.generator, kf, fine).within(&geometry::box_of(&self.generator, kc, coarse))
            }
            (Generator::Padic(p), BlockId::Residue(a), BlockId::Residue(b)) => kf >= kc && a % pow(*p, kc) == b,
            (Generator::Formal(_), BlockId::Residue(a), BlockId::Residue(b)) => a == b,
            (Generator::Finite(_), BlockId::Point(x), BlockId::Point(y)) => {
                let blocks = self.finite_blocks();
                blocks[x].is_subset(&blocks[y])
            }
            _ => false,
        }
    }

    /// Whether the union of the blocks meeting `b` (level `kf`) lies in `coarse` (level `kc`).
    pub fn star_within(&self, kf: usize, b: BlockId, kc: usize, coarse: BlockId) -> bool {
        match &self.generator {
            Generator::Metric | Generator::Sectorial => {
                let coarse_box = geometry::box_of(&self.generator, kc, coarse);
                self.neighbors(kf, b)
                    .into_iter()
                    .all(|nb| geometry::box_of(&self.generator, kf, nb).within(&coarse_box))
            }
            Generator::Finite(_) => {
                let blocks = self.finite_blocks();
                self.neighbors(kf, b).into_iter().all(|nb| match (nb, coarse) {
                    (BlockId::Point(x), BlockId::Point(y)) => blocks[x].is_subset(&blocks[y]),
                    _ => false,
                })
            }
            _ => self.block_within(kf, b, kc, coarse),
        }
    }

    /// The coarse block claimed to contain the star of `b`.
    fn star_target(&self, kf: usize, b: BlockId, kc: usize) -> BlockId {
        let shift = (kf - kc) as u32;
        let q = 1i64 << shift;
        let half = q / 2;
        match (&self.generator, b) {
            (Generator::Metric, BlockId::Grid(x, y)) => {
                BlockId::Grid((x + half).div_euclid(q), (y + half).div_euclid(q))
            }
            (Generator::Sectorial, BlockId::Polar(j, i)) => {
                BlockId::Polar((j + half).div_euclid(q), ((i + half).div_euclid(q)).rem_euclid(1 << kc))
            }
            _ => {
                let mut cur = b;
                for level in (kc + 1..=kf).rev() {
                    cur = self.parent(level, cur);
                }
                cur
            }
        }
    }

    /// Verifies parents and star-refinement at every level of the tower.
    pub fn star_certificate(&self) -> StarCertificate {
        let stride = self.generator.star_stride();
        let mut cert =
            StarCertificate { stride, checked: Vec::new(), failures: Vec::new(), parent_failures: Vec::new() };
        for k in 2..=self.depth {
            let blocks = self.level_blocks(k);
            let bad: Vec<(usize, BlockId)> = blocks
                .par_iter()
                .filter(|&&b| {
                    let p = self.parent(k, b);
                    !(self.has_block(k - 1, p) && self.block_within(k, b, k - 1, p))
                })
                .map(|&b| (k, b))
                .collect();
            cert.parent_failures.extend(bad);
        }
        for kf in 1 + stride..=self.depth {
            let kc = kf - stride;
            let blocks = self.level_blocks(kf);
            let bad: Vec<(usize, BlockId)> = blocks
                .par_iter()
                .filter(|&&b| {
                    let t = self.star_target(kf, b, kc);
                    !(self.has_block(kc, t) && self.star_within(kf, b, kc, t))
                })
                .map(|&b| (kf, b))
                .collect();
            cert.checked.push((kf, blocks.len()));
            cert.failures.extend(bad);
        }
        cert
    }

    /// Blocks of level `k` containing a sample point.
    pub fn blocks_containing(&self, k: usize, s: &SamplePoint) -> Result<Vec<BlockId>> {
        let bad = || Error::IncompatibleGenerators(format!("sample point {s:?} for {}", self.generator.name()));
        let scale = Q::from_integer(BigInt::from(1u64 << k.min(62)));
        let window = |v: &Q| -> Vec<i64> {
            // integers c with |v·2^k − c| < 1
            let t = v * &scale;
            let f = t.floor().to_integer();
            let f: i64 = f.try_into().unwrap_or(0);
            (f - 1..=f + 1)
                .filter(|&c| {
                    let d = &t - Q::from_integer(BigInt::from(c));
                    d < Q::from_integer(1.into()) && d > Q::from_integer((-1).into())
                })
                .collect()
        };
        let mut out = match (&self.generator, s) {
            (Generator::Metric, SamplePoint::Cartesian(x, y)) => {
                let r2 = x * x + y * y;
                if r2 >= Q::from_integer(1.into()) || r2 == Q::from_integer(0.into()) {
                    return Err(bad());
                }
                let xs = window(x);
                let ys = window(y);
                xs.iter().flat_map(|&a| ys.iter().map(move |&b| BlockId::Grid(a, b))).collect()
            }
            (Generator::Sectorial, SamplePoint::Polar(r, t)) => {
                if *r <= Q::from_integer(0.into()) || *r >= Q::from_integer(1.into()) {
                    return Err(bad());
                }
                let m = 1i64 << k;
                let t = t - t.floor();
                let rs = window(r);
                let ts: Vec<i64> = window(&t).into_iter().map(|i| i.rem_euclid(m)).collect();
                rs.iter()
                    .filter(|&&j| (0..=m).contains(&j))
                    .flat_map(|&j| ts.iter().map(move |&i| BlockId::Polar(j, i)))
                    .collect()
            }
            (Generator::Padic(p), SamplePoint::Adic { value, digits }) if *digits >= k => {
                vec![BlockId::Residue(value % pow(*p, k))]
            }
            (Generator::Formal(p), SamplePoint::Adic { value, .. }) => vec![BlockId::Residue(value % p)],
            (Generator::Finite(u), SamplePoint::Label(x)) if *x < u.base().size() => {
                let blocks = self.finite_blocks();
                (0..blocks.len()).filter(|&y| blocks[y].contains(*x)).map(BlockId::Point).collect()
            }
            _ => return Err(bad()),
        };
        out.retain(|&b| self.has_block(k, b));
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// `a/b` as an exact rational.
pub fn ratio(a: i64, b: i64) -> Q {
    let g = a.gcd(&b).max(1);
    Q::new(BigInt::from(a / g), BigInt::from(b / g))
}

#[cfg(test)]
mod tests;
