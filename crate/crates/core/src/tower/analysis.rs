//! Threads, thread quotients, uniform and Tukey coverings, continuity of
//! tower maps, and bornologies.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::TAU;
use std::fmt;

use rayon::prelude::*;

use super::geometry::{box_of, BlockBox};
use super::region::{box_angles, Region};
use super::{BlockId, CoveringTower, Generator};
use crate::error::{Error, Result};
use crate::gtop::DensePair;
use crate::relation::{subset, FiniteSet, Relation};
use crate::topology::FiniteTopology;

/// Classification of a thread class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThreadTag {
    /// Blocks shrinking around a point of the space.
    Interior,
    /// The single completion point over the puncture of the metric disk.
    Puncture,
    /// A tangential base point over the puncture of the sectorial disk.
    Tangential,
    /// A `p`-adic disk chain with shrinking radius.
    End,
    /// A `p`-adic disk chain with stable radius (a disk of a coarser level).
    Branch,
}

impl fmt::Display for ThreadTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThreadTag::Interior => "interior",
            ThreadTag::Puncture => "puncture",
            ThreadTag::Tangential => "tangential",
            ThreadTag::End => "end",
            ThreadTag::Branch => "branch",
        })
    }
}

/// A class of threads, represented by its block at `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreadClass {
    pub tag: ThreadTag,
    pub level: usize,
    pub block: BlockId,
}

impl ThreadClass {
    /// Whether the class adds a point to the completion.
    pub fn is_completion_point(&self) -> bool {
        matches!(self.tag, ThreadTag::Puncture | ThreadTag::Tangential)
    }

    /// `tag path` with the designated parent chain, e.g. `tangential s(0,0)/s(0,0)`.
    pub fn record(&self, t: &CoveringTower) -> String {
        let path: Vec<String> = if self.level == 0 {
            vec!["root".into()]
        } else {
            t.parent_chain(self.level, self.block).iter().map(ToString::to_string).collect()
        };
        format!("{} {}", self.tag, path.join("/"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreadEnumeration {
    pub depth: usize,
    /// One class per block of the deepest level.
    pub classes: Vec<ThreadClass>,
    /// Stable-radius chains, listed for inspection only.
    pub branches: Vec<ThreadClass>,
    /// Kinds of completion points that no finite depth represents.
    pub unrepresentable: Vec<String>,
}

impl ThreadEnumeration {
    pub fn count(&self, tag: ThreadTag) -> usize {
        self.classes.iter().chain(&self.branches).filter(|c| c.tag == tag).count()
    }

    /// Classes lying over the boundary of the space (all but interior ones).
    pub fn boundary(&self) -> Vec<&ThreadClass> {
        self.classes.iter().filter(|c| c.tag != ThreadTag::Interior).collect()
    }

    /// Deterministic sorted records, one per line.
    pub fn records(&self, t: &CoveringTower) -> Vec<String> {
        let mut out: Vec<String> = self.classes.iter().chain(&self.branches).map(|c| c.record(t)).collect();
        out.sort();
        out
    }
}

fn tag_of(g: &Generator, b: BlockId) -> ThreadTag {
    match (g, b) {
        (Generator::Metric, BlockId::Grid(0, 0)) => ThreadTag::Puncture,
        (Generator::Sectorial, BlockId::Polar(0, _)) => ThreadTag::Tangential,
        (Generator::Padic(_), _) => ThreadTag::End,
        _ => ThreadTag::Interior,
    }
}

/// Thread classes at the depth of the tower: classes are the blocks of the
/// deepest level, and two classes are identified in the completion exactly
/// when their blocks are adjacent.
pub fn enumerate_threads(t: &CoveringTower) -> ThreadEnumeration {
    let n = t.depth();
    let g = t.generator();
    let classes =
        t.level_blocks(n).into_iter().map(|b| ThreadClass { tag: tag_of(g, b), level: n, block: b }).collect();
    let (branches, unrepresentable) = match g {
        Generator::Padic(_) => (
            (0..n)
                .flat_map(|k| {
                    let blocks = if k == 0 { vec![BlockId::Residue(0)] } else { t.level_blocks(k) };
                    blocks.into_iter().map(move |b| ThreadClass { tag: ThreadTag::Branch, level: k, block: b })
                })
                .collect(),
            vec!["type 3".to_string(), "type 4".to_string()],
        ),
        _ => (Vec::new(), Vec::new()),
    };
    ThreadEnumeration { depth: n, classes, branches, unrepresentable }
}

/// The depth-`N` thread quotient as a dense pair: one open point per block of
/// the deepest level (the space itself) and, for each completion class `p`,
/// a point with minimal open set `{p, ι(block of p)}`.
pub fn thread_pair(t: &CoveringTower) -> Result<DensePair> {
    let threads = enumerate_threads(t);
    let n_int = threads.classes.len();
    let extra: Vec<&ThreadClass> = threads.classes.iter().filter(|c| c.is_completion_point()).collect();
    let size = n_int + extra.len();
    if size > crate::topology::MAX_ENUMERATED_POINTS {
        return Err(Error::TooLarge { size, limit: crate::topology::MAX_ENUMERATED_POINTS });
    }
    let labels = threads
        .classes
        .iter()
        .map(|c| c.block.to_string())
        .chain(extra.iter().map(|c| format!("{}:{}", c.tag, c.block)));
    let base = FiniteSet::new(labels)?;
    let pairs = (0..size).map(|x| (x, x)).chain(extra.iter().enumerate().map(|(i, c)| {
        let b = threads.classes.iter().position(|d| d.block == c.block).expect("class block");
        (n_int + i, b)
    }));
    let topo = FiniteTopology::from_preorder(&Relation::from_pairs(&base, pairs)?)?;
    DensePair::new(topo, subset(size, 0..n_int))
}

/// Completion classes with adjacency-edge points: a class `c` has minimal
/// open set `{c}` plus the edges incident to it, and each edge is open.
pub fn puncture_quotient(t: &CoveringTower) -> Result<FiniteTopology> {
    let threads = enumerate_threads(t);
    let classes = threads.boundary();
    if classes.is_empty() {
        return Err(Error::IncompatibleGenerators(format!("{} tower has no boundary classes", t.generator().name())));
    }
    let index: HashMap<BlockId, usize> = classes.iter().enumerate().map(|(i, c)| (c.block, i)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        for nb in t.neighbors(c.level, c.block) {
            if let Some(&j) = index.get(&nb) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    edges.sort();
    edges.dedup();
    let m = classes.len();
    let labels = classes
        .iter()
        .map(|c| c.block.to_string())
        .chain(edges.iter().map(|&(i, j)| format!("{}~{}", classes[i].block, classes[j].block)));
    let base = FiniteSet::new(labels)?;
    let pairs = (0..m + edges.len())
        .map(|x| (x, x))
        .chain(edges.iter().enumerate().flat_map(|(e, &(i, j))| [(i, m + e), (j, m + e)]));
    FiniteTopology::from_preorder(&Relation::from_pairs(&base, pairs)?)
}

/// Outcome of a uniform-covering check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringVerdict {
    pub holds: bool,
    /// A thread class lying in no extended member; completion points first.
    pub witness: Option<ThreadClass>,
    /// Indices of members forming a finite subcovering (when `holds`).
    pub subcover: Vec<usize>,
}

/// For each block of level `k`, the first member containing it.
fn first_members(t: &CoveringTower, k: usize, cover: &[Region]) -> Result<Vec<(BlockId, Option<usize>)>> {
    let blocks = t.level_blocks(k);
    if let Some(&b) = blocks.first() {
        for r in cover {
            t.block_in_region(k, b, r)?;
        }
    }
    blocks
        .par_iter()
        .map(|&b| {
            for (i, r) in cover.iter().enumerate() {
                if t.block_in_region(k, b, r)? {
                    return Ok((b, Some(i)));
                }
            }
            Ok((b, None))
        })
        .collect()
}

/// Whether the members, extended to the depth-`N` thread quotient by `Ǔ`,
/// cover every thread class.
///
/// A member's trace on the space is the union of the deepest-level blocks it
/// contains; a completion point lies in the extension iff its block does.
pub fn is_uniform_covering(t: &CoveringTower, cover: &[Region]) -> Result<CoveringVerdict> {
    let n = t.depth();
    let g = t.generator();
    let firsts = first_members(t, n, cover)?;
    let missing: Vec<ThreadClass> = firsts
        .iter()
        .filter(|(_, m)| m.is_none())
        .map(|&(b, _)| ThreadClass { tag: tag_of(g, b), level: n, block: b })
        .collect();
    let witness = missing.iter().find(|c| c.is_completion_point()).or(missing.first()).cloned();
    let mut subcover: Vec<usize> =
        if witness.is_none() { firsts.iter().filter_map(|&(_, m)| m).collect() } else { Vec::new() };
    subcover.sort();
    subcover.dedup();
    Ok(CoveringVerdict { holds: witness.is_none(), witness, subcover })
}

/// The least level `k ≤ N` refining the covering (every level-`k` block lies
/// in some member), if any.
pub fn is_tukey_at_depth(t: &CoveringTower, cover: &[Region]) -> Result<Option<usize>> {
    for k in 1..=t.depth() {
        if first_members(t, k, cover)?.iter().all(|(_, m)| m.is_some()) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// A map between the spaces presented by two towers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerMap {
    /// The identity of one space, presented by two towers of the same generator.
    Identity,
    /// Polar to cartesian coordinates, sectorial disk to metric disk.
    SecToMet,
    /// Its inverse, metric disk to sectorial disk.
    MetToSec,
}

impl TowerMap {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "identity" | "id" => Ok(TowerMap::Identity),
            "sec-to-met" | "sec2met" => Ok(TowerMap::SecToMet),
            "met-to-sec" | "met2sec" => Ok(TowerMap::MetToSec),
            other => Err(Error::IncompatibleGenerators(format!("unknown tower map {other}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TowerMap::Identity => "identity",
            TowerMap::SecToMet => "sec-to-met",
            TowerMap::MetToSec => "met-to-sec",
        }
    }
}

/// Least source level for one target level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContinuityOutcome {
    /// Every block of this source level maps into a target block.
    Level(usize),
    /// The block maps into no target block at any source level.
    Fail { level: usize, block: BlockId },
    /// No source level of the tower suffices; a deeper source may.
    Unresolved { searched: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityEntry {
    pub target: usize,
    pub outcome: ContinuityOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityReport {
    pub map: TowerMap,
    pub entries: Vec<ContinuityEntry>,
}

impl ContinuityReport {
    /// `Some(false)` on a certified failure, `Some(true)` when every target
    /// level is resolved, `None` otherwise.
    pub fn verdict(&self) -> Option<bool> {
        if self.entries.iter().any(|e| matches!(e.outcome, ContinuityOutcome::Fail { .. })) {
            Some(false)
        } else if self.entries.iter().all(|e| matches!(e.outcome, ContinuityOutcome::Level(_))) {
            Some(true)
        } else {
            None
        }
    }
}

/// Widening applied to floating-point enclosures.
const ENCLOSURE_PAD: f64 = 1e-12;

/// Range of `cos(2πt)` (or `sin` with `phase = 1/4`) for `t ∈ [t0, t1]` turns.
fn trig_range(t0: f64, t1: f64, phase: f64) -> (f64, f64) {
    let f = |t: f64| (TAU * (t - phase)).cos();
    let (mut lo, mut hi) = (f(t0).min(f(t1)), f(t0).max(f(t1)));
    if (t1 - t0) >= 1.0 || ((t0 - phase).ceil() <= t1 - phase) {
        hi = 1.0;
    }
    if (t1 - t0) >= 1.0 || ((t0 - phase - 0.5).ceil() <= t1 - phase - 0.5) {
        lo = -1.0;
    }
    (lo, hi)
}

fn scale_range(r: (f64, f64), c: (f64, f64)) -> (f64, f64) {
    let p = [r.0 * c.0, r.0 * c.1, r.1 * c.0, r.1 * c.1];
    let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo - ENCLOSURE_PAD, hi + ENCLOSURE_PAD)
}

/// Integer centres `c` with `(c-1)h ≤ lo` and `hi ≤ (c+1)h`, `h = 2^-m`.
fn centre_range(lo: f64, hi: f64, m: usize) -> (i64, i64) {
    let s = (1u64 << m) as f64;
    ((hi * s - 1.0).ceil() as i64, (lo * s + 1.0).floor() as i64)
}

fn sec_block_in_met(s: &CoveringTower, n: usize, b: BlockId, t: &CoveringTower, m: usize) -> bool {
    let BlockBox::Polar { r, t: th } = box_of(s.generator(), n, b) else { return false };
    let (r, th) = (r.as_f64(), th.as_f64());
    let x = scale_range(r, trig_range(th.0, th.1, 0.0));
    let y = scale_range(r, trig_range(th.0, th.1, 0.25));
    let (x0, x1) = centre_range(x.0, x.1, m);
    let (y0, y1) = centre_range(y.0, y.1, m);
    (x0..=x1).any(|cx| (y0..=y1).any(|cy| t.has_block(m, BlockId::Grid(cx, cy))))
}

fn met_block_in_sec(s: &CoveringTower, n: usize, b: BlockId, m: usize) -> bool {
    let BlockBox::Cart { x, y } = box_of(s.generator(), n, b) else { return false };
    let (x, y) = (x.as_f64(), y.as_f64());
    let Some((t0, t1)) = box_angles(x, y) else { return false };
    let near = |lo: f64, hi: f64| if lo <= 0.0 && hi >= 0.0 { 0.0 } else { lo.abs().min(hi.abs()) };
    let far = |lo: f64, hi: f64| lo.abs().max(hi.abs());
    let r0 = (near(x.0, x.1).powi(2) + near(y.0, y.1).powi(2)).sqrt() - ENCLOSURE_PAD;
    let r1 = ((far(x.0, x.1).powi(2) + far(y.0, y.1).powi(2)).sqrt() + ENCLOSURE_PAD).min(1.0);
    let top = 1i64 << m;
    let (j0, j1) = centre_range(r0, r1, m);
    // radial stars are clipped to [0, 1], so the end vertices reach further
    let tf = top as f64;
    let radial_ok = (j0.max(0) - 1..=j1.min(top) + 1).filter(|j| (0..=top).contains(j)).any(|j| {
        let lo = ((j - 1).max(0)) as f64 / tf;
        let hi = ((j + 1).min(top)) as f64 / tf;
        lo <= r0 && r1 <= hi
    });
    let (i0, i1) = centre_range(t0 - ENCLOSURE_PAD, t1 + ENCLOSURE_PAD, m);
    radial_ok && i0 <= i1
}

/// Runs `bad` over every block of level `k`, in parallel, returning one
/// failing block. Sectorial levels are scanned from the outer radius inward
/// and metric levels from the centre outward, where failures concentrate.
fn find_failing<F>(t: &CoveringTower, k: usize, bad: F) -> Option<BlockId>
where
    F: Fn(BlockId) -> bool + Sync,
{
    let m = 1i64 << k;
    match t.generator() {
        Generator::Sectorial => (0..=m)
            .into_par_iter()
            .map(|j| m - j)
            .find_map_first(|j| (0..m).map(|i| BlockId::Polar(j, i)).find(|&b| bad(b))),
        Generator::Metric => {
            if t.has_block(k, BlockId::Grid(0, 0)) && bad(BlockId::Grid(0, 0)) {
                return Some(BlockId::Grid(0, 0));
            }
            (-m..=m)
                .into_par_iter()
                .find_map_any(|x| (-m..=m).map(|y| BlockId::Grid(x, y)).find(|&b| t.has_block(k, b) && bad(b)))
        }
        _ => t.level_blocks(k).into_par_iter().find_any(|&b| bad(b)),
    }
}

fn identity_fits(s: &CoveringTower, n: usize, b: BlockId, t: &CoveringTower, m: usize) -> bool {
    match t.generator() {
        Generator::Formal(_) | Generator::Finite(_) => {
            t.level_blocks(m).into_iter().any(|c| t.block_within(n, b, m, c))
        }
        _ if n >= m => {
            let mut a = b;
            for level in (m + 1..=n).rev() {
                a = s.parent(level, a);
            }
            t.has_block(m, a) && t.block_within(n, b, m, a)
        }
        _ => false,
    }
}

/// For each target level `m`, the least source level `n` whose blocks all map
/// into blocks of level `m`.
///
/// Floating-point image enclosures are widened by `1e-12`; a containment that
/// holds only within that margin is treated as failing.
pub fn check_uniform_continuity(map: TowerMap, s: &CoveringTower, t: &CoveringTower) -> Result<ContinuityReport> {
    let compatible = match map {
        TowerMap::Identity => s.generator() == t.generator(),
        TowerMap::SecToMet => matches!((s.generator(), t.generator()), (Generator::Sectorial, Generator::Metric)),
        TowerMap::MetToSec => matches!((s.generator(), t.generator()), (Generator::Metric, Generator::Sectorial)),
    };
    if !compatible {
        return Err(Error::IncompatibleGenerators(format!(
            "{} from {} to {}",
            map.name(),
            s.generator().name(),
            t.generator().name()
        )));
    }
    let fits = |n: usize, b: BlockId, m: usize| match map {
        TowerMap::Identity => identity_fits(s, n, b, t, m),
        TowerMap::SecToMet => sec_block_in_met(s, n, b, t, m),
        TowerMap::MetToSec => met_block_in_sec(s, n, b, m),
    };
    let mut entries = Vec::new();
    let mut start = 1;
    for m in 1..=t.depth() {
        let mut outcome = ContinuityOutcome::Unresolved { searched: s.depth() };
        for n in start..=s.depth() {
            match find_failing(s, n, |b| !fits(n, b, m)) {
                None => {
                    outcome = ContinuityOutcome::Level(n);
                    start = n;
                    break;
                }
                // the central metric block contains a punctured neighbourhood
                // of 0 at every level, so its image has full angular spread
                Some(b @ BlockId::Grid(0, 0)) if map == TowerMap::MetToSec => {
                    outcome = ContinuityOutcome::Fail { level: n, block: b };
                    break;
                }
                Some(_) => {}
            }
        }
        let stop = !matches!(outcome, ContinuityOutcome::Level(_));
        entries.push(ContinuityEntry { target: m, outcome });
        if stop {
            // deeper targets need at least as deep a source
            for m2 in m + 1..=t.depth() {
                let outcome = match &entries[m - 1].outcome {
                    ContinuityOutcome::Fail { level, block } => {
                        ContinuityOutcome::Fail { level: *level, block: *block }
                    }
                    other => other.clone(),
                };
                entries.push(ContinuityEntry { target: m2, outcome });
            }
            break;
        }
    }
    Ok(ContinuityReport { map, entries })
}

/// Bornology report for a block-union subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bornology {
    /// Always true: every level is a finite covering.
    pub precompact: bool,
    /// Number of blocks of each level meeting the subset's deepest-level trace.
    pub counts: Vec<(usize, usize)>,
    pub canonically_bounded: bool,
    /// Level of the witness blocks `Z`.
    pub z_level: usize,
    pub z: Vec<BlockId>,
    /// `E^n(Z)` contains the subset, with `E` the deepest-level entourage.
    pub n: usize,
}

/// Star iteration: the subset (the deepest-level blocks inside `b`) is
/// contained in `E^n(Z)`, where a block at graph distance `d` from `Z` in the
/// adjacency graph lies in `E^d(Z)`.
pub fn bornology_at_depth(t: &CoveringTower, b: &Region) -> Result<Bornology> {
    let n = t.depth();
    let members: Vec<BlockId> =
        first_members(t, n, std::slice::from_ref(b))?.into_iter().filter_map(|(blk, m)| m.map(|_| blk)).collect();
    let counts = (1..=n)
        .map(|k| {
            let mut anc: Vec<BlockId> = members
                .iter()
                .map(|&blk| {
                    let mut a = blk;
                    for level in (k + 1..=n).rev() {
                        a = t.parent(level, a);
                    }
                    a
                })
                .collect();
            anc.sort();
            anc.dedup();
            (k, anc.len())
        })
        .collect::<Vec<_>>();
    if members.is_empty() {
        return Ok(Bornology { precompact: true, counts, canonically_bounded: true, z_level: n, z: Vec::new(), n: 1 });
    }
    let target: std::collections::HashSet<BlockId> = members.iter().copied().collect();
    let step = (members.len() / 8).max(1);
    let best =
        members.par_iter().step_by(step).filter_map(|&z| eccentricity(t, n, z, &target).map(|e| (e.max(1), z))).min();
    if let Some((e, z)) = best {
        return Ok(Bornology { precompact: true, counts, canonically_bounded: true, z_level: n, z: vec![z], n: e });
    }
    // disconnected trace: the finitely many level-1 ancestors bound it
    let mut z: Vec<BlockId> = members.iter().map(|&blk| t.parent_chain(n, blk)[0]).collect();
    z.sort();
    z.dedup();
    Ok(Bornology { precompact: true, counts, canonically_bounded: true, z_level: 1, z, n: 1 })
}

/// Largest adjacency distance from `z` to a block of `target`, if all are reachable.
fn eccentricity(t: &CoveringTower, k: usize, z: BlockId, target: &std::collections::HashSet<BlockId>) -> Option<usize> {
    let mut dist: HashMap<BlockId, usize> = HashMap::from([(z, 0)]);
    let mut queue = VecDeque::from([z]);
    let mut found = usize::from(target.contains(&z));
    let mut ecc = 0;
    while let Some(b) = queue.pop_front() {
        if found == target.len() {
            break;
        }
        let d = dist[&b];
        for nb in t.neighbors(k, b) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(nb) {
                e.insert(d + 1);
                if target.contains(&nb) {
                    found += 1;
                    ecc = d + 1;
                }
                queue.push_back(nb);
            }
        }
    }
    (found == target.len()).then_some(ecc)
}
