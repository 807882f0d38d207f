//! The built-in acceptance corpus: ten criteria, each an exact check over an
//! exhaustive or seeded family of inputs, with a wall-clock budget.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dmod::{builtin_corpus, index_report, irregularity, parse_operator_file, Point, DEFAULT_DMAX};
use crate::error::Result;
use crate::gtop::{
    cech_cohomology, check_grothendieck, check_l7, finest_g_covering, sheaf_cohomology, uniform_g_topology, DensePair,
    PosetSheaf, DEFAULT_FAMILY_CAP,
};
use crate::linalg::{q, Matrix};
use crate::quniform::{
    kunzi, pervin, topology_from, tukey_to_weil, weil_to_tukey, QUniformity, MAX_COVERING_ENUMERATION,
};
use crate::relation::{subset, FiniteSet, Relation, Subset};
use crate::topology::{enumerate_partial_orders, enumerate_preorders, FiniteTopology};
use crate::tower::{
    check_uniform_continuity, enumerate_threads, is_uniform_covering, make_tower, puncture_quotient, quarter_sectors,
    BlockId, ContinuityOutcome, Generator, Region, ThreadTag, TowerMap, MAX_LEVEL,
};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Randomized cases for the finite-structure criterion.
pub const RANDOM_BASES: usize = 10_000;
/// Randomized sheaves for the cohomology criterion.
pub const RANDOM_SHEAVES: usize = 200;

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Caps the size of exhaustively enumerated structures.
    pub exhaustive_size: Option<usize>,
    pub seed: u64,
    /// Run one criterion only.
    pub only: Option<usize>,
}

impl Options {
    fn cap(&self, default: usize) -> usize {
        self.exhaustive_size.map_or(default, |k| k.min(default))
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    /// Deterministic summary of what was checked, or the first counterexample.
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionResult {
    /// Deterministic line (no timings).
    pub fn line(&self) -> String {
        format!("criterion {} {} {}: {}", self.id, if self.pass { "pass" } else { "FAIL" }, self.title, self.detail)
    }
}

/// Outcome of one criterion body: pass flag and detail.
type Check = Result<(bool, String)>;

struct Criterion {
    title: &'static str,
    budget_secs: u64,
    body: fn(&Options) -> Check,
}

const CRITERIA: [Criterion; 10] = [
    Criterion { title: "finite quasi-uniformities", budget_secs: 60, body: finite_structures },
    Criterion { title: "Pervin and Kunzi", budget_secs: 30, body: pervin_kunzi },
    Criterion { title: "check-U lemma", budget_secs: 120, body: l7_enumeration },
    Criterion { title: "uniform G-topology", budget_secs: 120, body: grothendieck_enumeration },
    Criterion { title: "Cech versus sheaf cohomology", budget_secs: 300, body: cech_comparison },
    Criterion { title: "real blow-up", budget_secs: 60, body: real_blow_up },
    Criterion { title: "circle of tangential points", budget_secs: 60, body: tangential_circle },
    Criterion { title: "p-adic disk", budget_secs: 60, body: padic_disk },
    Criterion { title: "index formula", budget_secs: 120, body: index_formula },
    Criterion { title: "irregularity values", budget_secs: 5, body: irregularity_values },
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs one criterion (1-based); a criterion over budget fails.
pub fn run_criterion(id: usize, opts: &Options) -> Result<CriterionResult> {
    let c =
        CRITERIA.get(id.wrapping_sub(1)).ok_or(crate::Error::IndexOutOfRange { index: id, size: CRITERIA.len() })?;
    let start = Instant::now();
    let (ok, mut detail) = (c.body)(opts)?;
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(c.budget_secs);
    if elapsed >= budget {
        detail.push_str(" (over time budget)");
    }
    Ok(CriterionResult { id, title: c.title, pass: ok && elapsed < budget, detail, elapsed, budget })
}

/// Runs every criterion (or the selected one) in order.
pub fn run(opts: &Options) -> Result<Vec<CriterionResult>> {
    let ids: Vec<usize> = match opts.only {
        Some(k) => vec![k],
        None => (1..=CRITERIA.len()).collect(),
    };
    ids.into_iter().map(|k| run_criterion(k, opts)).collect()
}

fn fail(detail: String) -> Check {
    Ok((false, detail))
}

// ---------------------------------------------------------------------------
// Finite structures

/// Weil → Tukey → Weil depends only on `E_min`; results are memoized by it.
type RoundTrips = Mutex<HashMap<Vec<(usize, usize)>, bool>>;

/// Round-trip and E_min checks on one basis; `None` when all hold.
fn basis_problem(u: &QUniformity, memo: &RoundTrips) -> Result<Option<String>> {
    let r = u.check()?;
    if r.is_quasi_uniformity && !r.e_min.is_preorder() {
        return Ok(Some("quasi-uniformity with non-preorder E_min".into()));
    }
    if r.is_uniformity && !r.e_min.is_equivalence() {
        return Ok(Some("uniformity with non-equivalence E_min".into()));
    }
    if r.is_uniformity && u.is_symmetric_flag() && u.base().size() <= MAX_COVERING_ENUMERATION {
        let key: Vec<(usize, usize)> = r.e_min.pairs().collect();
        let cached = memo.lock().expect("memo lock").get(&key).copied();
        let same = match cached {
            Some(same) => same,
            None => {
                let same = tukey_to_weil(&weil_to_tukey(u)?)?.e_min()? == r.e_min;
                memo.lock().expect("memo lock").insert(key, same);
                same
            }
        };
        if !same {
            return Ok(Some("Weil-Tukey round trip changed E_min".into()));
        }
    }
    Ok(None)
}

/// A random basis of 1..=3 relations on 1..=`max_n` points, built around a
/// random preorder or equivalence so that valid and invalid bases both occur.
pub fn random_basis(rng: &mut impl Rng, max_n: usize) -> QUniformity {
    let n = rng.gen_range(1..=max_n);
    let base = FiniteSet::numbered(n);
    let mut seed = Relation::diagonal(&base);
    for _ in 0..rng.gen_range(0..=n) {
        seed.insert(rng.gen_range(0..n), rng.gen_range(0..n));
    }
    let symmetric = rng.gen_bool(0.5);
    if symmetric {
        seed = seed.union(&seed.inverse()).expect("same base");
    }
    let core = seed.reflexive_transitive_closure();
    let k = rng.gen_range(1..=3);
    let basis = (0..k)
        .map(|_| {
            let mut e = core.clone();
            for _ in 0..rng.gen_range(0..=2) {
                e.insert(rng.gen_range(0..n), rng.gen_range(0..n));
            }
            e
        })
        .collect();
    QUniformity::new(&base, basis, symmetric).expect("same base")
}

fn finite_structures(opts: &Options) -> Check {
    let max = opts.cap(4);
    let memo = RoundTrips::default();
    let mut single = 0usize;
    for n in 1..=max {
        let base = FiniteSet::numbered(n);
        let codes = 1u64 << (n * n);
        let bad = (0..codes)
            .into_par_iter()
            .map(|code| {
                let r = Relation::from_code(&base, code);
                let sym = r.is_symmetric();
                basis_problem(&QUniformity::new(&base, vec![r], sym)?, &memo)
                    .map(|p| p.map(|p| format!("n={n} code={code}: {p}")))
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                Ok(Some(p)) => Some(Ok(p)),
                Err(e) => Some(Err(e)),
            });
        if let Some(p) = bad {
            return fail(p?);
        }
        single += codes as usize;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let bases: Vec<QUniformity> = (0..RANDOM_BASES).map(|_| random_basis(&mut rng, 7)).collect();
    let results: Vec<Option<String>> = bases.par_iter().map(|u| basis_problem(u, &memo)).collect::<Result<_>>()?;
    if let Some((i, p)) = results.iter().enumerate().find_map(|(i, p)| p.as_ref().map(|p| (i, p))) {
        return fail(format!("random basis {i}: {p}"));
    }
    Ok((true, format!("{single} single-relation bases on <= {max} points, {RANDOM_BASES} random bases on <= 7 points")))
}

fn pervin_kunzi(opts: &Options) -> Check {
    let n = opts.cap(4);
    let preorders = enumerate_preorders(n)?;
    for r in &preorders {
        let t = FiniteTopology::from_preorder(r)?;
        let p = pervin(&t)?;
        let spec = t.specialization();
        if topology_from(&p)? != t {
            return fail(format!("topology of the Pervin quasi-uniformity differs for {:?}", r.label_pairs()));
        }
        if p.e_min()? != spec || kunzi(&t)?.e_min()? != spec {
            return fail(format!("E_min differs from the specialization preorder for {:?}", r.label_pairs()));
        }
    }
    Ok((true, format!("{} topologies on {n} points", preorders.len())))
}

// ---------------------------------------------------------------------------
// Dense pairs

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `(order code, dense mask)` minimized over relabelings.
fn canonical_code(up: &[u32], x: u32, perms: &[Vec<usize>]) -> (u64, u32) {
    let n = up.len();
    perms
        .iter()
        .map(|p| {
            let mut code = 0u64;
            let mut xm = 0u32;
            for i in 0..n {
                for j in 0..n {
                    if up[i] >> j & 1 == 1 {
                        code |= 1 << (p[i] * n + p[j]);
                    }
                }
                if x >> i & 1 == 1 {
                    xm |= 1 << p[i];
                }
            }
            (code, xm)
        })
        .min()
        .expect("at least one permutation")
}

/// Every dense pair `(X̂, X)` with `1 ≤ |X̂| ≤ max_points` (T0, at most 5
/// points), one per isomorphism class, in a deterministic order.
pub fn enumerate_dense_pairs(max_points: usize) -> Result<Vec<DensePair>> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        let perms = permutations(n);
        let mut seen = std::collections::BTreeMap::new();
        for r in enumerate_partial_orders(n)? {
            let t = FiniteTopology::from_preorder(&r)?;
            let up: Vec<u32> = (0..n).map(|p| t.min_open(p).ones().fold(0u32, |m, y| m | 1 << y)).collect();
            let open_pts: u32 = (0..n).filter(|&p| up[p] == 1 << p).fold(0, |m, p| m | 1 << p);
            let others: Vec<usize> = (0..n).filter(|&p| open_pts >> p & 1 == 0).collect();
            for extra in 0..1u32 << others.len() {
                let x = others
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| extra >> k & 1 == 1)
                    .fold(open_pts, |m, (_, &p)| m | 1 << p);
                let key = canonical_code(&up, x, &perms);
                seen.entry(key).or_insert_with(|| (t.clone(), x));
            }
        }
        for (t, x) in seen.into_values() {
            out.push(DensePair::new(t, mask_subset(n, x))?);
        }
    }
    Ok(out)
}

fn mask_subset(n: usize, m: u32) -> Subset {
    subset(n, (0..n).filter(|&i| m >> i & 1 == 1))
}

fn l7_enumeration(opts: &Options) -> Check {
    let size = opts.cap(5);
    let pairs = enumerate_dense_pairs(size)?;
    let bad = pairs.par_iter().position_first(|d| !check_l7(d, DEFAULT_FAMILY_CAP).required_hold());
    if let Some(i) = bad {
        let d = &pairs[i];
        return fail(format!(
            "items 1-5 fail on pair {i} ({} points, X = {})",
            d.size(),
            d.xhat().base().format_subset(d.x())
        ));
    }
    let sier = DensePair::new(FiniteTopology::sierpinski(), mask_subset(2, 0b10))?;
    let r = check_l7(&sier, DEFAULT_FAMILY_CAP);
    if !r.required_hold() || r.item(7).holds {
        return fail("Sierpinski pair: expected items 1-5 to hold and item 7 to fail".into());
    }
    Ok((
        true,
        format!(
            "items 1-5 hold on {} dense pairs with <= {size} points; item 7 fails on the Sierpinski pair",
            pairs.len()
        ),
    ))
}

fn grothendieck_enumeration(opts: &Options) -> Check {
    let size = opts.cap(5);
    let pairs = enumerate_dense_pairs(size)?;
    let bad =
        pairs.par_iter().position_first(|d| !check_grothendieck(&uniform_g_topology(d, DEFAULT_FAMILY_CAP)).holds());
    if let Some(i) = bad {
        return fail(format!("a bullet fails on pair {i}"));
    }
    Ok((true, format!("five bullets hold on {} dense pairs with <= {size} points", pairs.len())))
}

/// Pairs `y ∈ U_x`, `y ≠ x`, with nothing strictly between.
fn covering_pairs(t: &FiniteTopology) -> Vec<(usize, usize)> {
    let n = t.size();
    let between =
        |x: usize, y: usize, z: usize| z != x && z != y && t.min_open(x).contains(z) && t.min_open(z).contains(y);
    (0..n)
        .flat_map(|x| t.min_open(x).ones().filter(move |&y| y != x).map(move |y| (x, y)))
        .filter(|&(x, y)| (0..n).all(|z| !between(x, y, z)))
        .collect()
}

/// A random sheaf with stalks of dimension ≤ 2 and small integer
/// restrictions; non-functorial draws are rejected, with zero maps as the
/// fallback.
pub fn random_sheaf(t: &FiniteTopology, rng: &mut impl Rng) -> Result<PosetSheaf> {
    let n = t.size();
    let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let pairs = covering_pairs(t);
    for _ in 0..64 {
        let given = pairs
            .iter()
            .map(|&(x, y)| {
                let rows = (0..dims[y]).map(|_| (0..dims[x]).map(|_| q(rng.gen_range(-1..=1))).collect()).collect();
                ((x, y), Matrix::from_rows(rows, dims[x]))
            })
            .collect();
        match PosetSheaf::new(t.clone(), dims.clone(), given) {
            Ok(f) => return Ok(f),
            Err(crate::Error::NonFunctorial(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let zero = pairs.iter().map(|&(x, y)| ((x, y), Matrix::zeros(dims[y], dims[x]))).collect();
    PosetSheaf::new(t.clone(), dims, zero)
}

/// Dense pairs with `|X̂| ≤ 4` on which item 7 holds, and the full pseudo-circle.
pub fn cech_corpus() -> Result<Vec<DensePair>> {
    let mut pairs: Vec<DensePair> =
        enumerate_dense_pairs(4)?.into_iter().filter(|d| check_l7(d, DEFAULT_FAMILY_CAP).item(7).holds).collect();
    pairs.push(DensePair::full(FiniteTopology::pseudo_circle()));
    Ok(pairs)
}

fn cech_comparison(opts: &Options) -> Check {
    let pairs = cech_corpus()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xcec4);
    let cases: Vec<(usize, PosetSheaf)> = (0..RANDOM_SHEAVES.max(pairs.len()))
        .map(|k| {
            let i = k % pairs.len();
            random_sheaf(pairs[i].xhat(), &mut rng).map(|f| (i, f))
        })
        .collect::<Result<_>>()?;
    let bad = cases.par_iter().map(|(i, f)| {
        let d = &pairs[*i];
        let cech = cech_cohomology(d, f, &finest_g_covering(d))?;
        Ok((cech != sheaf_cohomology(f)).then_some(*i))
    });
    let bad: Vec<Option<usize>> = bad.collect::<Result<_>>()?;
    if let Some(i) = bad.into_iter().flatten().next() {
        return fail(format!("Cech and sheaf cohomology differ on pair {i}"));
    }
    Ok((true, format!("{} random sheaves on {} dense pairs agree in every degree", cases.len(), pairs.len())))
}

// ---------------------------------------------------------------------------
// Towers

/// Whether the tangential classes of a sectorial tower form one cycle under
/// adjacency.
fn tangential_cycle(t: &crate::tower::CoveringTower) -> bool {
    let n = t.depth();
    let ring = |b: &BlockId| matches!(b, BlockId::Polar(0, _));
    let count = t.level_blocks(n).iter().filter(|b| ring(b)).count();
    let mut prev: Option<BlockId> = None;
    let mut cur = BlockId::Polar(0, 0);
    for step in 0..count {
        let next: Vec<BlockId> = t.neighbors(n, cur).into_iter().filter(|b| ring(b) && *b != cur).collect();
        if next.len() != 2 {
            return false;
        }
        let forward = if Some(next[0]) == prev { next[1] } else { next[0] };
        prev = Some(cur);
        cur = forward;
        if cur == BlockId::Polar(0, 0) {
            return step + 1 == count;
        }
    }
    false
}

fn blow_up_at(n: usize) -> Result<Option<String>> {
    let met = make_tower(Generator::Metric, n)?;
    let sec = make_tower(Generator::Sectorial, n)?;
    let deep_sec = make_tower(Generator::Sectorial, (n + 4).min(MAX_LEVEL))?;
    let tm = enumerate_threads(&met);
    if tm.count(ThreadTag::Puncture) != 1 {
        return Ok(Some(format!("depth {n}: metric tower has {} puncture classes", tm.count(ThreadTag::Puncture))));
    }
    let ts = enumerate_threads(&sec);
    if ts.count(ThreadTag::Tangential) != 1 << n || !tangential_cycle(&sec) {
        return Ok(Some(format!("depth {n}: tangential classes are not 2^{n} points on one cycle")));
    }
    if check_uniform_continuity(TowerMap::SecToMet, &deep_sec, &met)?.verdict() != Some(true) {
        return Ok(Some(format!("depth {n}: sec-to-met is not certified continuous")));
    }
    let back = check_uniform_continuity(TowerMap::MetToSec, &met, &sec)?;
    let witnessed = back.entries.iter().any(|e| matches!(e.outcome, ContinuityOutcome::Fail { .. }));
    if back.verdict() != Some(false) || !witnessed {
        return Ok(Some(format!("depth {n}: met-to-sec does not fail with a witness")));
    }
    let sectors = quarter_sectors();
    if !is_uniform_covering(&sec, &sectors)?.holds {
        return Ok(Some(format!("depth {n}: sector covering is not uniform for the sectorial tower")));
    }
    if is_uniform_covering(&met, &sectors)?.holds {
        return Ok(Some(format!("depth {n}: sector covering is uniform for the metric tower")));
    }
    Ok(None)
}

fn real_blow_up(opts: &Options) -> Check {
    let max = opts.cap(8).max(3);
    let problems: Vec<Option<String>> = (3..=max).into_par_iter().map(blow_up_at).collect::<Result<_>>()?;
    if let Some(p) = problems.into_iter().flatten().next() {
        return fail(p);
    }
    Ok((true, format!("depths 3..={max}: 1 puncture class, 2^N tangential classes on a cycle, sec-to-met continuous, met-to-sec fails, sectors uniform only for sec")))
}

fn tangential_circle(_: &Options) -> Check {
    for n in 2..=6 {
        let q = puncture_quotient(&make_tower(Generator::Sectorial, n)?)?;
        let h = sheaf_cohomology(&PosetSheaf::constant(q, 1)?);
        if h != [1, 1] {
            return fail(format!("depth {n}: cohomology {h:?}"));
        }
    }
    Ok((true, "constant-sheaf cohomology (1, 1) at depths 2..=6".into()))
}

fn padic_disk(_: &Options) -> Check {
    for p in [2u64, 3] {
        for n in 1..=6 {
            let t = make_tower(Generator::Padic(p), n)?;
            let ends = enumerate_threads(&t).count(ThreadTag::End);
            if ends as u64 != p.pow(n as u32) {
                return fail(format!("p={p} depth {n}: {ends} end classes"));
            }
            if !t.star_certificate().verified() {
                return fail(format!("p={p} depth {n}: star certificate fails"));
            }
            for level in [1, n] {
                let cover: Vec<Region> =
                    (0..p.pow(level as u32)).map(|value| Region::Residue { value, level }).collect();
                if !is_uniform_covering(&t, &cover)?.holds {
                    return fail(format!("p={p} depth {n}: level-{level} residue disks are not uniform"));
                }
            }
        }
    }
    Ok((true, "p = 2, 3 at depths 1..=6: p^N end classes, certificates verified, residue coverings uniform".into()))
}

// ---------------------------------------------------------------------------
// Differential operators

/// Expected indices of the built-in operators.
pub const EXPECTED_INDEX: [(&str, i64); 10] = [
    ("trivial-gm", 0),
    ("trivial-three-points", -1),
    ("exp-pole", -1),
    ("euler-two", 0),
    ("euler-half", 0),
    ("exp-affine", 0),
    ("airy", -1),
    ("euler-rank-two", 0),
    ("mixed-slopes", -3),
    ("legendre-type", -1),
];

fn index_formula(_: &Options) -> Check {
    let corpus = builtin_corpus();
    let reports: Vec<_> =
        corpus.par_iter().map(|e| e.spec().and_then(|s| index_report(&s, DEFAULT_DMAX))).collect::<Result<_>>()?;
    for (e, r) in corpus.iter().zip(&reports) {
        let expected = EXPECTED_INDEX.iter().find(|(n, _)| *n == e.name).map(|x| x.1);
        if !r.agree() || Some(r.chi_formula) != expected {
            return fail(format!(
                "{}: formula {} oracle {} (stabilized {}), expected {expected:?}",
                e.name,
                r.chi_formula,
                r.chi_oracle(),
                r.oracle.stabilized
            ));
        }
    }
    Ok((true, format!("{} operators: formula equals the stabilized oracle index", corpus.len())))
}

fn irregularity_values(_: &Options) -> Check {
    let zero = Point::Finite(q(0));
    let cases: [(&str, Point, i64); 8] = [
        ("a1 = z^2\na0 = 1\nZ = {0, inf}", zero.clone(), 1),
        ("a2 = 1\na0 = -z\nZ = {inf}", Point::Infinity, 3),
        ("a1 = z\na0 = -2\nZ = {0, inf}", zero.clone(), 0),
        ("a1 = z\na0 = -2\nZ = {0, inf}", Point::Infinity, 0),
        ("a1 = z\na0 = -1/2\nZ = {0, inf}", zero.clone(), 0),
        ("a2 = z^2\na1 = z\na0 = -1\nZ = {0, inf}", zero.clone(), 0),
        ("a2 = z^2\na1 = z\na0 = -1\nZ = {0, inf}", Point::Infinity, 0),
        ("a2 = z^2\na1 = z + 1 + 2/z\na0 = 2/z^3 - 4/z^2\nZ = {0, inf}", zero, 3),
    ];
    for (src, x, expected) in &cases {
        let (_, s) = parse_operator_file(src)?;
        let ir = irregularity(s.op(), x);
        if ir != *expected {
            return fail(format!("ir_{x} = {ir}, expected {expected} for {:?}", src.replace('\n', "; ")));
        }
    }
    Ok((true, format!("{} irregularities match", cases.len())))
}
