//! Quasi-uniformities and uniformities on finite sets.
//!
//! On a finite set every filter is principal, so a (quasi-)uniformity given by
//! a finite entourage basis is determined by `E_min`, the intersection of the
//! basis. The axioms reduce as follows:
//!
//! * reflexivity: every basis element contains Δ;
//! * cotransitivity: `E_min ∘ E_min ⊆ E_min`. The smallest candidate `E'` for
//!   any member is `E_min` itself and every member contains `E_min`, so
//!   cotransitivity for all members is exactly transitivity of `E_min`;
//! * symmetry: `E_min` symmetric, since `E_min⁻¹` must contain `E_min`.
//!
//! `E(x)` is a neighbourhood of `x`. Hence opens are the sets `V` with
//! `E_min(x) ⊆ V` for `x ∈ V`, and `closure(A) = {x : E_min(x) ∩ A ≠ ∅}`.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::relation::{full_subset, subset, FiniteSet, Relation, Subset};
use crate::topology::FiniteTopology;

/// Largest base on which coverings are enumerated exhaustively.
pub const MAX_COVERING_ENUMERATION: usize = 4;
/// Largest base on which proximity tables and bornologies are materialized.
pub const MAX_TABLE_POINTS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QUniformity {
    base: Arc<FiniteSet>,
    basis: Vec<Relation>,
    symmetric: bool,
}

/// Which axiom failed, with a concrete entourage and pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    /// Index into the basis, or `None` when the witness lives on `E_min`.
    pub entourage: Option<usize>,
    pub pair: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QUniformityReport {
    pub is_quasi_uniformity: bool,
    pub is_uniformity: bool,
    pub e_min: Relation,
    pub violations: Vec<Violation>,
}

impl QUniformity {
    pub fn new(base: &Arc<FiniteSet>, basis: Vec<Relation>, symmetric: bool) -> Result<Self> {
        for e in &basis {
            if e.base() != base {
                return Err(Error::IncompatibleBase);
            }
        }
        Ok(QUniformity { base: base.clone(), basis, symmetric })
    }

    pub fn discrete(base: &Arc<FiniteSet>) -> Self {
        QUniformity { base: base.clone(), basis: vec![Relation::diagonal(base)], symmetric: true }
    }

    pub fn indiscrete(base: &Arc<FiniteSet>) -> Self {
        QUniformity { base: base.clone(), basis: vec![Relation::full(base)], symmetric: true }
    }

    /// The Sierpiński quasi-uniformity on `{0,1}`: `E(0) = {0,1}`, `E(1) = {1}`.
    pub fn sierpinski() -> Self {
        let b = FiniteSet::numbered(2);
        let e = Relation::from_pairs(&b, [(0, 0), (0, 1), (1, 1)]).unwrap();
        QUniformity { base: b, basis: vec![e], symmetric: false }
    }

    pub fn base(&self) -> &Arc<FiniteSet> {
        &self.base
    }

    pub fn basis(&self) -> &[Relation] {
        &self.basis
    }

    pub fn is_symmetric_flag(&self) -> bool {
        self.symmetric
    }

    /// Intersection of all basis elements.
    pub fn e_min(&self) -> Result<Relation> {
        let (first, rest) = self.basis.split_first().ok_or(Error::EmptyBasis)?;
        rest.iter().try_fold(first.clone(), |acc, e| acc.intersection(e))
    }

    pub fn check(&self) -> Result<QUniformityReport> {
        let e_min = self.e_min()?;
        let mut violations = Vec::new();
        for (i, e) in self.basis.iter().enumerate() {
            if let Some(x) = (0..e.size()).find(|&x| !e.contains(x, x)) {
                violations.push(Violation { axiom: "reflexive", entourage: Some(i), pair: (x, x) });
            }
        }
        let reflexive = violations.is_empty();
        let transitive = match e_min.transitivity_witness() {
            Some((x, _, z)) => {
                violations.push(Violation { axiom: "cotransitive", entourage: None, pair: (x, z) });
                false
            }
            None => true,
        };
        let symmetric = match e_min.pairs().find(|&(x, y)| !e_min.contains(y, x)) {
            Some((x, y)) => {
                if self.symmetric {
                    violations.push(Violation { axiom: "symmetric", entourage: None, pair: (y, x) });
                }
                false
            }
            None => true,
        };
        let is_quasi_uniformity = reflexive && transitive;
        Ok(QUniformityReport {
            is_quasi_uniformity,
            is_uniformity: is_quasi_uniformity && symmetric,
            e_min,
            violations,
        })
    }

    fn valid_e_min(&self) -> Result<Relation> {
        let report = self.check()?;
        let ok = if self.symmetric { report.is_uniformity } else { report.is_quasi_uniformity };
        if ok {
            Ok(report.e_min)
        } else {
            let v = &report.violations[0];
            Err(Error::NotATopology(format!("{} axiom fails", v.axiom)))
        }
    }
}

/// A covering: nonempty blocks, sorted and deduplicated.
pub type Covering = Vec<Subset>;

pub fn normalize_covering(blocks: impl IntoIterator<Item = Subset>) -> Covering {
    let mut v: Vec<Subset> = blocks.into_iter().filter(|b| !b.is_clear()).collect();
    v.sort();
    v.dedup();
    v
}

pub fn covers(n: usize, c: &Covering) -> bool {
    let mut u = Subset::with_capacity(n);
    for b in c {
        u.union_with(b);
    }
    u == full_subset(n)
}

/// Every block of `fine` lies in some block of `coarse`.
pub fn refines(fine: &Covering, coarse: &Covering) -> bool {
    fine.iter().all(|b| coarse.iter().any(|a| b.is_subset(a)))
}

/// Union of the blocks of `c` meeting `b`.
pub fn star(c: &Covering, b: &Subset) -> Result<Subset> {
    if !c.contains(b) {
        return Err(Error::BlockNotInCovering);
    }
    let mut out = b.clone();
    for other in c.iter().filter(|o| !o.is_disjoint(b)) {
        out.union_with(other);
    }
    Ok(out)
}

/// `fine` star-refines `coarse`.
pub fn star_refines(fine: &Covering, coarse: &Covering) -> bool {
    fine.iter().all(|b| {
        let s = star(fine, b).expect("block of its own covering");
        coarse.iter().any(|a| s.is_subset(a))
    })
}

/// The meet `{A ∩ B}` of two coverings.
pub fn meet(c: &Covering, d: &Covering) -> Covering {
    normalize_covering(c.iter().flat_map(|a| {
        d.iter().map(move |b| {
            let mut i = a.clone();
            i.intersect_with(b);
            i
        })
    }))
}

/// Every covering of `{0..n}` by nonempty subsets, `n ≤ 4`, sorted.
pub fn all_coverings(n: usize) -> Result<&'static [Covering]> {
    if n > MAX_COVERING_ENUMERATION {
        return Err(Error::TooLarge { size: n, limit: MAX_COVERING_ENUMERATION });
    }
    static CACHE: OnceLock<Vec<Vec<Covering>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (0..=MAX_COVERING_ENUMERATION).map(enumerate_coverings).collect());
    Ok(&cache[n])
}

fn enumerate_coverings(n: usize) -> Vec<Covering> {
    let blocks: Vec<Subset> = (1..1usize << n).map(|c| subset(n, (0..n).filter(|i| c >> i & 1 == 1))).collect();
    let mut out: Vec<Covering> = (1u64..1 << blocks.len())
        .map(|mask| normalize_covering((0..blocks.len()).filter(|i| mask >> i & 1 == 1).map(|i| blocks[i].clone())))
        .filter(|c| covers(n, c))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringFamily {
    base: Arc<FiniteSet>,
    coverings: Vec<Covering>,
}

impl CoveringFamily {
    pub fn new(base: &Arc<FiniteSet>, coverings: Vec<Covering>) -> Result<Self> {
        let n = base.size();
        let mut cs: Vec<Covering> = Vec::with_capacity(coverings.len());
        for c in coverings {
            let c = normalize_covering(c.into_iter().map(|mut b| {
                b.grow(n);
                b
            }));
            if !covers(n, &c) {
                return Err(Error::NotACovering(c.iter().map(|b| base.format_subset(b)).collect::<Vec<_>>().join(" ")));
            }
            cs.push(c);
        }
        cs.sort();
        cs.dedup();
        Ok(CoveringFamily { base: base.clone(), coverings: cs })
    }

    pub fn base(&self) -> &Arc<FiniteSet> {
        &self.base
    }

    pub fn coverings(&self) -> &[Covering] {
        &self.coverings
    }

    pub fn contains(&self, c: &Covering) -> bool {
        self.coverings.binary_search(c).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TukeyReport {
    /// Indices of two coverings whose meet is missing.
    pub meet_witness: Option<(usize, usize)>,
    /// A covering refined by a member but absent; `None` in `refinement_closed`
    /// means the base is too large to enumerate coverings.
    pub refinement_closed: Option<bool>,
    pub refinement_witness: Option<Covering>,
    /// Index of a covering with no star-refinement in the family.
    pub star_witness: Option<usize>,
}

impl TukeyReport {
    pub fn is_valid(&self) -> bool {
        self.meet_witness.is_none() && self.refinement_closed != Some(false) && self.star_witness.is_none()
    }
}

pub fn is_tukey_family(t: &CoveringFamily) -> TukeyReport {
    let cs = t.coverings();
    let meet_witness = (0..cs.len())
        .flat_map(|i| (i..cs.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !t.contains(&meet(&cs[i], &cs[j])));
    let (refinement_closed, refinement_witness) = match all_coverings(t.base().size()) {
        Ok(all) => {
            let w = all.iter().find(|&c| !t.contains(c) && cs.iter().any(|m| refines(m, c))).cloned();
            (Some(w.is_none()), w)
        }
        Err(_) => (None, None),
    };
    let star_witness = (0..cs.len()).find(|&i| !cs.iter().any(|d| star_refines(d, &cs[i])));
    TukeyReport { meet_witness, refinement_closed, refinement_witness, star_witness }
}

/// Coverings refined by `(E_min(x))_x`, materialized for `|X| ≤ 4`.
pub fn weil_to_tukey(u: &QUniformity) -> Result<CoveringFamily> {
    if !u.symmetric {
        return Err(Error::NotSymmetric);
    }
    let e_min = u.valid_e_min()?;
    let n = u.base.size();
    let balls = normalize_covering(e_min.rows().iter().cloned());
    let coverings = all_coverings(n)?.iter().filter(|c| refines(&balls, c)).cloned().collect();
    CoveringFamily::new(&u.base, coverings)
}

/// Basis `{∪ A_i × A_i}`. The family must be a base of a Tukey uniformity:
/// any two members have a common refinement of their meet in the family, and
/// every member has a star-refinement in the family. Saturation under
/// coarsening is not required; it does not change the generated filter.
///
/// When one member refines all others its relation alone generates the
/// filter, and the basis is reduced to it.
pub fn tukey_to_weil(t: &CoveringFamily) -> Result<QUniformity> {
    let cs = t.coverings();
    if cs.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let base = t.base();
    let relation_of = |c: &Covering| {
        let mut r = Relation::empty(base);
        for b in c {
            for x in b.ones() {
                for y in b.ones() {
                    r.insert(x, y);
                }
            }
        }
        r
    };
    // A member refining the meet of all members refines every meet, and a
    // star-refinement of it star-refines every member.
    let all_meet = cs[1..].iter().fold(cs[0].clone(), |m, c| meet(&m, c));
    if let Some(finest) = cs.iter().find(|c| refines(c, &all_meet)) {
        if cs.iter().any(|d| star_refines(d, finest)) {
            return QUniformity::new(base, vec![relation_of(finest)], true);
        }
    }
    for i in 0..cs.len() {
        for j in i..cs.len() {
            let m = meet(&cs[i], &cs[j]);
            if !cs.iter().any(|c| refines(c, &m)) {
                return Err(Error::InvalidTukeyFamily(format!(
                    "meet of coverings {i} and {j} has no refinement in the family"
                )));
            }
        }
        if !cs.iter().any(|d| star_refines(d, &cs[i])) {
            return Err(Error::InvalidTukeyFamily(format!("covering {i} has no star-refinement")));
        }
    }
    QUniformity::new(base, cs.iter().map(relation_of).collect(), true)
}

/// A point-generated (quasi-)proximity: `A near B` iff some `a ∈ A`, `b ∈ B`
/// have `(a, b) ∈ rel`. Every proximity built here has this form, so
/// distributivity holds by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proximity {
    rel: Relation,
}

impl Proximity {
    pub fn from_relation(rel: Relation) -> Self {
        Proximity { rel }
    }

    pub fn base(&self) -> &Arc<FiniteSet> {
        self.rel.base()
    }

    pub fn generator(&self) -> &Relation {
        &self.rel
    }

    /// Defined on nonempty sets; false if either side is empty.
    pub fn near(&self, a: &Subset, b: &Subset) -> bool {
        a.ones().any(|x| !self.rel.row(x).is_disjoint(b))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rel.is_symmetric()
    }

    fn nonempty_subsets(&self) -> Result<Vec<Subset>> {
        let n = self.base().size();
        if n > MAX_TABLE_POINTS {
            return Err(Error::TooLarge { size: n, limit: MAX_TABLE_POINTS });
        }
        Ok((1..1usize << n).map(|c| subset(n, (0..n).filter(|i| c >> i & 1 == 1))).collect())
    }

    /// Materialized `near` table over nonempty subsets, `|X| ≤ 12`.
    pub fn table(&self) -> Result<Vec<(Subset, Subset, bool)>> {
        let subsets = self.nonempty_subsets()?;
        let mut out = Vec::with_capacity(subsets.len() * subsets.len());
        for a in &subsets {
            for b in &subsets {
                out.push((a.clone(), b.clone(), self.near(a, b)));
            }
        }
        Ok(out)
    }

    /// The optional axiom: if for every `C`, `A near C` or `B near X∖C`,
    /// then `A near B`. Evaluated, never assumed.
    pub fn satisfies_separation_axiom(&self) -> Result<bool> {
        let subsets = self.nonempty_subsets()?;
        let n = self.base().size();
        let mut all_c: Vec<Subset> = subsets.clone();
        all_c.push(Subset::with_capacity(n));
        for a in &subsets {
            for b in &subsets {
                if self.near(a, b) {
                    continue;
                }
                let premise = all_c.iter().all(|c| {
                    let mut comp = c.clone();
                    comp.toggle_range(..);
                    self.near(a, c) || self.near(b, &comp)
                });
                if premise {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `A near B` iff `(A × B) ∩ E_min ≠ ∅`.
pub fn proximity_from(u: &QUniformity) -> Result<Proximity> {
    Ok(Proximity::from_relation(u.valid_e_min()?))
}

/// `B` is a ν-neighbourhood of `A` iff `A` is not near `X ∖ B`.
pub fn nu_neighborhood(p: &Proximity, a: &Subset, b: &Subset) -> bool {
    let mut comp = b.clone();
    comp.toggle_range(..);
    !p.near(a, &comp)
}

pub fn topology_from(u: &QUniformity) -> Result<FiniteTopology> {
    FiniteTopology::from_preorder(&u.valid_e_min()?)
}

/// `(X × U) ∪ ((X ∖ K) × X)`.
fn pervin_entourage(base: &Arc<FiniteSet>, k: &Subset, u: &Subset) -> Relation {
    let n = base.size();
    let rows = (0..n).map(|x| if k.contains(x) { u.clone() } else { full_subset(n) }).collect();
    Relation::from_rows(base, rows).expect("sized")
}

/// Basis `{(X × U) ∪ ((X ∖ U) × X) : U open}`.
pub fn pervin(t: &FiniteTopology) -> Result<QUniformity> {
    let basis = t.opens()?.iter().map(|u| pervin_entourage(t.base(), u, u)).collect();
    QUniformity::new(t.base(), basis, false)
}

/// Basis `{(X × U) ∪ ((X ∖ K) × X) : K ⊆ U, U open}`; every subset of a
/// finite space is quasi-compact.
pub fn kunzi(t: &FiniteTopology) -> Result<QUniformity> {
    let mut basis = Vec::new();
    for u in t.opens()? {
        let members: Vec<usize> = u.ones().collect();
        for code in 0..1usize << members.len() {
            let k = subset(t.size(), (0..members.len()).filter(|i| code >> i & 1 == 1).map(|i| members[i]));
            basis.push(pervin_entourage(t.base(), &k, &u));
        }
    }
    QUniformity::new(t.base(), basis, false)
}

#[derive(Clone, Debug)]
pub struct HausdorffQuotient {
    pub base: Arc<FiniteSet>,
    pub uniformity: QUniformity,
    pub projection: Vec<usize>,
}

/// Quotient by the equivalence `E_min`; finite uniform spaces are complete,
/// so this is the Hausdorff completion.
pub fn hausdorff_quotient(u: &QUniformity) -> Result<HausdorffQuotient> {
    if !u.symmetric {
        return Err(Error::NotSymmetric);
    }
    let e_min = u.valid_e_min()?;
    let n = u.base.size();
    let mut reps: Vec<usize> = Vec::new();
    let mut projection = vec![0; n];
    for x in 0..n {
        match reps.iter().position(|&r| e_min.contains(r, x)) {
            Some(c) => projection[x] = c,
            None => {
                projection[x] = reps.len();
                reps.push(x);
            }
        }
    }
    // Classes are labelled by their members joined with `+`, e.g. `a+b`.
    let labels: Vec<String> =
        reps.iter().map(|&r| e_min.row(r).ones().map(|x| u.base.label(x)).collect::<Vec<_>>().join("+")).collect();
    let base = FiniteSet::new(labels)?;
    let basis = u
        .basis
        .iter()
        .map(|e| Relation::from_pairs(&base, e.pairs().map(|(x, y)| (projection[x], projection[y]))).expect("in range"))
        .collect();
    Ok(HausdorffQuotient { uniformity: QUniformity::new(&base, basis, true)?, base, projection })
}

/// Checks `(f × f)⁻¹(E_min^Y) ⊇ E_min^X`; returns a violating pair.
pub fn is_uniformly_continuous(
    f: &[usize],
    ux: &QUniformity,
    uy: &QUniformity,
) -> Result<(bool, Option<(usize, usize)>)> {
    let n = ux.base.size();
    if f.len() != n {
        return Err(Error::NotTotal(format!("map has {} values for {} points", f.len(), n)));
    }
    if let Some(&bad) = f.iter().find(|&&y| y >= uy.base.size()) {
        return Err(Error::NotTotal(format!("value {bad} outside the target")));
    }
    let ex = ux.e_min()?;
    let ey = uy.e_min()?;
    let witness = ex.pairs().find(|&(x, y)| !ey.contains(f[x], f[y]));
    Ok((witness.is_none(), witness))
}

/// Always precompact; returns `Z` with `E_min(Z) = X`, one representative per
/// source class of the preorder.
pub fn is_precompact(u: &QUniformity) -> Result<(bool, Subset)> {
    let e = u.e_min()?;
    let n = u.base.size();
    let mut z = Subset::with_capacity(n);
    for x in 0..n {
        let is_source = (0..n).all(|y| !e.contains(y, x) || e.contains(x, y));
        let has_rep = z.ones().any(|r| e.contains(r, x) && e.contains(x, r));
        if is_source && !has_rep {
            z.insert(x);
        }
    }
    let covered = e.image(&z)?;
    Ok((covered == full_subset(n), z))
}

/// A bounded set with its witness `(Z, n)`: `E^{∘n}(Z) ⊇ B` for every entourage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedSet {
    pub set: Subset,
    pub z: Subset,
    pub n: usize,
}

/// On a finite set every subset is bounded with `Z = B`, `n = 1`.
pub fn canonical_bornology(u: &QUniformity) -> Result<Vec<BoundedSet>> {
    let e = u.valid_e_min()?;
    bounded_family(&e)
}

/// Every subset of a finite space is precompact.
pub fn precompact_bornology(u: &QUniformity) -> Result<Vec<BoundedSet>> {
    let e = u.valid_e_min()?;
    bounded_family(&e)
}

fn bounded_family(e: &Relation) -> Result<Vec<BoundedSet>> {
    let n = e.size();
    if n > MAX_TABLE_POINTS {
        return Err(Error::TooLarge { size: n, limit: MAX_TABLE_POINTS });
    }
    (0..1usize << n)
        .map(|c| {
            let b = subset(n, (0..n).filter(|i| c >> i & 1 == 1));
            debug_assert!(b.is_clear() || b.is_subset(&e.iterate(1, &b)?));
            Ok(BoundedSet { set: b.clone(), z: b, n: 1 })
        })
        .collect()
}

/// `A near B` iff the closures in `xbar` meet; `x` must be dense.
pub fn smirnov_proximity(xbar: &FiniteTopology, x: &Subset) -> Result<Proximity> {
    if !xbar.is_dense(x) {
        return Err(Error::NotDense);
    }
    let idx: Vec<usize> = x.ones().collect();
    let labels: Vec<String> = idx.iter().map(|&i| xbar.base().label(i).to_string()).collect();
    let base = FiniteSet::new(labels)?;
    let n = xbar.size();
    let closures: Vec<Subset> = idx.iter().map(|&i| xbar.closure(&subset(n, [i]))).collect();
    let mut rel = Relation::empty(&base);
    for a in 0..idx.len() {
        for b in 0..idx.len() {
            if !closures[a].is_disjoint(&closures[b]) {
                rel.insert(a, b);
            }
        }
    }
    Ok(Proximity::from_relation(rel))
}

/// Sorted canonical rendering of a covering.
pub fn format_covering(base: &FiniteSet, c: &Covering) -> String {
    let blocks: BTreeSet<String> = c.iter().map(|b| base.format_subset(b)).collect();
    blocks.into_iter().collect::<Vec<_>>().join(" ")
}
