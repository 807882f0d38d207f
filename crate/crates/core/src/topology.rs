//! Finite (Alexandrov) topologies.
//!
//! A finite topology is determined by the minimal open neighbourhood `U_x`
//! of each point. The specialization relation used throughout the crate is
//! `x → y  iff  y ∈ U_x`; it is a preorder and every preorder arises this way.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::relation::{full_subset, subset, FiniteSet, Relation, Subset};

/// Largest base for which the open family is materialized by brute force.
pub const MAX_ENUMERATED_POINTS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    base: Arc<FiniteSet>,
    min_open: Vec<Subset>,
}

impl FiniteTopology {
    /// From the specialization preorder (`U_x = R(x)`).
    pub fn from_preorder(r: &Relation) -> Result<Self> {
        if !r.contains_diagonal() {
            return Err(Error::NotATopology("specialization relation is not reflexive".into()));
        }
        if let Some((x, y, z)) = r.transitivity_witness() {
            let b = r.base();
            return Err(Error::NotATopology(format!(
                "specialization relation is not transitive at ({},{},{})",
                b.label(x),
                b.label(y),
                b.label(z)
            )));
        }
        Ok(FiniteTopology { base: r.base().clone(), min_open: r.rows().to_vec() })
    }

    /// From an explicit family of opens, checked for ∅, X, unions and intersections.
    pub fn from_opens(base: &Arc<FiniteSet>, opens: &[Subset]) -> Result<Self> {
        let n = base.size();
        let mut family: Vec<Subset> = opens
            .iter()
            .map(|o| {
                let mut o = o.clone();
                o.grow(n);
                o
            })
            .collect();
        family.sort();
        family.dedup();
        let has = |s: &Subset| family.binary_search(s).is_ok();
        if !has(&Subset::with_capacity(n)) {
            return Err(Error::NotATopology("missing the empty set".into()));
        }
        if !has(&full_subset(n)) {
            return Err(Error::NotATopology("missing the whole set".into()));
        }
        for a in &family {
            for b in &family {
                let mut u = a.clone();
                u.union_with(b);
                if !has(&u) {
                    return Err(Error::NotATopology(format!("union {} not open", base.format_subset(&u))));
                }
                let mut i = a.clone();
                i.intersect_with(b);
                if !has(&i) {
                    return Err(Error::NotATopology(format!("intersection {} not open", base.format_subset(&i))));
                }
            }
        }
        let min_open = (0..n)
            .map(|x| {
                let mut u = full_subset(n);
                for o in family.iter().filter(|o| o.contains(x)) {
                    u.intersect_with(o);
                }
                u
            })
            .collect();
        Ok(FiniteTopology { base: base.clone(), min_open })
    }

    pub fn discrete(base: &Arc<FiniteSet>) -> Self {
        Self::from_preorder(&Relation::diagonal(base)).expect("diagonal is a preorder")
    }

    pub fn indiscrete(base: &Arc<FiniteSet>) -> Self {
        Self::from_preorder(&Relation::full(base)).expect("full relation is a preorder")
    }

    /// Sierpiński space on `{0, 1}` with opens `∅, {1}, X`.
    pub fn sierpinski() -> Self {
        let b = FiniteSet::numbered(2);
        Self::from_preorder(&Relation::from_pairs(&b, [(0, 0), (0, 1), (1, 1)]).unwrap()).unwrap()
    }

    /// The 4-point pseudo-circle: open points `a, b`, closed points `c, d`
    /// with `U_c = {a,b,c}` and `U_d = {a,b,d}`.
    pub fn pseudo_circle() -> Self {
        let b = FiniteSet::new(["a", "b", "c", "d"]).unwrap();
        let r = Relation::from_pairs(&b, [(0, 0), (1, 1), (2, 2), (3, 3), (2, 0), (2, 1), (3, 0), (3, 1)]).unwrap();
        Self::from_preorder(&r).unwrap()
    }

    pub fn base(&self) -> &Arc<FiniteSet> {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }

    /// The minimal open neighbourhood `U_x`.
    pub fn min_open(&self, x: usize) -> &Subset {
        &self.min_open[x]
    }

    pub fn specialization(&self) -> Relation {
        Relation::from_rows(&self.base, self.min_open.clone()).expect("rows sized to base")
    }

    pub fn is_open(&self, a: &Subset) -> bool {
        a.ones().all(|x| self.min_open[x].is_subset(a))
    }

    pub fn is_closed(&self, a: &Subset) -> bool {
        let mut c = a.clone();
        c.toggle_range(..);
        self.is_open(&c)
    }

    /// `{x : U_x ∩ A ≠ ∅}`.
    pub fn closure(&self, a: &Subset) -> Subset {
        subset(self.size(), (0..self.size()).filter(|&x| !self.min_open[x].is_disjoint(a)))
    }

    /// `{x : U_x ⊆ A}`.
    pub fn interior(&self, a: &Subset) -> Subset {
        subset(self.size(), (0..self.size()).filter(|&x| self.min_open[x].is_subset(a)))
    }

    /// Smallest open containing `a`.
    pub fn open_hull(&self, a: &Subset) -> Subset {
        let mut out = Subset::with_capacity(self.size());
        for x in a.ones() {
            out.union_with(&self.min_open[x]);
        }
        out
    }

    /// All open sets, sorted.
    pub fn opens(&self) -> Result<Vec<Subset>> {
        let n = self.size();
        if n > MAX_ENUMERATED_POINTS {
            return Err(Error::TooLarge { size: n, limit: MAX_ENUMERATED_POINTS });
        }
        let mut out: Vec<Subset> = (0..1usize << n)
            .map(|c| subset(n, (0..n).filter(|i| c >> i & 1 == 1)))
            .filter(|s| self.is_open(s))
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn is_t0(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| (x + 1..n).all(|y| self.min_open[x] != self.min_open[y]))
    }

    /// Points with `U_x = {x}`.
    pub fn open_points(&self) -> Subset {
        subset(self.size(), (0..self.size()).filter(|&x| self.min_open[x].count_ones(..) == 1))
    }

    /// Dense iff `A` meets every nonempty open, i.e. every `U_x`.
    pub fn is_dense(&self, a: &Subset) -> bool {
        self.min_open.iter().all(|u| !u.is_disjoint(a))
    }

    /// The subspace topology on `a`, with the inclusion as index map.
    pub fn subspace(&self, a: &Subset) -> (FiniteTopology, Vec<usize>) {
        let idx: Vec<usize> = a.ones().collect();
        let labels: Vec<String> = idx.iter().map(|&i| self.base.label(i).to_string()).collect();
        let base = FiniteSet::new(labels).expect("labels distinct");
        let pos = |g: usize| idx.iter().position(|&i| i == g);
        let rows = idx.iter().map(|&i| subset(idx.len(), self.min_open[i].ones().filter_map(pos))).collect();
        let r = Relation::from_rows(&base, rows).expect("sized");
        (FiniteTopology::from_preorder(&r).expect("restriction of a preorder"), idx)
    }

    /// Identifies points with equal minimal opens. Returns the T0 space and
    /// the projection.
    pub fn t0_quotient(&self) -> (FiniteTopology, Vec<usize>) {
        let n = self.size();
        let mut reps: Vec<usize> = Vec::new();
        let mut proj = vec![0; n];
        for x in 0..n {
            match reps.iter().position(|&r| self.min_open[r] == self.min_open[x]) {
                Some(c) => proj[x] = c,
                None => {
                    proj[x] = reps.len();
                    reps.push(x);
                }
            }
        }
        let labels: Vec<String> = reps.iter().map(|&r| self.base.label(r).to_string()).collect();
        let base = FiniteSet::new(labels).expect("distinct");
        let m = reps.len();
        let rows = reps.iter().map(|&r| subset(m, self.min_open[r].ones().map(|y| proj[y]))).collect();
        let q = FiniteTopology::from_preorder(&Relation::from_rows(&base, rows).unwrap()).expect("quotient preorder");
        (q, proj)
    }
}

/// All preorders on `{0..n}` (so all topologies), as relations. `n ≤ 5`.
pub fn enumerate_preorders(n: usize) -> Result<Vec<Relation>> {
    enumerate_reflexive(n, |r| r.is_transitive())
}

/// All partial orders on `{0..n}` (so all T0 topologies). `n ≤ 5`.
pub fn enumerate_partial_orders(n: usize) -> Result<Vec<Relation>> {
    enumerate_reflexive(n, |r| r.is_antisymmetric() && r.is_transitive())
}

fn enumerate_reflexive(n: usize, keep: impl Fn(&Relation) -> bool + Sync) -> Result<Vec<Relation>> {
    if n > 5 {
        return Err(Error::TooLarge { size: n, limit: 5 });
    }
    let base = FiniteSet::numbered(n);
    let off: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let diag: u64 = (0..n).map(|i| 1u64 << (i * n + i)).sum();
    let mut out: Vec<Relation> = (0..1u64 << off.len())
        .into_par_iter()
        .filter_map(|c| {
            let mut code = diag;
            for (k, &(x, y)) in off.iter().enumerate() {
                if c >> k & 1 == 1 {
                    code |= 1 << (x * n + y);
                }
            }
            let r = Relation::from_code(&base, code);
            keep(&r).then_some(r)
        })
        .collect();
    out.sort_by_key(|r| r.pairs().collect::<Vec<_>>());
    Ok(out)
}
