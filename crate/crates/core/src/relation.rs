//! Binary relations on a finite indexed set.
//!
//! A [`Relation`] is stored as one bit row per element: row `x` holds
//! `E(x) = { y : (x, y) ∈ E }`. Composition is diagrammatic, so
//! `compose(E, F)` means "E then F" and `image(compose(E, F), A)` equals
//! `image(F, image(E, A))`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A subset of a finite set, as a bit set over element indices.
pub type Subset = FixedBitSet;

/// Builds a subset of `{0..n}` from indices.
pub fn subset(n: usize, items: impl IntoIterator<Item = usize>) -> Subset {
    let mut s = FixedBitSet::with_capacity(n);
    for i in items {
        s.insert(i);
    }
    s
}

/// The full subset `{0..n}`.
pub fn full_subset(n: usize) -> Subset {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

/// Ordered, duplicate-free labels. Indices never change after construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl FiniteSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Arc::new(FiniteSet { labels, index }))
    }

    /// The set `{0, 1, .., n-1}` labelled by decimal numerals.
    pub fn numbered(n: usize) -> Arc<Self> {
        Self::new((0..n).map(|i| i.to_string())).expect("numerals are distinct")
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Renders a subset as `{a,b}` in index order.
    pub fn format_subset(&self, s: &Subset) -> String {
        let items: Vec<&str> = s.ones().map(|i| self.label(i)).collect();
        format!("{{{}}}", items.join(","))
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.labels).finish()
    }
}

#[derive(Clone)]
pub struct Relation {
    base: Arc<FiniteSet>,
    rows: Vec<FixedBitSet>,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.base, &other.base) || self.base == other.base) && self.rows == other.rows
    }
}

impl Eq for Relation {}

impl std::hash::Hash for Relation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().map(|(x, y)| (self.base.label(x).to_string(), self.base.label(y).to_string())))
            .finish()
    }
}

impl Relation {
    pub fn empty(base: &Arc<FiniteSet>) -> Self {
        let n = base.size();
        Relation { base: base.clone(), rows: vec![FixedBitSet::with_capacity(n); n] }
    }

    /// The diagonal Δ.
    pub fn diagonal(base: &Arc<FiniteSet>) -> Self {
        let mut r = Self::empty(base);
        for (i, row) in r.rows.iter_mut().enumerate() {
            row.insert(i);
        }
        r
    }

    /// X × X.
    pub fn full(base: &Arc<FiniteSet>) -> Self {
        let n = base.size();
        Relation { base: base.clone(), rows: vec![full_subset(n); n] }
    }

    pub fn from_pairs(base: &Arc<FiniteSet>, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Self::empty(base);
        let n = base.size();
        for (x, y) in pairs {
            for i in [x, y] {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, size: n });
                }
            }
            r.rows[x].insert(y);
        }
        Ok(r)
    }

    /// Builds from one neighbourhood row per element.
    pub fn from_rows(base: &Arc<FiniteSet>, rows: Vec<Subset>) -> Result<Self> {
        let n = base.size();
        if rows.len() != n {
            return Err(Error::IndexOutOfRange { index: rows.len(), size: n });
        }
        let rows = rows
            .into_iter()
            .map(|mut r| {
                if let Some(bad) = r.ones().find(|&i| i >= n) {
                    return Err(Error::IndexOutOfRange { index: bad, size: n });
                }
                r.grow(n);
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Relation { base: base.clone(), rows })
    }

    /// Relation encoded by the low `n*n` bits of `code`, bit `x*n + y` for `(x, y)`.
    /// Handy for exhaustive enumeration on tiny sets.
    pub fn from_code(base: &Arc<FiniteSet>, code: u64) -> Self {
        let n = base.size();
        let mut r = Self::empty(base);
        for x in 0..n {
            for y in 0..n {
                if code >> (x * n + y) & 1 == 1 {
                    r.rows[x].insert(y);
                }
            }
        }
        r
    }

    pub fn base(&self) -> &Arc<FiniteSet> {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    /// `E(x)`.
    pub fn row(&self, x: usize) -> &Subset {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Subset] {
        &self.rows
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(x, row)| row.ones().map(move |y| (x, y)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_clear())
    }

    fn same_base(&self, other: &Relation) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base) || self.base == other.base {
            Ok(())
        } else {
            Err(Error::IncompatibleBase)
        }
    }

    /// `{(x, z) : ∃y, (x, y) ∈ self, (y, z) ∈ other}`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        self.same_base(other)?;
        let rows = self.rows.iter().map(|row| other.image_unchecked(row)).collect();
        Ok(Relation { base: self.base.clone(), rows })
    }

    pub fn inverse(&self) -> Relation {
        let mut r = Self::empty(&self.base);
        for (x, y) in self.pairs() {
            r.rows[y].insert(x);
        }
        r
    }

    fn image_unchecked(&self, a: &Subset) -> Subset {
        let mut out = FixedBitSet::with_capacity(self.size());
        for x in a.ones() {
            out.union_with(&self.rows[x]);
        }
        out
    }

    /// `E(A) = { y : ∃x ∈ A, (x, y) ∈ E }`.
    pub fn image(&self, a: &Subset) -> Result<Subset> {
        let n = self.size();
        if let Some(bad) = a.ones().find(|&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, size: n });
        }
        Ok(self.image_unchecked(a))
    }

    /// `E^{∘n}(Z)`, the `n`-fold image.
    pub fn iterate(&self, n: usize, z: &Subset) -> Result<Subset> {
        if n == 0 {
            return Err(Error::ZeroIterations);
        }
        let mut cur = self.image(z)?;
        for _ in 1..n {
            cur = self.image_unchecked(&cur);
        }
        Ok(cur)
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.same_base(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.union_with(b);
                r
            })
            .collect();
        Ok(Relation { base: self.base.clone(), rows })
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.same_base(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.intersect_with(b);
                r
            })
            .collect();
        Ok(Relation { base: self.base.clone(), rows })
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn contains_diagonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.contains(i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.rows.iter().all(|row| self.image_unchecked(row).is_subset(row))
    }

    pub fn is_preorder(&self) -> bool {
        self.contains_diagonal() && self.is_transitive()
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_preorder() && self.is_symmetric()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(x, y)| x == y || !self.contains(y, x))
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn reflexive_transitive_closure(&self) -> Relation {
        let mut r = self.clone();
        for i in 0..r.size() {
            r.rows[i].insert(i);
        }
        for k in 0..r.size() {
            let rk = r.rows[k].clone();
            for i in 0..r.size() {
                if r.rows[i].contains(k) {
                    r.rows[i].union_with(&rk);
                }
            }
        }
        r
    }

    /// A pair `((x, y), (y, z))` in `self` with `(x, z)` missing, if any.
    pub fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        for (x, y) in self.pairs() {
            if let Some(z) = self.rows[y].ones().find(|&z| !self.contains(x, z)) {
                return Some((x, y, z));
            }
        }
        None
    }

    /// Sorted label pairs, the serialized form.
    pub fn label_pairs(&self) -> Vec<(String, String)> {
        let mut v: Vec<(String, String)> =
            self.pairs().map(|(x, y)| (self.base.label(x).to_string(), self.base.label(y).to_string())).collect();
        v.sort();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Arc<FiniteSet> {
        FiniteSet::new(["a", "b", "c"]).unwrap()
    }

    fn all_relations(base: &Arc<FiniteSet>) -> Vec<Relation> {
        let n = base.size();
        (0..1u64 << (n * n)).map(|c| Relation::from_code(base, c)).collect()
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(FiniteSet::new(["a", "a"]).unwrap_err(), Error::DuplicateLabel("a".into()));
    }

    #[test]
    fn single_path_composition() {
        let x = abc();
        let e = Relation::from_pairs(&x, [(0, 1)]).unwrap();
        let f = Relation::from_pairs(&x, [(1, 2)]).unwrap();
        assert_eq!(e.compose(&f).unwrap(), Relation::from_pairs(&x, [(0, 2)]).unwrap());
    }

    #[test]
    fn diagonal_is_left_unit() {
        let x = abc();
        let d = Relation::diagonal(&x);
        let e = Relation::from_pairs(&x, [(0, 1), (2, 0)]).unwrap();
        assert_eq!(d.compose(&e).unwrap(), e);
    }

    #[test]
    fn mismatched_bases_rejected() {
        let e = Relation::diagonal(&abc());
        let f = Relation::diagonal(&FiniteSet::numbered(3));
        assert_eq!(e.compose(&f).unwrap_err(), Error::IncompatibleBase);
    }

    #[test]
    fn full_then_reflexive_is_full() {
        let x = FiniteSet::numbered(2);
        let full = Relation::full(&x);
        for f in all_relations(&x).into_iter().filter(Relation::contains_diagonal) {
            assert_eq!(full.compose(&f).unwrap(), full);
        }
    }

    #[test]
    fn inverse_examples_and_involution() {
        let x = abc();
        assert_eq!(Relation::diagonal(&x).inverse(), Relation::diagonal(&x));
        let e = Relation::from_pairs(&x, [(0, 1)]).unwrap();
        assert_eq!(e.inverse(), Relation::from_pairs(&x, [(1, 0)]).unwrap());
        for n in 1..=3 {
            let b = FiniteSet::numbered(n);
            for e in all_relations(&b) {
                assert_eq!(e.inverse().inverse(), e);
            }
        }
    }

    #[test]
    fn image_examples() {
        let x = abc();
        let a = subset(3, [0, 1]);
        assert_eq!(Relation::diagonal(&x).image(&a).unwrap(), a);
        assert_eq!(Relation::full(&x).image(&a).unwrap(), full_subset(3));
        let e = Relation::from_pairs(&x, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(e.image(&a).unwrap(), subset(3, [1, 2]));
    }

    #[test]
    fn iterate_examples() {
        let x = FiniteSet::numbered(4);
        let z = subset(4, [0]);
        assert_eq!(Relation::diagonal(&x).iterate(5, &z).unwrap(), z);
        let mut succ = Relation::diagonal(&x);
        for i in 0..3 {
            succ.insert(i, i + 1);
        }
        assert_eq!(succ.iterate(3, &z).unwrap(), full_subset(4));
        assert_eq!(succ.iterate(2, &z).unwrap(), subset(4, [0, 1, 2]));
        assert_eq!(succ.iterate(0, &z).unwrap_err(), Error::ZeroIterations);
    }

    #[test]
    fn iterate_of_preorder_stabilizes_at_one() {
        let b = FiniteSet::numbered(3);
        for e in all_relations(&b).into_iter().filter(Relation::is_preorder) {
            for code in 0..8usize {
                let z = subset(3, (0..3).filter(|i| code >> i & 1 == 1));
                let once = e.iterate(1, &z).unwrap();
                for n in 2..4 {
                    assert_eq!(e.iterate(n, &z).unwrap(), once);
                }
            }
        }
    }

    #[test]
    fn composition_laws_exhaustive_on_two_points() {
        let b = FiniteSet::numbered(2);
        let all = all_relations(&b);
        let d = Relation::diagonal(&b);
        for e in &all {
            assert_eq!(d.compose(e).unwrap(), *e);
            assert_eq!(e.compose(&d).unwrap(), *e);
            for f in &all {
                for g in &all {
                    let l = e.compose(f).unwrap().compose(g).unwrap();
                    let r = e.compose(&f.compose(g).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn inverse_and_image_laws_exhaustive_on_three_points() {
        let b = FiniteSet::numbered(3);
        let all = all_relations(&b);
        let subsets: Vec<Subset> = (0..8usize).map(|c| subset(3, (0..3).filter(|i| c >> i & 1 == 1))).collect();
        // 512^2 pairs; sample every 7th second factor to keep this quick.
        for e in &all {
            for f in all.iter().step_by(7) {
                let ef = e.compose(f).unwrap();
                assert_eq!(ef.inverse(), f.inverse().compose(&e.inverse()).unwrap());
                for a in &subsets {
                    assert_eq!(ef.image(a).unwrap(), f.image(&e.image(a).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn predicates() {
        let x = abc();
        let d = Relation::diagonal(&x);
        assert!(d.is_preorder() && d.is_symmetric() && d.is_equivalence());
        let e = Relation::from_pairs(&x, [(0, 0), (1, 1), (2, 2), (0, 1)]).unwrap();
        assert!(e.is_preorder() && !e.is_symmetric());
        let f = Relation::from_pairs(&x, [(0, 1), (1, 2)]).unwrap();
        assert!(!f.is_transitive());
        assert_eq!(f.transitivity_witness(), Some((0, 1, 2)));
        assert!(f.union(&d).unwrap().contains_diagonal());
        assert!(f.intersection(&d).unwrap().is_empty());
    }

    #[test]
    fn closure_matches_iterated_composition() {
        let b = FiniteSet::numbered(3);
        for e in all_relations(&b) {
            let mut acc = Relation::diagonal(&b).union(&e).unwrap();
            for _ in 0..3 {
                acc = acc.compose(&acc).unwrap();
            }
            assert_eq!(e.reflexive_transitive_closure(), acc);
        }
    }
}
