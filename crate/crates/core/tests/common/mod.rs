//! Reference implementations used as oracles by the integration tests. They
//! work from the definitions on plain pair sets and integer data and share no
//! code with the library beyond its public types.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use unisheaf::relation::Relation;
use unisheaf::topology::FiniteTopology;

pub type Pairs = BTreeSet<(usize, usize)>;
pub type Set = BTreeSet<usize>;

pub fn pairs_of(r: &Relation) -> Pairs {
    r.pairs().collect()
}

pub fn set_of(s: &unisheaf::relation::Subset) -> Set {
    s.ones().collect()
}

/// `{(x, z) : ∃y (x, y) ∈ e, (y, z) ∈ f}` — "e then f".
pub fn compose(e: &Pairs, f: &Pairs) -> Pairs {
    let mut out = Pairs::new();
    for &(x, y) in e {
        for &(y2, z) in f {
            if y == y2 {
                out.insert((x, z));
            }
        }
    }
    out
}

pub fn inverse(e: &Pairs) -> Pairs {
    e.iter().map(|&(x, y)| (y, x)).collect()
}

pub fn image(e: &Pairs, a: &Set) -> Set {
    e.iter().filter(|(x, _)| a.contains(x)).map(|&(_, y)| y).collect()
}

pub fn diagonal(n: usize) -> Pairs {
    (0..n).map(|x| (x, x)).collect()
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect()
}

/// Definitional check of the filter generated by `basis`: every member
/// contains the diagonal; every member `E` has a member `E'` with
/// `E' ∘ E' ⊆ E`; symmetric when every member's inverse is a member.
/// Enumerates all members, so only for `n ≤ 3`.
pub struct FilterVerdict {
    pub quasi_uniform: bool,
    pub uniform: bool,
    pub smallest: Pairs,
}

pub fn filter_verdict(n: usize, basis: &[Pairs]) -> FilterVerdict {
    assert!(n <= 3, "filter enumeration is exponential");
    let universe = all_pairs(n);
    let smallest: Pairs = basis.iter().skip(1).fold(basis[0].clone(), |acc, b| acc.intersection(b).cloned().collect());
    let members: Vec<Pairs> = (0..1u32 << universe.len())
        .map(|m| (0..universe.len()).filter(|i| m >> i & 1 == 1).map(|i| universe[i]).collect::<Pairs>())
        .filter(|e| smallest.is_subset(e))
        .collect();
    let is_member = |e: &Pairs| smallest.is_subset(e);
    let reflexive = members.iter().all(|e| diagonal(n).is_subset(e));
    let cotransitive = members.iter().all(|e| members.iter().any(|d| compose(d, d).is_subset(e)));
    let symmetric = members.iter().all(|e| is_member(&inverse(e)));
    FilterVerdict {
        quasi_uniform: reflexive && cotransitive,
        uniform: reflexive && cotransitive && symmetric,
        smallest,
    }
}

/// Opens of a finite topology, from the library's listing.
pub fn opens(t: &FiniteTopology) -> Vec<Set> {
    t.opens().expect("small space").iter().map(set_of).collect()
}

/// `(x, y)` with `y` in every open containing `x`.
pub fn specialization(n: usize, opens: &[Set]) -> Pairs {
    all_pairs(n).into_iter().filter(|&(x, y)| opens.iter().all(|u| !u.contains(&x) || u.contains(&y))).collect()
}

/// Smallest entourage of the Pervin quasi-uniformity: the intersection of
/// `U × U ∪ (X ∖ U) × X` over all opens.
pub fn pervin_smallest(n: usize, opens: &[Set]) -> Pairs {
    all_pairs(n).into_iter().filter(|&(x, y)| opens.iter().all(|u| !u.contains(&x) || u.contains(&y))).collect()
}

/// Open sets of the topology induced by a smallest entourage `e`: `V` is open
/// when `e(x) ⊆ V` for every `x ∈ V`.
pub fn induced_opens(n: usize, e: &Pairs) -> BTreeSet<Set> {
    (0..1u32 << n)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<Set>())
        .filter(|v| v.iter().all(|x| image(e, &[*x].into()).is_subset(v)))
        .collect()
}

// ---------------------------------------------------------------------------
// Order complex

fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (a, b) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *a -= &f * b;
                }
            }
        }
        r += 1;
    }
    r
}

/// Betti numbers over ℚ of the order complex of the strict relation
/// `x < y ⟺ y ∈ U_x, y ≠ x`, trailing zeros trimmed. Equals the cohomology
/// of the constant sheaf on the finite space.
pub fn order_complex_betti(t: &FiniteTopology) -> Vec<usize> {
    let n = t.size();
    let less = |x: usize, y: usize| x != y && t.min_open(x).contains(y);
    let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|x| vec![x]).collect()];
    loop {
        let next: Vec<Vec<usize>> = chains
            .last()
            .unwrap()
            .iter()
            .flat_map(|c| {
                let last = *c.last().unwrap();
                (0..n).filter(move |&y| less(last, y)).map(move |y| {
                    let mut d = c.clone();
                    d.push(y);
                    d
                })
            })
            .collect();
        if next.is_empty() {
            break;
        }
        chains.push(next);
    }
    // boundary ∂_k : C_k → C_{k-1}
    let index: Vec<BTreeMap<Vec<usize>, usize>> =
        chains.iter().map(|level| level.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect()).collect();
    let ranks: Vec<usize> = (1..chains.len())
        .map(|k| {
            let mut m = vec![vec![BigRational::zero(); chains[k].len()]; chains[k - 1].len()];
            for (j, c) in chains[k].iter().enumerate() {
                for drop in 0..c.len() {
                    let mut face = c.clone();
                    face.remove(drop);
                    let sign = if drop % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                    m[index[k - 1][&face]][j] += sign;
                }
            }
            rank(m)
        })
        .collect();
    let mut betti: Vec<usize> = (0..chains.len())
        .map(|k| {
            let into = if k > 0 { ranks[k - 1] } else { 0 };
            let out = if k < ranks.len() { ranks[k] } else { 0 };
            chains[k].len() - into - out
        })
        .collect();
    while betti.len() > 1 && betti.last() == Some(&0) {
        betti.pop();
    }
    betti
}

// ---------------------------------------------------------------------------
// Differential operators with Laurent-polynomial coefficients

/// `Σ_k c_k z^k` with integer coefficients.
pub type Laurent = BTreeMap<i32, i64>;

pub fn laurent(terms: &[(i32, i64)]) -> Laurent {
    terms.iter().copied().filter(|t| t.1 != 0).collect()
}

/// A singular point: a finite integer or ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum At {
    Finite(i64),
    Infinity,
}

/// Order of vanishing of a nonzero Laurent polynomial at a point.
pub fn valuation(f: &Laurent, x: At) -> i64 {
    assert!(!f.is_empty(), "zero coefficient has no valuation");
    let lo = *f.keys().next().unwrap();
    let hi = *f.keys().next_back().unwrap();
    match x {
        At::Infinity => -(hi as i64),
        At::Finite(0) => lo as i64,
        At::Finite(a) => {
            // z^{-lo} f is a polynomial with no root at a ≠ 0 from the monomial factor
            let mut p: Vec<i128> = (lo..=hi).map(|k| *f.get(&k).unwrap_or(&0) as i128).collect();
            let mut mult = 0;
            loop {
                // synthetic division by (z − a), coefficients ascending
                let deg = p.len() - 1;
                let mut q = vec![0i128; deg];
                let mut acc = 0i128;
                for k in (0..=deg).rev() {
                    acc = acc * a as i128 + p[k];
                    if k > 0 {
                        q[k - 1] = acc;
                    }
                }
                if acc != 0 || deg == 0 {
                    return mult;
                }
                mult += 1;
                p = q;
            }
        }
    }
}

/// Malgrange's count: `ir_x = max_i (i − v_x(a_i)) − (n − v_x(a_n))` at a
/// finite point, and with `v_∞` replaced by `−deg` at infinity,
/// `ir_∞ = max_i (deg a_i − i) − (deg a_n − n)`.
pub fn irregularity(coeffs: &[Laurent], x: At) -> i64 {
    let n = coeffs.len() - 1;
    let score = |i: usize, a: &Laurent| match x {
        At::Infinity => -valuation(a, x) - i as i64,
        At::Finite(_) => i as i64 - valuation(a, x),
    };
    let best = coeffs.iter().enumerate().filter(|(_, a)| !a.is_empty()).map(|(i, a)| score(i, a)).max().unwrap();
    best - score(n, &coeffs[n])
}

/// `n(2 − #Z) − Σ ir`.
pub fn euler_characteristic(coeffs: &[Laurent], z: &[At]) -> i64 {
    let n = (coeffs.len() - 1) as i64;
    n * (2 - z.len() as i64) - z.iter().map(|&x| irregularity(coeffs, x)).sum::<i64>()
}

/// An operator of the built-in corpus with its coefficients as integer
/// Laurent polynomials (scaled to clear denominators) and the expected index.
pub struct OperatorCase {
    pub name: &'static str,
    pub coeffs: Vec<Laurent>,
    pub z: Vec<At>,
    pub expected_index: i64,
}

pub fn operator_cases() -> Vec<OperatorCase> {
    use At::{Finite, Infinity};
    let c = |name, coeffs, z, expected_index| OperatorCase { name, coeffs, z, expected_index };
    vec![
        c("trivial-gm", vec![laurent(&[]), laurent(&[(0, 1)])], vec![Finite(0), Infinity], 0),
        c("trivial-three-points", vec![laurent(&[]), laurent(&[(0, 1)])], vec![Finite(0), Finite(1), Infinity], -1),
        c("exp-pole", vec![laurent(&[(0, 1)]), laurent(&[(2, 1)])], vec![Finite(0), Infinity], -1),
        c("euler-two", vec![laurent(&[(0, -2)]), laurent(&[(1, 1)])], vec![Finite(0), Infinity], 0),
        c("euler-half", vec![laurent(&[(0, -1)]), laurent(&[(1, 2)])], vec![Finite(0), Infinity], 0),
        c("exp-affine", vec![laurent(&[(0, -1)]), laurent(&[(0, 1)])], vec![Infinity], 0),
        c("airy", vec![laurent(&[(1, -1)]), laurent(&[]), laurent(&[(0, 1)])], vec![Infinity], -1),
        c(
            "euler-rank-two",
            vec![laurent(&[(0, -1)]), laurent(&[(1, 1)]), laurent(&[(2, 1)])],
            vec![Finite(0), Infinity],
            0,
        ),
        c(
            "mixed-slopes",
            vec![laurent(&[(-3, 2), (-2, -4)]), laurent(&[(-1, 2), (0, 1), (1, 1)]), laurent(&[(2, 1)])],
            vec![Finite(0), Infinity],
            -3,
        ),
        c(
            "legendre-type",
            vec![laurent(&[(0, -1)]), laurent(&[(1, -2), (2, 2)])],
            vec![Finite(0), Finite(1), Infinity],
            -1,
        ),
    ]
}
