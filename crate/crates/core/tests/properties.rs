//! Property tests: library operations against the reference oracles on
//! randomly generated inputs.

mod common;

use common::*;
use proptest::prelude::*;
use unisheaf::dmod::{deligne_chi, irregularity, parse_operator_file, rat, Point};
use unisheaf::quniform::{pervin, topology_from, QUniformity};
use unisheaf::relation::{subset, FiniteSet, Relation};
use unisheaf::spacefile::SpaceFile;
use unisheaf::topology::FiniteTopology;

fn relation(n: usize, code: u64) -> Relation {
    Relation::from_code(&FiniteSet::numbered(n), code & ((1u64 << (n * n)) - 1))
}

fn arb_relation(max: usize) -> impl Strategy<Value = (usize, u64, u64, u64)> {
    (1..=max).prop_flat_map(|n| (Just(n), any::<u64>(), any::<u64>(), any::<u64>()))
}

/// Reflexive-transitive closure, computed on pair sets.
fn closure(n: usize, r: &Pairs) -> Pairs {
    let mut c: Pairs = r.union(&diagonal(n)).cloned().collect();
    loop {
        let next: Pairs = c.union(&compose(&c, &c)).cloned().collect();
        if next == c {
            return c;
        }
        c = next;
    }
}

proptest! {
    #[test]
    fn relation_algebra_matches_pair_sets((n, a, b, mask) in arb_relation(5)) {
        let (e, f) = (relation(n, a), relation(n, b));
        let set: Set = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub = subset(n, set.iter().copied());
        prop_assert_eq!(pairs_of(&e.compose(&f).unwrap()), compose(&pairs_of(&e), &pairs_of(&f)));
        prop_assert_eq!(pairs_of(&e.inverse()), inverse(&pairs_of(&e)));
        prop_assert_eq!(set_of(&e.image(&sub).unwrap()), image(&pairs_of(&e), &set));
        let twice = image(&pairs_of(&e), &image(&pairs_of(&e), &set));
        prop_assert_eq!(set_of(&e.iterate(2, &sub).unwrap()), twice);
    }

    #[test]
    fn inverse_reverses_composition((n, a, b, _) in arb_relation(5)) {
        let (e, f) = (relation(n, a), relation(n, b));
        prop_assert_eq!(e.compose(&f).unwrap().inverse(), f.inverse().compose(&e.inverse()).unwrap());
    }

    #[test]
    fn basis_check_matches_definition(n in 1..=3usize, codes in prop::collection::vec(any::<u64>(), 1..=3)) {
        let rels: Vec<Relation> = codes.iter().map(|&c| relation(n, c)).collect();
        let expected = filter_verdict(n, &rels.iter().map(pairs_of).collect::<Vec<_>>());
        let report = QUniformity::new(&FiniteSet::numbered(n), rels, false).unwrap().check().unwrap();
        prop_assert_eq!(report.is_quasi_uniformity, expected.quasi_uniform);
        prop_assert_eq!(report.is_uniformity, expected.uniform);
        prop_assert_eq!(pairs_of(&report.e_min), expected.smallest);
    }

    #[test]
    fn smallest_entourage_is_below_every_basis_member((n, a, b, _) in arb_relation(6)) {
        let rels = vec![relation(n, a), relation(n, b)];
        let u = QUniformity::new(&FiniteSet::numbered(n), rels.clone(), false).unwrap();
        let e = u.e_min().unwrap();
        prop_assert!(rels.iter().all(|r| e.is_subset(r)));
    }

    #[test]
    fn pervin_recovers_the_topology((n, a, _, _) in arb_relation(5)) {
        let base = FiniteSet::numbered(n);
        let pre = closure(n, &pairs_of(&relation(n, a)));
        let t = FiniteTopology::from_preorder(&Relation::from_pairs(&base, pre.iter().copied()).unwrap()).unwrap();
        let p = pervin(&t).unwrap();
        prop_assert_eq!(pairs_of(&p.e_min().unwrap()), specialization(n, &opens(&t)));
        prop_assert_eq!(topology_from(&p).unwrap(), t);
    }

    #[test]
    fn space_files_round_trip((n, a, _, _) in arb_relation(5)) {
        let base = FiniteSet::numbered(n);
        let pre = closure(n, &pairs_of(&relation(n, a)));
        let u = QUniformity::new(&base, vec![Relation::from_pairs(&base, pre.iter().copied()).unwrap()], false).unwrap();
        let text = SpaceFile::from_quniformity("random", &u).to_canonical_string();
        let parsed = SpaceFile::parse(&text).unwrap();
        prop_assert_eq!(parsed.to_canonical_string(), text);
        prop_assert_eq!(pairs_of(&parsed.quniformity().unwrap().e_min().unwrap()), pre);
    }
}

// ---------------------------------------------------------------------------
// Operators with Laurent-polynomial coefficients and a leading coefficient
// `c z^k (z - 1)^m`, so that Z = {0, 1, ∞} contains every singularity.

fn binomial(m: u32, j: u32) -> i64 {
    (0..j).fold(1i64, |acc, i| acc * (m - i) as i64 / (i + 1) as i64)
}

fn leading(c: i64, k: i32, m: u32) -> Laurent {
    let terms: Vec<(i32, i64)> =
        (0..=m).map(|j| (k + j as i32, c * binomial(m, j) * if (m - j).is_multiple_of(2) { 1 } else { -1 })).collect();
    laurent(&terms)
}

fn render(f: &Laurent) -> String {
    if f.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = f.iter().map(|(k, c)| format!("({c})*z^{k}")).collect();
    terms.join(" + ")
}

fn source(coeffs: &[Laurent]) -> String {
    let mut s = String::new();
    for (i, a) in coeffs.iter().enumerate() {
        if !a.is_empty() {
            s.push_str(&format!("a{i} = {}\n", render(a)));
        }
    }
    s.push_str("Z = {0, 1, inf}\n");
    s
}

fn arb_laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-4..=4i32, -5..=5i64), 0..=3).prop_map(|t| {
        let mut f = Laurent::new();
        for (k, c) in t {
            *f.entry(k).or_insert(0) += c;
        }
        f.retain(|_, c| *c != 0);
        f
    })
}

fn arb_operator() -> impl Strategy<Value = Vec<Laurent>> {
    (1..=3usize, prop::sample::select(vec![-3i64, -1, 1, 2]), -3..=3i32, 0..=2u32).prop_flat_map(|(n, c, k, m)| {
        prop::collection::vec(arb_laurent(), n).prop_map(move |mut lower| {
            lower.push(leading(c, k, m));
            lower
        })
    })
}

const POINTS: [At; 3] = [At::Finite(0), At::Finite(1), At::Infinity];

fn point(x: At) -> Point {
    match x {
        At::Finite(a) => Point::Finite(rat(a, 1)),
        At::Infinity => Point::Infinity,
    }
}

proptest! {
    #[test]
    fn irregularity_matches_valuation_count(coeffs in arb_operator()) {
        let (_, spec) = parse_operator_file(&source(&coeffs)).unwrap();
        for x in POINTS {
            prop_assert_eq!(irregularity(spec.op(), &point(x)), common::irregularity(&coeffs, x), "at {:?}", x);
        }
        prop_assert_eq!(deligne_chi(&spec), euler_characteristic(&coeffs, &POINTS));
    }

    #[test]
    fn irregularity_ignores_scaling(coeffs in arb_operator(), s in prop::sample::select(vec![-2i64, 3, 7])) {
        let scaled: Vec<Laurent> = coeffs.iter().map(|a| a.iter().map(|(&k, &c)| (k, c * s)).collect()).collect();
        let (_, a) = parse_operator_file(&source(&coeffs)).unwrap();
        let (_, b) = parse_operator_file(&source(&scaled)).unwrap();
        for x in POINTS {
            prop_assert_eq!(irregularity(a.op(), &point(x)), irregularity(b.op(), &point(x)));
        }
    }

    #[test]
    fn regular_singular_operators_have_no_irregularity(n in 1..=3usize, cs in prop::collection::vec(-4..=4i64, 3)) {
        // Euler operators Σ c_i z^i ∂^i are regular everywhere.
        let mut coeffs: Vec<Laurent> = (0..n).map(|i| laurent(&[(i as i32, cs[i])])).collect();
        coeffs.push(laurent(&[(n as i32, 1)]));
        let (_, spec) = parse_operator_file(&source(&coeffs)).unwrap();
        for x in POINTS {
            prop_assert_eq!(irregularity(spec.op(), &point(x)), 0);
        }
    }
}
