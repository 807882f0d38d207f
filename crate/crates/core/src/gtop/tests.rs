use super::sheaf::{format_sheaf, parse_sheaf};
use super::*;
use crate::linalg::{q, Matrix};
use crate::relation::{full_subset, FiniteSet};

fn s(n: usize, items: &[usize]) -> Subset {
    subset(n, items.iter().copied())
}

fn sierpinski_pair() -> DensePair {
    DensePair::new(FiniteTopology::sierpinski(), s(2, &[1])).unwrap()
}

#[test]
fn u_check_examples() {
    let d = sierpinski_pair();
    assert_eq!(d.u_check(&s(2, &[1])).unwrap(), full_subset(2));
    assert_eq!(d.u_check(&s(2, &[])).unwrap(), s(2, &[]));
    assert_eq!(d.u_check(&s(2, &[0])).unwrap_err(), Error::NotOpen);
    let pc = DensePair::new(FiniteTopology::pseudo_circle(), s(4, &[0, 1])).unwrap();
    assert_eq!(pc.u_check(&s(4, &[0, 1])).unwrap(), full_subset(4));
    assert_eq!(pc.u_check(&s(4, &[0])).unwrap(), s(4, &[0]));
    assert_eq!(pc.u_hat(&s(4, &[0])).unwrap(), s(4, &[0, 2, 3]));
    assert_eq!(DensePair::new(FiniteTopology::sierpinski(), s(2, &[0])).unwrap_err(), Error::NotDense);
}

#[test]
fn l7_examples() {
    let disc = DensePair::full(FiniteTopology::discrete(&FiniteSet::numbered(3)));
    let r = check_l7(&disc, 3);
    assert!(r.items.iter().all(|i| i.holds));
    let r = check_l7(&sierpinski_pair(), 3);
    assert!(r.required_hold());
    assert!(!r.item(7).holds && r.item(7).informational);
    let pc = DensePair::new(FiniteTopology::pseudo_circle(), s(4, &[0, 1])).unwrap();
    assert!(check_l7(&pc, 3).required_hold());
}

#[test]
fn g_topology_examples() {
    let d = sierpinski_pair();
    let g = uniform_g_topology(&d, 3);
    assert_eq!(g.coverings_of(&s(2, &[])), vec![Vec::<Subset>::new()]);
    assert_eq!(g.coverings_of(&s(2, &[1])), vec![vec![s(2, &[1])]]);
    let disc = DensePair::full(FiniteTopology::discrete(&FiniteSet::numbered(3)));
    assert_eq!(uniform_g_topology(&disc, 3), all_open_coverings(&disc, 3));
    // On the pseudo-circle pair, {a} ∪ {b} does not reach the closed points.
    let pc = DensePair::new(FiniteTopology::pseudo_circle(), s(4, &[0, 1])).unwrap();
    assert!(!pc.is_g_covering(&s(4, &[0, 1]), &[s(4, &[0]), s(4, &[1])]).unwrap());
    assert!(pc.is_g_covering(&s(4, &[0, 1]), &[s(4, &[0, 1])]).unwrap());
}

#[test]
fn grothendieck_bullets() {
    for d in [sierpinski_pair(), DensePair::new(FiniteTopology::pseudo_circle(), s(4, &[0, 1])).unwrap()] {
        assert!(check_grothendieck(&uniform_g_topology(&d, 3)).holds());
        assert!(check_grothendieck(&all_open_coverings(&d, 3)).holds());
    }
    let d = DensePair::full(FiniteTopology::discrete(&FiniteSet::numbered(3)));
    let all = all_open_coverings(&d, 3);
    let missing = vec![s(3, &[0]), s(3, &[1]), s(3, &[2])];
    let covers = all
        .opens()
        .into_iter()
        .map(|u| {
            let mut list = all.coverings_of(&u);
            list.retain(|f| *f != missing);
            (u, list)
        })
        .collect();
    let g = GCoveringSystem::from_coverings(&d, 3, covers).unwrap();
    let r = check_grothendieck(&g);
    assert!(r.bullets[0].holds && r.bullets[1].holds);
    assert!(!r.bullets[2].holds);
    assert!(r.bullets[2].witness.as_ref().unwrap().contains("{0} {1} {2}"));
}

#[test]
fn cohomology_examples() {
    let point = FiniteTopology::discrete(&FiniteSet::numbered(1));
    assert_eq!(sheaf_cohomology(&PosetSheaf::constant(point, 1).unwrap()), vec![1]);
    let pc = FiniteTopology::pseudo_circle();
    assert_eq!(sheaf_cohomology(&PosetSheaf::constant(pc.clone(), 1).unwrap()), vec![1, 1]);
    assert_eq!(sheaf_cohomology(&PosetSheaf::constant(pc, 2).unwrap()), vec![2, 2]);
    let sier = FiniteTopology::sierpinski();
    assert_eq!(sheaf_cohomology(&PosetSheaf::constant(sier.clone(), 1).unwrap()), vec![1]);
    // Zero restriction on the Sierpiński space: global sections are F_1 ⊕ 0.
    let zero = PosetSheaf::new(sier, vec![1, 1], vec![((0, 1), Matrix::zeros(1, 1))]).unwrap();
    assert_eq!(sheaf_cohomology(&zero), vec![1]);
}

#[test]
fn cech_examples() {
    let pc = FiniteTopology::pseudo_circle();
    let full = DensePair::full(pc.clone());
    let f = PosetSheaf::constant(pc.clone(), 1).unwrap();
    assert_eq!(cech_cohomology(&full, &f, &[full_subset(4)]).unwrap(), vec![1]);
    assert_eq!(cech_cohomology(&full, &f, &finest_g_covering(&full)).unwrap(), vec![1, 1]);
    let two = DensePair::new(pc, s(4, &[0, 1])).unwrap();
    assert!(matches!(cech_cohomology(&two, &f, &[s(4, &[0]), s(4, &[1])]), Err(Error::NotGCovering(_))));
}

#[test]
fn functoriality_is_enforced() {
    // chain 0 → 1 → 2 (U_0 = {0,1,2}); a given composite disagreeing with ρ_12 ρ_01.
    let b = FiniteSet::numbered(3);
    let r = crate::relation::Relation::from_pairs(&b, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]).unwrap();
    let t = FiniteTopology::from_preorder(&r).unwrap();
    let two = Matrix::from_rows(vec![vec![q(2)]], 1);
    let e = PosetSheaf::new(t.clone(), vec![1, 1, 1], vec![((0, 2), two.clone())]).unwrap_err();
    assert!(matches!(e, Error::NonFunctorial(_)));
    let ok = PosetSheaf::new(t.clone(), vec![1, 1, 1], vec![((0, 1), two.clone())]).unwrap();
    assert_eq!(ok.map(0, 2).unwrap(), two);
    let indiscrete = FiniteTopology::indiscrete(&FiniteSet::numbered(2));
    assert_eq!(PosetSheaf::constant(indiscrete, 1).unwrap_err(), Error::NotT0);
}

#[test]
fn sheaf_file_roundtrip() {
    let text = "sheaf circle\npoints a b c d\nedge c a\nedge c b\nedge d a\nedge d b\nstalk a 2\nmap c a [1; 0]\nmap d a [0; 1/2]\n";
    let (name, f) = parse_sheaf(text).unwrap();
    assert_eq!(name, "circle");
    assert_eq!(f.base(), &FiniteTopology::pseudo_circle());
    let back = format_sheaf(&name, &f);
    assert_eq!(parse_sheaf(&back).unwrap().1, f);
    assert_eq!(sheaf_cohomology(&f), vec![0, 1]);
    let e = parse_sheaf("sheaf s\npoints a b\nmap a b [1 x]\n").unwrap_err();
    assert!(matches!(e, Error::Parse { line: 3, column: 12, .. }));
}
