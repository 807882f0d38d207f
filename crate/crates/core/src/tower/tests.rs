use super::*;
use crate::gtop::{sheaf_cohomology, PosetSheaf};

fn tower(g: Generator, n: usize) -> CoveringTower {
    make_tower(g, n).unwrap()
}

#[test]
fn generator_names() {
    assert_eq!(Generator::from_name("padic", Some(3)).unwrap(), Generator::Padic(3));
    assert!(matches!(Generator::from_name("padic", Some(4)), Err(Error::UnknownGenerator(_))));
    assert!(matches!(Generator::from_name("torus", None), Err(Error::UnknownGenerator(_))));
    assert_eq!(make_tower(Generator::Metric, 0).unwrap_err(), Error::ZeroDepth);
}

#[test]
fn formal_levels_repeat() {
    let t = tower(Generator::Formal(3), 4);
    for k in 1..=4 {
        assert_eq!(t.level_blocks(k), vec![BlockId::Residue(0), BlockId::Residue(1), BlockId::Residue(2)]);
    }
}

#[test]
fn star_certificates_verify() {
    for g in [Generator::Metric, Generator::Sectorial, Generator::Padic(2), Generator::Padic(3), Generator::Formal(5)] {
        let c = tower(g.clone(), 6).star_certificate();
        assert!(c.verified(), "{}: {:?}", g.name(), c);
    }
    let fin = Generator::Finite(crate::quniform::QUniformity::sierpinski());
    assert!(tower(fin, 3).star_certificate().verified());
}

#[test]
fn consecutive_disk_levels_do_not_star_refine() {
    // the star of a level-(k+1) square has side 3·2^-(k+1) > 2·2^-k is false,
    // but it is not centred on a level-k vertex for odd centres
    let t = tower(Generator::Metric, 3);
    let b = BlockId::Grid(1, 1);
    let coarse = t.level_blocks(2);
    assert!(!coarse.iter().any(|&c| t.star_within(3, b, 2, c)));
}

#[test]
fn sample_membership() {
    let t = tower(Generator::Metric, 2);
    let pt = SamplePoint::Cartesian(ratio(1, 8), ratio(0, 1));
    assert_eq!(t.blocks_containing(2, &pt).unwrap(), vec![BlockId::Grid(0, 0), BlockId::Grid(1, 0)]);
    let p = tower(Generator::Padic(3), 2);
    let a = SamplePoint::Adic { value: 22, digits: 3 };
    assert_eq!(p.blocks_containing(2, &a).unwrap(), vec![BlockId::Residue(4)]);
    assert!(t.blocks_containing(1, &SamplePoint::Cartesian(ratio(0, 1), ratio(0, 1))).is_err());
}

#[test]
fn thread_counts() {
    for n in 1..=5 {
        let met = enumerate_threads(&tower(Generator::Metric, n));
        assert_eq!(met.count(ThreadTag::Puncture), 1);
        let sec = enumerate_threads(&tower(Generator::Sectorial, n));
        assert_eq!(sec.count(ThreadTag::Tangential), 1 << n);
        let pad = enumerate_threads(&tower(Generator::Padic(3), n));
        assert_eq!(pad.count(ThreadTag::End), 3usize.pow(n as u32));
        assert_eq!(pad.unrepresentable, vec!["type 3", "type 4"]);
    }
    let t = tower(Generator::Sectorial, 2);
    let rec = enumerate_threads(&t).records(&t);
    assert!(rec.contains(&"tangential s(0,0)/s(0,0)".to_string()));
}

#[test]
fn puncture_quotient_is_a_circle() {
    for n in 2..=4 {
        let q = puncture_quotient(&tower(Generator::Sectorial, n)).unwrap();
        assert_eq!(q.size(), 2 << n);
        assert_eq!(sheaf_cohomology(&PosetSheaf::constant(q, 1).unwrap()), vec![1, 1]);
    }
    let q = puncture_quotient(&tower(Generator::Metric, 3)).unwrap();
    assert_eq!(q.size(), 1);
}

#[test]
fn sector_coverings() {
    let s = quarter_sectors();
    for n in 3..=5 {
        let sec = is_uniform_covering(&tower(Generator::Sectorial, n), &s).unwrap();
        assert!(sec.holds && sec.subcover == vec![0, 1, 2, 3]);
        let met = is_uniform_covering(&tower(Generator::Metric, n), &s).unwrap();
        assert!(!met.holds);
        assert_eq!(met.witness.unwrap().tag, ThreadTag::Puncture);
        assert_eq!(is_tukey_at_depth(&tower(Generator::Sectorial, n), &s).unwrap(), Some(3));
        assert_eq!(is_tukey_at_depth(&tower(Generator::Metric, n), &s).unwrap(), None);
    }
    let p = tower(Generator::Padic(3), 3);
    let disks: Vec<Region> = (0..3).map(|a| Region::Residue { value: a, level: 1 }).collect();
    assert!(is_uniform_covering(&p, &disks).unwrap().holds);
    assert_eq!(is_tukey_at_depth(&p, &disks).unwrap(), Some(1));
}

#[test]
fn covering_agrees_with_finite_quotient() {
    use crate::relation::subset;
    let t = tower(Generator::Sectorial, 1);
    let d = thread_pair(&t).unwrap();
    let blocks = t.level_blocks(1);
    let member = |ids: &[BlockId]| Region::Blocks { level: 1, ids: ids.to_vec() };
    let cases = [
        vec![member(&[BlockId::Polar(1, 0)]), member(&[BlockId::Polar(1, 1)])],
        vec![member(&[BlockId::Polar(1, 0)]), member(&[BlockId::Polar(2, 1)])],
        vec![member(&[BlockId::Polar(2, 0), BlockId::Polar(2, 1)])],
    ];
    let mut seen = Vec::new();
    for cover in &cases {
        let v = is_uniform_covering(&t, cover).unwrap();
        let mut ext = subset(d.size(), []);
        for m in cover {
            let trace = subset(d.size(), (0..blocks.len()).filter(|&i| t.block_in_region(1, blocks[i], m).unwrap()));
            ext.union_with(&d.u_check(&trace).unwrap());
        }
        assert_eq!(v.holds, ext.count_ones(..) == d.size());
        seen.push(v.holds);
    }
    assert_eq!(seen, vec![true, false, false]);
}

#[test]
fn identity_continuity() {
    for g in [Generator::Metric, Generator::Sectorial, Generator::Padic(2)] {
        let t = tower(g, 4);
        let r = check_uniform_continuity(TowerMap::Identity, &t, &t).unwrap();
        for e in &r.entries {
            assert_eq!(e.outcome, ContinuityOutcome::Level(e.target));
        }
    }
    let f = tower(Generator::Formal(3), 3);
    let r = check_uniform_continuity(TowerMap::Identity, &f, &f).unwrap();
    assert!(r.entries.iter().all(|e| e.outcome == ContinuityOutcome::Level(1)));
}

#[test]
fn blow_up_continuity() {
    let sec = tower(Generator::Sectorial, 8);
    let met = tower(Generator::Metric, 4);
    let r = check_uniform_continuity(TowerMap::SecToMet, &sec, &met).unwrap();
    assert_eq!(r.verdict(), Some(true));
    let levels: Vec<usize> = r
        .entries
        .iter()
        .map(|e| match e.outcome {
            ContinuityOutcome::Level(n) => n,
            _ => unreachable!(),
        })
        .collect();
    assert!(levels.windows(2).all(|w| w[0] <= w[1]));
    let back =
        check_uniform_continuity(TowerMap::MetToSec, &tower(Generator::Metric, 4), &tower(Generator::Sectorial, 3))
            .unwrap();
    assert_eq!(back.verdict(), Some(false));
    assert!(matches!(back.entries[0].outcome, ContinuityOutcome::Fail { block: BlockId::Grid(0, 0), .. }));
    assert!(check_uniform_continuity(TowerMap::SecToMet, &met, &sec).is_err());
}

#[test]
fn bornology_witnesses() {
    let t = tower(Generator::Sectorial, 4);
    let one = Region::Blocks { level: 4, ids: vec![BlockId::Polar(5, 3)] };
    let b = bornology_at_depth(&t, &one).unwrap();
    assert_eq!((b.n, b.z.len()), (1, 1));
    let sector = &quarter_sectors()[0];
    let b = bornology_at_depth(&t, sector).unwrap();
    assert!(b.canonically_bounded && b.z.len() == 1 && b.n > 1);
    let p = tower(Generator::Padic(2), 3);
    let b = bornology_at_depth(&p, &Region::Whole).unwrap();
    assert_eq!((b.z_level, b.z.len(), b.n), (1, 2, 1));
}
