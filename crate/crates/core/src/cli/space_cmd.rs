//! Subcommands on space files.

use std::fmt::Write;
use std::path::Path;

use super::{parse_set, read, CmdResult, InputError};
use crate::quniform::{self, Proximity, QUniformity};
use crate::relation::{FiniteSet, Relation};
use crate::spacefile::SpaceFile;

fn load(path: &Path) -> Result<SpaceFile, InputError> {
    Ok(SpaceFile::parse(&read(path)?)?)
}

fn pairs(r: &Relation) -> String {
    let base = r.base();
    let items: Vec<String> =
        sorted_pairs(r).into_iter().map(|(x, y)| format!("({},{})", base.label(x), base.label(y))).collect();
    items.join(" ")
}

/// Pairs in the label order of the file format.
fn sorted_pairs(r: &Relation) -> Vec<(usize, usize)> {
    let base = r.base();
    let mut v: Vec<(usize, usize)> = r.pairs().collect();
    v.sort_by(|p, q| {
        crate::spacefile::label_order(base.label(p.0), base.label(q.0))
            .then_with(|| crate::spacefile::label_order(base.label(p.1), base.label(q.1)))
    });
    v
}

fn label(base: &FiniteSet, x: usize) -> &str {
    base.label(x)
}

pub(super) fn check(path: &Path, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let mut ok = true;
    let has_uniform = f.kind.is_some() || !f.entourages.is_empty() || (f.coverings.is_empty() && f.opens.is_empty());
    if has_uniform {
        let u = f.quniformity()?;
        let r = u.check()?;
        let _ = writeln!(out, "quasi-uniformity={}", r.is_quasi_uniformity);
        let _ = writeln!(out, "uniformity={}", r.is_uniformity);
        let _ = writeln!(out, "e_min={}", pairs(&r.e_min));
        for v in &r.violations {
            let e = v.entourage.map_or("min".to_string(), |i| i.to_string());
            let (x, y) = v.pair;
            let _ = writeln!(
                out,
                "violation axiom={} entourage={e} pair=({},{})",
                v.axiom,
                label(&f.base, x),
                label(&f.base, y)
            );
        }
        ok &= if u.is_symmetric_flag() { r.is_uniformity } else { r.is_quasi_uniformity };
    }
    if !f.coverings.is_empty() {
        let t = f.covering_family()?;
        let r = quniform::is_tukey_family(&t);
        let _ = writeln!(out, "tukey={}", r.is_valid());
        match r.meet_witness {
            Some((i, j)) => {
                let _ = writeln!(out, "tukey.meets=missing({i},{j})");
            }
            None => out.push_str("tukey.meets=closed\n"),
        }
        match (r.refinement_closed, &r.refinement_witness) {
            (Some(true), _) => out.push_str("tukey.refinement=closed\n"),
            (Some(false), Some(c)) => {
                let _ = writeln!(out, "tukey.refinement=missing {}", quniform::format_covering(&f.base, c));
            }
            _ => out.push_str("tukey.refinement=unchecked\n"),
        }
        match r.star_witness {
            Some(i) => {
                let _ = writeln!(out, "tukey.star=missing({i})");
            }
            None => out.push_str("tukey.star=closed\n"),
        }
        ok &= r.is_valid();
    }
    if !f.opens.is_empty() {
        let t = f.topology()?;
        let _ = writeln!(out, "topology=true");
        let _ = writeln!(out, "t0={}", t.is_t0());
        let _ = writeln!(out, "specialization={}", pairs(&t.specialization()));
        if let Some(d) = &f.dense {
            let dense = t.is_dense(d);
            let _ = writeln!(out, "dense={dense}");
            ok &= dense;
        }
    }
    Ok(ok)
}

pub(super) fn convert(path: &Path, weil_to_tukey: bool, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let converted = if weil_to_tukey {
        SpaceFile::from_covering_family(&f.name, &quniform::weil_to_tukey(&f.quniformity()?)?)
    } else {
        SpaceFile::from_quniformity(&f.name, &quniform::tukey_to_weil(&f.covering_family()?)?)
    };
    out.push_str(&converted.to_canonical_string());
    Ok(true)
}

fn write_proximity(p: &Proximity, out: &mut String) -> Result<(), InputError> {
    let _ = writeln!(out, "generator={}", pairs(p.generator()));
    let _ = writeln!(out, "symmetric={}", p.is_symmetric());
    let _ = writeln!(out, "separation={}", p.satisfies_separation_axiom()?);
    Ok(())
}

pub(super) fn derive(path: &Path, proximity: bool, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let u = f.quniformity()?;
    if proximity {
        write_proximity(&quniform::proximity_from(&u)?, out)?;
    } else {
        out.push_str(&SpaceFile::from_topology(&f.name, &quniform::topology_from(&u)?)?.to_canonical_string());
    }
    Ok(true)
}

pub(super) fn pervin_kunzi(path: &Path, kunzi: bool, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let t = f.topology()?;
    let u = if kunzi { quniform::kunzi(&t)? } else { quniform::pervin(&t)? };
    out.push_str(&SpaceFile::from_quniformity(&f.name, &u).to_canonical_string());
    Ok(true)
}

pub(super) fn quotient(path: &Path, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let q = quniform::hausdorff_quotient(&f.quniformity()?)?;
    out.push_str(&SpaceFile::from_quniformity(&f.name, &q.uniformity).to_canonical_string());
    for (x, &c) in q.projection.iter().enumerate() {
        let _ = writeln!(out, "project {} {}", f.base.label(x), q.base.label(c));
    }
    Ok(true)
}

pub(super) fn star(path: &Path, covering: usize, block: &str, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let c = f.coverings.get(covering).ok_or_else(|| InputError::new(format!("no covering with index {covering}")))?;
    let b = parse_set(&f.base, block)?;
    let _ = writeln!(out, "star={}", f.base.format_subset(&quniform::star(c, &b)?));
    Ok(true)
}

pub(super) fn near(path: &Path, a: &str, b: &str, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let p = quniform::proximity_from(&f.quniformity()?)?;
    let (a, b) = (parse_set(&f.base, a)?, parse_set(&f.base, b)?);
    let _ = writeln!(out, "near={}", p.near(&a, &b));
    let _ = writeln!(out, "nu_neighborhood={}", quniform::nu_neighborhood(&p, &a, &b));
    Ok(true)
}

pub(super) fn continuity(source: &Path, target: &Path, map: &str, out: &mut String) -> CmdResult {
    let (fx, fy) = (load(source)?, load(target)?);
    let mut values: Vec<Option<usize>> = vec![None; fx.base.size()];
    for item in map.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (x, y) = item
            .split_once('=')
            .ok_or_else(|| InputError::new(format!("map entry '{item}' is not of the form x=y")))?;
        let (x, y) = (fx.base.index_of(x.trim())?, fy.base.index_of(y.trim())?);
        if values[x].replace(y).is_some() {
            return Err(InputError::new(format!("map assigns '{}' twice", fx.base.label(x))));
        }
    }
    let f: Vec<usize> = values
        .iter()
        .enumerate()
        .map(|(x, v)| {
            v.ok_or_else(|| InputError::from(crate::Error::NotTotal(format!("no value for '{}'", fx.base.label(x)))))
        })
        .collect::<Result<_, _>>()?;
    let (ok, witness) = quniform::is_uniformly_continuous(&f, &fx.quniformity()?, &fy.quniformity()?)?;
    let _ = writeln!(out, "continuous={ok}");
    if let Some((x, y)) = witness {
        let _ = writeln!(out, "witness=({},{})", fx.base.label(x), fx.base.label(y));
    }
    Ok(ok)
}

pub(super) fn precompact(path: &Path, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let (ok, z) = quniform::is_precompact(&f.quniformity()?)?;
    let _ = writeln!(out, "precompact={ok}");
    let _ = writeln!(out, "z={}", f.base.format_subset(&z));
    Ok(ok)
}

pub(super) fn bornology(path: &Path, precompact: bool, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let u: QUniformity = f.quniformity()?;
    let family = if precompact { quniform::precompact_bornology(&u)? } else { quniform::canonical_bornology(&u)? };
    for b in &family {
        let _ = writeln!(out, "bounded {} z={} n={}", f.base.format_subset(&b.set), f.base.format_subset(&b.z), b.n);
    }
    Ok(true)
}

pub(super) fn smirnov(path: &Path, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let dense = f.dense.clone().ok_or_else(|| InputError::new("missing 'dense' line"))?;
    write_proximity(&quniform::smirnov_proximity(&f.topology()?, &dense)?, out)?;
    Ok(true)
}

pub(super) enum RelOp {
    Compose,
    Inverse,
    Image(String),
    Iterate(usize, String),
}

pub(super) fn relation(path: &Path, op: RelOp, out: &mut String) -> CmdResult {
    let f = load(path)?;
    let first = f.entourages.first().ok_or(crate::Error::EmptyBasis)?;
    match op {
        RelOp::Compose => {
            let second = f.entourages.get(1).ok_or_else(|| InputError::new("compose needs two entourage lines"))?;
            let _ = writeln!(out, "entourage {}", pairs(&first.compose(second)?));
        }
        RelOp::Inverse => {
            let _ = writeln!(out, "entourage {}", pairs(&first.inverse()));
        }
        RelOp::Image(set) => {
            let a = parse_set(&f.base, &set)?;
            let _ = writeln!(out, "image={}", f.base.format_subset(&first.image(&a)?));
        }
        RelOp::Iterate(n, set) => {
            let z = parse_set(&f.base, &set)?;
            let _ = writeln!(out, "iterate={}", f.base.format_subset(&first.iterate(n, &z)?));
        }
    }
    Ok(true)
}
