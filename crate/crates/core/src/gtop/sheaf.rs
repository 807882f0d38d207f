//! Sheaves on finite T0 spaces and their cohomology.
//!
//! A sheaf on a finite space is a functor on the specialization order: a
//! stalk `F_x = F(U_x)` for every point and a restriction `F_x → F_y` for every
//! `y ∈ U_x`. Values on an open `V` are compatible families over `V`.
//!
//! Cohomology is the derived limit, computed by the complex whose `n`-cochains
//! assign to every strict chain `x_0 → … → x_n` (each `x_{k+1} ∈ U_{x_k}`) an
//! element of `F_{x_n}`, with
//! `(dc)(x_0…x_n) = Σ_{j<n} (-1)^j c(…x̂_j…) + (-1)^n ρ c(x_0…x_{n-1})`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{from_mask, is_sub, DensePair};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Q};
use crate::relation::{FiniteSet, Relation, Subset};
use crate::spacefile::{tokenize, Cursor};
use crate::topology::FiniteTopology;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetSheaf {
    base: FiniteTopology,
    dims: Vec<usize>,
    /// Restrictions `F_x → F_y` for all `y ∈ U_x`, `y ≠ x`, as `d_y × d_x` matrices.
    maps: BTreeMap<(usize, usize), Matrix>,
}

impl PosetSheaf {
    /// Maps must be given at least on the covering pairs of the order; any
    /// further maps given must agree with the composites. Missing covering
    /// maps between stalks of equal dimension default to the identity.
    pub fn new(base: FiniteTopology, dims: Vec<usize>, given: Vec<((usize, usize), Matrix)>) -> Result<Self> {
        if !base.is_t0() {
            return Err(Error::NotT0);
        }
        let n = base.size();
        if dims.len() != n {
            return Err(Error::IndexOutOfRange { index: dims.len(), size: n });
        }
        let label = |i: usize| base.base().label(i).to_string();
        let mut given_map: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
        for ((x, y), m) in given {
            if x >= n || y >= n {
                return Err(Error::IndexOutOfRange { index: x.max(y), size: n });
            }
            if x == y || !base.min_open(x).contains(y) {
                return Err(Error::NonFunctorial(format!("{} is not a generization of {}", label(y), label(x))));
            }
            if m.rows() != dims[y] || m.cols() != dims[x] {
                return Err(Error::NonFunctorial(format!(
                    "map {}→{} has shape {}x{}, expected {}x{}",
                    label(x),
                    label(y),
                    m.rows(),
                    m.cols(),
                    dims[y],
                    dims[x]
                )));
            }
            given_map.insert((x, y), m);
        }
        let between = |x: usize, y: usize, z: usize| {
            z != x && z != y && base.min_open(x).contains(z) && base.min_open(z).contains(y)
        };
        let is_cover = |x: usize, y: usize| (0..n).all(|z| !between(x, y, z));
        let mut maps: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
        // Covering pairs first.
        for x in 0..n {
            for y in base.min_open(x).ones().filter(|&y| y != x && is_cover(x, y)) {
                let m = match given_map.get(&(x, y)) {
                    Some(m) => m.clone(),
                    None if dims[x] == dims[y] => Matrix::identity(dims[x]),
                    None => return Err(Error::NonFunctorial(format!("missing map {}→{}", label(x), label(y)))),
                };
                maps.insert((x, y), m);
            }
        }
        // Longer pairs by increasing interval size, every factorization must agree.
        let mut pairs: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|x| base.min_open(x).ones().filter(move |&y| y != x).map(move |y| (x, y)))
            .filter(|&(x, y)| !is_cover(x, y))
            .map(|(x, y)| ((0..n).filter(|&z| between(x, y, z)).count(), x, y))
            .collect();
        pairs.sort_unstable();
        for (_, x, y) in pairs {
            let mut composite: Option<Matrix> = None;
            for z in (0..n).filter(|&z| between(x, y, z) && is_cover(x, z)) {
                let c = maps[&(z, y)].mul(&maps[&(x, z)]);
                match &composite {
                    Some(prev) if *prev != c => {
                        return Err(Error::NonFunctorial(format!("composites {}→{} disagree", label(x), label(y))))
                    }
                    Some(_) => {}
                    None => composite = Some(c),
                }
            }
            let c = composite.expect("non-covering pair factors through a covering pair");
            if let Some(m) = given_map.get(&(x, y)) {
                if *m != c {
                    return Err(Error::NonFunctorial(format!(
                        "given map {}→{} differs from the composite",
                        label(x),
                        label(y)
                    )));
                }
            }
            maps.insert((x, y), c);
        }
        Ok(PosetSheaf { base, dims, maps })
    }

    /// Constant sheaf of rank `d`.
    pub fn constant(base: FiniteTopology, d: usize) -> Result<Self> {
        let n = base.size();
        Self::new(base, vec![d; n], Vec::new())
    }

    pub fn base(&self) -> &FiniteTopology {
        &self.base
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Restriction `F_x → F_y`; identity when `x = y`.
    pub fn map(&self, x: usize, y: usize) -> Option<Matrix> {
        if x == y {
            Some(Matrix::identity(self.dims[x]))
        } else {
            self.maps.get(&(x, y)).cloned()
        }
    }

    /// The same sheaf with points reordered to match `labels`.
    pub fn reindex(&self, target: &FiniteTopology) -> Result<Self> {
        let n = self.base.size();
        if target.size() != n {
            return Err(Error::IncompatibleBase);
        }
        let perm: Vec<usize> =
            (0..n).map(|i| target.base().index_of(self.base.base().label(i))).collect::<Result<_>>()?;
        let mut dims = vec![0; n];
        for i in 0..n {
            dims[perm[i]] = self.dims[i];
        }
        for x in 0..n {
            let mut moved: Vec<usize> = self.base.min_open(x).ones().map(|y| perm[y]).collect();
            moved.sort_unstable();
            if moved != target.min_open(perm[x]).ones().collect::<Vec<_>>() {
                return Err(Error::IncompatibleBase);
            }
        }
        let given = self.maps.iter().map(|(&(x, y), m)| ((perm[x], perm[y]), m.clone())).collect();
        let out = PosetSheaf::new(target.clone(), dims, given)?;
        Ok(out)
    }

    /// Basis of `F(V)` for an open `V`, as columns in `⊕_{x ∈ V} F_x`
    /// (points in increasing order).
    pub fn sections(&self, v: &Subset) -> Matrix {
        let pts: Vec<usize> = v.ones().collect();
        let mut offset = BTreeMap::new();
        let mut total = 0;
        for &p in &pts {
            offset.insert(p, total);
            total += self.dims[p];
        }
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for (&(x, y), m) in &self.maps {
            if !(v.contains(x) && v.contains(y)) {
                continue;
            }
            for r in 0..self.dims[y] {
                let mut row = vec![Q::zero(); total];
                for c in 0..self.dims[x] {
                    row[offset[&x] + c] = m.get(r, c).clone();
                }
                row[offset[&y] + r] -= Q::one();
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return Matrix::identity(total);
        }
        Matrix::from_rows(rows, total).kernel()
    }
}

/// Strict chains grouped by length, `chains[n]` holding chains of `n + 1` points.
fn chains(t: &FiniteTopology) -> Vec<Vec<Vec<usize>>> {
    let n = t.size();
    let mut out: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|x| vec![x]).collect()];
    loop {
        let next: Vec<Vec<usize>> = out
            .last()
            .unwrap()
            .iter()
            .flat_map(|c| {
                let last = *c.last().unwrap();
                t.min_open(last).ones().filter(move |&y| y != last).map(move |y| {
                    let mut e = c.clone();
                    e.push(y);
                    e
                })
            })
            .collect();
        if next.is_empty() {
            return out;
        }
        out.push(next);
    }
}

fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Dimensions of `H^k(X̂; F)` for `k = 0, 1, …`, trailing zeros dropped.
pub fn sheaf_cohomology(f: &PosetSheaf) -> Vec<usize> {
    let ch = chains(&f.base);
    let offsets: Vec<BTreeMap<Vec<usize>, usize>> = ch
        .iter()
        .map(|level| {
            let mut acc = 0;
            level
                .iter()
                .map(|c| {
                    let o = acc;
                    acc += f.dims[*c.last().unwrap()];
                    (c.clone(), o)
                })
                .collect()
        })
        .collect();
    let dim = |k: usize| ch[k].iter().map(|c| f.dims[*c.last().unwrap()]).sum::<usize>();
    // rank of d: C^{k-1} → C^k
    let rank_d = |k: usize| -> usize {
        if k == 0 || k >= ch.len() {
            return 0;
        }
        let mut m = Matrix::zeros(dim(k), dim(k - 1));
        for (sigma, &row0) in &offsets[k] {
            let len = sigma.len();
            for j in 0..len - 1 {
                let mut face = sigma.clone();
                face.remove(j);
                let col0 = offsets[k - 1][&face];
                let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
                for r in 0..f.dims[sigma[len - 1]] {
                    m.add_at(row0 + r, col0 + r, &sign);
                }
            }
            let face = sigma[..len - 1].to_vec();
            let col0 = offsets[k - 1][&face];
            let rho = f.map(sigma[len - 2], sigma[len - 1]).unwrap();
            let sign = if (len - 1) % 2 == 0 { Q::one() } else { -Q::one() };
            for r in 0..rho.rows() {
                for c in 0..rho.cols() {
                    m.add_at(row0 + r, col0 + c, &(rho.get(r, c) * &sign));
                }
            }
        }
        m.rank()
    };
    let ranks: Vec<usize> = (0..=ch.len()).map(rank_d).collect();
    trim((0..ch.len()).map(|k| dim(k) - ranks[k] - ranks[k + 1]).collect())
}

/// `{ι⁻¹(U_x)}`: refines every uniform covering of `X`.
pub fn finest_g_covering(d: &DensePair) -> Vec<Subset> {
    let n = d.size();
    let mut masks: Vec<u32> = (0..n).map(|p| d.up[p] & d.xmask).collect();
    masks.sort_unstable();
    masks.dedup();
    masks.into_iter().map(|m| from_mask(n, m)).collect()
}

/// Čech cohomology of the uniform covering `c` of `X` with coefficients
/// `U ↦ F(Ǔ)`.
pub fn cech_cohomology(d: &DensePair, f: &PosetSheaf, c: &[Subset]) -> Result<Vec<usize>> {
    if f.base() != d.xhat() {
        return Err(Error::IncompatibleBase);
    }
    let n = d.size();
    let mut members: Vec<u32> = c.iter().map(|s| d.open_x_subset(s)).collect::<Result<_>>()?;
    members.retain(|&m| m != 0);
    members.sort_unstable();
    members.dedup();
    if !d.is_g_covering_mask(d.xmask, &members) {
        return Err(Error::NotGCovering(
            c.iter().map(|s| d.xhat.base().format_subset(s)).collect::<Vec<_>>().join(" "),
        ));
    }
    let checks: Vec<u32> = members.iter().map(|&m| d.check_mask(m)).collect();
    let k = members.len();
    // Nonempty simplices by degree.
    let mut simplices: Vec<Vec<(u32, u32)>> = Vec::new();
    for code in 1u32..1 << k {
        let inter = (0..k).filter(|i| code >> i & 1 == 1).fold(u32::MAX, |a, i| a & checks[i]);
        if inter == 0 {
            continue;
        }
        let deg = code.count_ones() as usize - 1;
        if simplices.len() <= deg {
            simplices.resize(deg + 1, Vec::new());
        }
        simplices[deg].push((code, inter));
    }
    let pdims: Vec<usize> = f.dims.clone();
    let amb = |m: u32| (0..n).filter(|&p| m >> p & 1 == 1).map(|p| pdims[p]).sum::<usize>();
    let offsets: Vec<BTreeMap<u32, usize>> = simplices
        .iter()
        .map(|lvl| {
            let mut acc = 0;
            lvl.iter()
                .map(|&(code, inter)| {
                    let o = acc;
                    acc += amb(inter);
                    (code, o)
                })
                .collect()
        })
        .collect();
    let amb_dim = |deg: usize| simplices[deg].iter().map(|&(_, i)| amb(i)).sum::<usize>();
    // Basis of C^deg inside its ambient space.
    let basis = |deg: usize| -> Matrix {
        let blocks: Vec<Matrix> = simplices[deg].iter().map(|&(_, i)| f.sections(&from_mask(n, i))).collect();
        let rows: usize = blocks.iter().map(Matrix::rows).sum();
        let cols: usize = blocks.iter().map(Matrix::cols).sum();
        let mut b = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for blk in &blocks {
            for r in 0..blk.rows() {
                for c in 0..blk.cols() {
                    b.set(r0 + r, c0 + c, blk.get(r, c).clone());
                }
            }
            r0 += blk.rows();
            c0 += blk.cols();
        }
        b
    };
    // Ambient coordinate of (point p, component r) inside an intersection.
    let coord =
        |inter: u32, p: usize, r: usize| (0..p).filter(|&q| inter >> q & 1 == 1).map(|q| pdims[q]).sum::<usize>() + r;
    let bases: Vec<Matrix> = (0..simplices.len()).map(basis).collect();
    // rank of d: C^{deg} → C^{deg+1} restricted to cochains.
    let rank_d = |deg: usize| -> usize {
        if deg + 1 >= simplices.len() {
            return 0;
        }
        let mut m = Matrix::zeros(amb_dim(deg + 1), amb_dim(deg));
        for &(code, inter) in &simplices[deg + 1] {
            let row0 = offsets[deg + 1][&code];
            let idx: Vec<usize> = (0..k).filter(|i| code >> i & 1 == 1).collect();
            for (j, &i) in idx.iter().enumerate() {
                let face = code & !(1 << i);
                let Some(&col0) = offsets[deg].get(&face) else { continue };
                let face_inter = simplices[deg].iter().find(|s| s.0 == face).unwrap().1;
                let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
                for p in (0..n).filter(|&p| inter >> p & 1 == 1) {
                    debug_assert!(is_sub(1 << p, face_inter));
                    for r in 0..pdims[p] {
                        m.add_at(row0 + coord(inter, p, r), col0 + coord(face_inter, p, r), &sign);
                    }
                }
            }
        }
        m.mul(&bases[deg]).rank()
    };
    let ranks: Vec<usize> = (0..simplices.len()).map(rank_d).collect();
    Ok(trim(
        (0..simplices.len())
            .map(|deg| bases[deg].cols() - ranks[deg] - if deg > 0 { ranks[deg - 1] } else { 0 })
            .collect(),
    ))
}

fn parse_rational(c: &mut Cursor<'_>) -> Result<Q> {
    let at = c.error("");
    let w = c.word("number")?;
    w.parse::<Q>().map_err(|_| match at {
        Error::Parse { line, column, .. } => Error::parse(line, column, format!("invalid rational `{w}`")),
        e => e,
    })
}

/// Parses a sheaf file:
///
/// ```text
/// sheaf NAME
/// points a b c d
/// edge c a            # a ∈ U_c
/// stalk a 2           # default 1
/// map c a [1 0; 0 1]  # F_c → F_a, rows = dim F_a
/// ```
pub fn parse_sheaf(text: &str) -> Result<(String, PosetSheaf)> {
    let mut name: Option<String> = None;
    let mut base: Option<Arc<FiniteSet>> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut stalks: BTreeMap<usize, usize> = BTreeMap::new();
    let mut maps: Vec<((usize, usize), Matrix)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let toks = tokenize(no, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor::new(&toks, no, line.chars().count());
        let kw = c.word("keyword")?;
        let need_base =
            |b: &Option<Arc<FiniteSet>>| b.clone().ok_or_else(|| Error::parse(no, 1, "`points` line must come first"));
        let point = |c: &mut Cursor<'_>, b: &Arc<FiniteSet>| -> Result<usize> {
            let col = c.column();
            let w = c.word("point label")?;
            b.index_of(&w).map_err(|_| Error::parse(no, col, format!("unknown label `{w}`")))
        };
        match kw.as_str() {
            "sheaf" if name.is_none() => name = Some(c.word("sheaf name")?),
            "points" if base.is_none() => {
                let mut labels = Vec::new();
                while !c.at_end() {
                    labels.push(c.word("point label")?);
                }
                base = Some(FiniteSet::new(labels).map_err(|e| Error::parse(no, 1, e.to_string()))?);
            }
            "edge" => {
                let b = need_base(&base)?;
                edges.push((point(&mut c, &b)?, point(&mut c, &b)?));
            }
            "stalk" => {
                let b = need_base(&base)?;
                let x = point(&mut c, &b)?;
                let col = c.column();
                let d = c
                    .word("dimension")?
                    .parse()
                    .map_err(|_| Error::parse(no, col, "dimension must be a nonnegative integer"))?;
                stalks.insert(x, d);
            }
            "map" => {
                let b = need_base(&base)?;
                let x = point(&mut c, &b)?;
                let y = point(&mut c, &b)?;
                c.punct('[')?;
                let mut rows: Vec<Vec<Q>> = vec![Vec::new()];
                while !c.eat(']') {
                    if c.eat(';') {
                        rows.push(Vec::new());
                    } else {
                        let v = parse_rational(&mut c)?;
                        rows.last_mut().unwrap().push(v);
                    }
                }
                if rows.len() == 1 && rows[0].is_empty() {
                    rows.clear();
                }
                let cols = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != cols) {
                    return Err(Error::parse(no, 1, "ragged matrix"));
                }
                maps.push(((x, y), Matrix::from_rows(rows, cols)));
            }
            other => return Err(Error::parse(no, 1, format!("unexpected `{other}`"))),
        }
        c.finish()?;
    }
    let name = name.ok_or_else(|| Error::parse(1, 1, "missing `sheaf` header"))?;
    let b = base.ok_or_else(|| Error::parse(1, 1, "missing `points` line"))?;
    let n = b.size();
    let mut rel = Relation::diagonal(&b);
    for &(x, y) in &edges {
        rel.insert(x, y);
    }
    let rel = rel.reflexive_transitive_closure();
    let topo = FiniteTopology::from_preorder(&rel)?;
    let dims: Vec<usize> = (0..n).map(|x| stalks.get(&x).copied().unwrap_or(1)).collect();
    let given: Vec<((usize, usize), Matrix)> = maps
        .into_iter()
        .map(|((x, y), m)| {
            let m = if m.rows() * m.cols() == 0 { Matrix::zeros(dims[y], dims[x]) } else { m };
            ((x, y), m)
        })
        .collect();
    Ok((name, PosetSheaf::new(topo, dims, given)?))
}

/// Canonical text for a sheaf: covering edges and their maps.
pub fn format_sheaf(name: &str, f: &PosetSheaf) -> String {
    let b = f.base().base();
    let n = b.size();
    let mut out = String::new();
    let _ = writeln!(out, "sheaf {name}");
    let _ = writeln!(out, "points {}", b.labels().join(" "));
    let between = |x: usize, y: usize| {
        (0..n).any(|z| z != x && z != y && f.base.min_open(x).contains(z) && f.base.min_open(z).contains(y))
    };
    let mut cover = Vec::new();
    for x in 0..n {
        for y in f.base.min_open(x).ones().filter(|&y| y != x && !between(x, y)) {
            cover.push((x, y));
            let _ = writeln!(out, "edge {} {}", b.label(x), b.label(y));
        }
    }
    for x in 0..n {
        let _ = writeln!(out, "stalk {} {}", b.label(x), f.dims[x]);
    }
    for (x, y) in cover {
        let _ = writeln!(out, "map {} {} {:?}", b.label(x), b.label(y), f.maps[&(x, y)]);
    }
    out
}
