//! The uniform G-topology on finite models.
//!
//! A [`DensePair`] is a finite space `X̂` with a dense subset `X`; `X̂` plays
//! the completion. For an open `U ⊆ X` the largest open of `X̂` with trace `U`
//! is `Ǔ = {p : U_p ∩ X ⊆ U}`, and `Û` is the closure of `U` in `X̂`.
//!
//! A family `(U_i)` of opens of `X` is a uniform (G-)covering of `U` when the
//! relative extensions `{p ∈ Û : U_p ∩ U ⊆ U_i}` cover `Û`, i.e. every
//! `p ∈ Û` has `U_p ∩ U` inside some member. This is the trace condition for
//! `U` viewed as a uniform subspace, whose completion is `Û`.

mod sheaf;

pub use sheaf::{cech_cohomology, finest_g_covering, format_sheaf, parse_sheaf, sheaf_cohomology, PosetSheaf};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::relation::{subset, Subset};
use crate::topology::{FiniteTopology, MAX_ENUMERATED_POINTS};

/// Default bound on the number of members of enumerated covering families.
pub const DEFAULT_FAMILY_CAP: usize = 3;

pub(crate) fn to_mask(s: &Subset) -> u32 {
    s.ones().fold(0, |m, i| m | 1 << i)
}

pub(crate) fn from_mask(n: usize, m: u32) -> Subset {
    subset(n, (0..n).filter(|i| m >> i & 1 == 1))
}

fn is_sub(a: u32, b: u32) -> bool {
    a & !b == 0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePair {
    xhat: FiniteTopology,
    x: Subset,
    up: Vec<u32>,
    xmask: u32,
}

impl DensePair {
    pub fn new(xhat: FiniteTopology, x: Subset) -> Result<Self> {
        let n = xhat.size();
        if n > MAX_ENUMERATED_POINTS {
            return Err(Error::TooLarge { size: n, limit: MAX_ENUMERATED_POINTS });
        }
        let mut x = x;
        x.grow(n);
        if !xhat.is_dense(&x) {
            return Err(Error::NotDense);
        }
        let up = (0..n).map(|p| to_mask(xhat.min_open(p))).collect();
        let xmask = to_mask(&x);
        Ok(DensePair { xhat, x, up, xmask })
    }

    /// The pair `(X̂, X̂)`.
    pub fn full(xhat: FiniteTopology) -> Self {
        let n = xhat.size();
        Self::new(xhat, crate::relation::full_subset(n)).expect("whole space is dense")
    }

    pub fn xhat(&self) -> &FiniteTopology {
        &self.xhat
    }

    pub fn x(&self) -> &Subset {
        &self.x
    }

    pub fn size(&self) -> usize {
        self.xhat.size()
    }

    /// `X` with the subspace topology, and the inclusion.
    pub fn x_topology(&self) -> (FiniteTopology, Vec<usize>) {
        self.xhat.subspace(&self.x)
    }

    fn n(&self) -> usize {
        self.xhat.size()
    }

    fn is_open_hat(&self, m: u32) -> bool {
        (0..self.n()).filter(|&p| m >> p & 1 == 1).all(|p| is_sub(self.up[p], m))
    }

    fn is_open_x(&self, m: u32) -> bool {
        is_sub(m, self.xmask) && (0..self.n()).filter(|&p| m >> p & 1 == 1).all(|p| is_sub(self.up[p] & self.xmask, m))
    }

    fn opens_hat(&self) -> Vec<u32> {
        (0..1u32 << self.n()).filter(|&m| self.is_open_hat(m)).collect()
    }

    /// Opens of `X`, as masks over `X̂`'s points.
    fn opens_x(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.opens_hat().into_iter().map(|o| o & self.xmask).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn check_mask(&self, u: u32) -> u32 {
        (0..self.n()).filter(|&p| is_sub(self.up[p] & self.xmask, u)).fold(0, |m, p| m | 1 << p)
    }

    fn closure_mask(&self, u: u32) -> u32 {
        (0..self.n()).filter(|&p| self.up[p] & u != 0).fold(0, |m, p| m | 1 << p)
    }

    fn interior_mask(&self, a: u32) -> u32 {
        (0..self.n()).filter(|&p| is_sub(self.up[p], a)).fold(0, |m, p| m | 1 << p)
    }

    /// Relative extension of `ui` inside `Û` for the subspace `u`.
    fn rel_check_mask(&self, u: u32, ui: u32) -> u32 {
        let hat = self.closure_mask(u);
        (0..self.n()).filter(|&p| hat >> p & 1 == 1 && is_sub(self.up[p] & u, ui)).fold(0, |m, p| m | 1 << p)
    }

    fn is_g_covering_mask(&self, u: u32, family: &[u32]) -> bool {
        let hat = self.closure_mask(u);
        family.iter().all(|&f| is_sub(f, u))
            && (0..self.n()).filter(|&p| hat >> p & 1 == 1).all(|p| family.iter().any(|&f| is_sub(self.up[p] & u, f)))
    }

    fn open_x_subset(&self, u: &Subset) -> Result<u32> {
        if let Some(i) = u.ones().find(|&i| i >= self.n()) {
            return Err(Error::IndexOutOfRange { index: i, size: self.n() });
        }
        let m = to_mask(u);
        if !self.is_open_x(m) {
            return Err(Error::NotOpen);
        }
        Ok(m)
    }

    /// Largest open of `X̂` whose trace on `X` is `u`.
    pub fn u_check(&self, u: &Subset) -> Result<Subset> {
        let m = self.open_x_subset(u)?;
        Ok(from_mask(self.n(), self.check_mask(m)))
    }

    /// `Û`: the closure of `u` in `X̂`.
    pub fn u_hat(&self, u: &Subset) -> Result<Subset> {
        let m = self.open_x_subset(u)?;
        Ok(from_mask(self.n(), self.closure_mask(m)))
    }

    /// Whether `family` (opens of `X`) is a uniform covering of the open `u`.
    pub fn is_g_covering(&self, u: &Subset, family: &[Subset]) -> Result<bool> {
        let m = self.open_x_subset(u)?;
        let fam: Vec<u32> = family.iter().map(|f| self.open_x_subset(f)).collect::<Result<_>>()?;
        Ok(self.is_g_covering_mask(m, &fam))
    }
}

/// Families of nonempty members of `pool` with union `u`, at most `cap` members.
fn families(pool: &[u32], u: u32, cap: usize) -> Vec<Vec<u32>> {
    let pool: Vec<u32> = pool.iter().copied().filter(|&o| o != 0 && is_sub(o, u)).collect();
    let mut out = Vec::new();
    if u == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur = Vec::new();
    fn rec(pool: &[u32], start: usize, u: u32, cap: usize, acc: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if acc == u && !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == cap {
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            rec(pool, i + 1, u, cap, acc | pool[i], cur, out);
            cur.pop();
        }
    }
    rec(&pool, 0, u, cap, 0, &mut cur, &mut out);
    out
}

fn normalize(mut f: Vec<u32>) -> Vec<u32> {
    f.retain(|&m| m != 0);
    f.sort_unstable();
    f.dedup();
    f
}

fn refines(fine: &[u32], coarse: &[u32]) -> bool {
    fine.iter().all(|&a| coarse.iter().any(|&b| is_sub(a, b)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemResult {
    pub holds: bool,
    /// Human-readable counterexample when the item fails.
    pub witness: Option<String>,
    /// Items that need regularity are reported but not required.
    pub informational: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L7Report {
    pub items: Vec<ItemResult>,
}

impl L7Report {
    /// Items 1–5.
    pub fn required_hold(&self) -> bool {
        self.items.iter().filter(|i| !i.informational).all(|i| i.holds)
    }

    pub fn item(&self, k: usize) -> &ItemResult {
        &self.items[k - 1]
    }
}

fn item(witness: Option<String>, informational: bool) -> ItemResult {
    ItemResult { holds: witness.is_none(), witness, informational }
}

/// Evaluates the seven items of the Ǔ-calculus exhaustively. Item 5 is
/// checked over families of at most `cap` opens.
pub fn check_l7(d: &DensePair, cap: usize) -> L7Report {
    let n = d.n();
    let fmt = |m: u32| d.xhat.base().format_subset(&from_mask(n, m));
    let hat_opens = d.opens_hat();
    let x_opens = d.opens_x();
    let check = |u: u32| d.check_mask(u);

    // 1. The union of all opens with trace U is open, has trace U, and equals Ǔ.
    let w1 = x_opens.iter().find_map(|&u| {
        let brute = hat_opens.iter().filter(|&&v| v & d.xmask == u).fold(0, |a, &v| a | v);
        let c = check(u);
        (brute != c || c & d.xmask != u || !d.is_open_hat(c))
            .then(|| format!("U={} brute={} formula={}", fmt(u), fmt(brute), fmt(c)))
    });
    // 2. Ǔ ⊆ Û, with equality to the interior of Û when Û ∩ X = U.
    let w2 = x_opens.iter().find_map(|&u| {
        let c = check(u);
        let hat = d.closure_mask(u);
        let bad = !is_sub(c, hat) || (hat & d.xmask == u && c != d.interior_mask(hat));
        bad.then(|| format!("U={} check={} hat={}", fmt(u), fmt(c), fmt(hat)))
    });
    // 3. Ǔ ∩ Ǔ' = (U ∩ U')ˇ.
    let w3 = x_opens.iter().find_map(|&u| {
        x_opens
            .iter()
            .find_map(|&v| (check(u) & check(v) != check(u & v)).then(|| format!("U={} U'={}", fmt(u), fmt(v))))
    });
    // 4. ∪ Ǔ_i ⊆ (∪ U_i)ˇ, for pairs and for the family of all opens.
    let w4 = x_opens
        .iter()
        .find_map(|&u| {
            x_opens.iter().find_map(|&v| {
                (!is_sub(check(u) | check(v), check(u | v))).then(|| format!("U={} U'={}", fmt(u), fmt(v)))
            })
        })
        .or_else(|| {
            let all = x_opens.iter().fold(0, |a, &u| a | u);
            let lhs = x_opens.iter().fold(0, |a, &u| a | check(u));
            (!is_sub(lhs, check(all))).then(|| "family of all opens".to_string())
        });
    // 5. (U_i) is the trace of an open covering of Û iff the relative Ǔ_i cover Û.
    let w5 = x_opens.iter().find_map(|&u| {
        let hat = d.closure_mask(u);
        let sub_opens: Vec<u32> = {
            let mut v: Vec<u32> = hat_opens.iter().map(|&o| o & hat).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        families(&x_opens, u, cap).into_iter().find_map(|fam| {
            let brute = fam
                .iter()
                .map(|&ui| sub_opens.iter().filter(|&&w| w & u == ui).fold(0, |a, &w| a | w))
                .fold(0, |a, m| a | m)
                == hat;
            let formula = fam.iter().fold(0, |a, &ui| a | d.rel_check_mask(u, ui)) == hat;
            (brute != formula || formula != d.is_g_covering_mask(u, &fam))
                .then(|| format!("U={} family={}", fmt(u), fam.iter().map(|&m| fmt(m)).collect::<Vec<_>>().join(" ")))
        })
    });
    // 6. Every U_p is of the form Ǔ.
    let w6 = (0..n).find_map(|p| {
        (check(d.up[p] & d.xmask) != d.up[p])
            .then(|| format!("point {} has no basis of Ǔ-sets", d.xhat.base().label(p)))
    });
    // 7. Every open V is covered by Ǔ_i ⊆ V with (U_i) a uniform covering of V ∩ X.
    let w7 = hat_opens.iter().find_map(|&v| {
        let trace = v & d.xmask;
        let cands: Vec<u32> = x_opens.iter().copied().filter(|&u| is_sub(u, trace) && is_sub(check(u), v)).collect();
        let covered = cands.iter().fold(0, |a, &u| a | check(u)) == v;
        let uniform = d.is_g_covering_mask(trace, &normalize(cands.clone()));
        (!(covered && uniform)).then(|| format!("V={} is not covered by Ǔ-sets inside it", fmt(v)))
    });
    L7Report {
        items: vec![
            item(w1, false),
            item(w2, false),
            item(w3, false),
            item(w4, false),
            item(w5, false),
            item(w6, true),
            item(w7, true),
        ],
    }
}

/// Distinguished coverings of each open of `X`, with members capped in number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCoveringSystem {
    n: usize,
    points: u32,
    umin: Vec<u32>,
    opens: Vec<u32>,
    cap: usize,
    covers: BTreeMap<u32, Vec<Vec<u32>>>,
}

impl GCoveringSystem {
    fn skeleton(d: &DensePair, cap: usize) -> Self {
        GCoveringSystem {
            n: d.n(),
            points: d.xmask,
            umin: d.up.iter().map(|&u| u & d.xmask).collect(),
            opens: d.opens_x(),
            cap,
            covers: BTreeMap::new(),
        }
    }

    /// Build from explicit coverings per open; families are normalized.
    pub fn from_coverings(d: &DensePair, cap: usize, covers: Vec<(Subset, Vec<Vec<Subset>>)>) -> Result<Self> {
        let mut g = Self::skeleton(d, cap);
        for (u, fams) in covers {
            let um = d.open_x_subset(&u)?;
            let mut list: Vec<Vec<u32>> = Vec::new();
            for f in fams {
                let f: Vec<u32> = f.iter().map(|s| d.open_x_subset(s)).collect::<Result<_>>()?;
                list.push(normalize(f));
            }
            list.sort();
            list.dedup();
            g.covers.insert(um, list);
        }
        Ok(g)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Opens of `X` as subsets of `X̂`'s points.
    pub fn opens(&self) -> Vec<Subset> {
        self.opens.iter().map(|&m| from_mask(self.n, m)).collect()
    }

    pub fn coverings_of(&self, u: &Subset) -> Vec<Vec<Subset>> {
        self.covers
            .get(&to_mask(u))
            .map(|l| l.iter().map(|f| f.iter().map(|&m| from_mask(self.n, m)).collect()).collect())
            .unwrap_or_default()
    }

    fn is_covering(&self, u: u32, f: &[u32]) -> bool {
        self.covers.get(&u).is_some_and(|l| l.binary_search(&f.to_vec()).is_ok())
    }

    fn is_open(&self, m: u32) -> bool {
        is_sub(m, self.points) && (0..self.n).filter(|&p| m >> p & 1 == 1).all(|p| is_sub(self.umin[p], m))
    }
}

/// The uniform G-topology: coverings of at most `cap` members.
pub fn uniform_g_topology(d: &DensePair, cap: usize) -> GCoveringSystem {
    let mut g = GCoveringSystem::skeleton(d, cap);
    for &u in &g.opens {
        let list: Vec<Vec<u32>> =
            families(&g.opens, u, cap).into_iter().filter(|f| d.is_g_covering_mask(u, f)).collect();
        g.covers.insert(u, list);
    }
    g
}

/// Every open covering of every open of `X` (the topological site).
pub fn all_open_coverings(d: &DensePair, cap: usize) -> GCoveringSystem {
    let mut g = GCoveringSystem::skeleton(d, cap);
    for &u in &g.opens {
        g.covers.insert(u, families(&g.opens, u, cap));
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrothendieckReport {
    /// identity, restriction, composition, openness detection, refinement saturation.
    pub bullets: Vec<ItemResult>,
}

impl GrothendieckReport {
    pub fn holds(&self) -> bool {
        self.bullets.iter().all(|b| b.holds)
    }
}

pub const BULLET_NAMES: [&str; 5] = ["identity", "restriction", "composition", "openness", "refinement"];

/// Checks the five bullets over the listed opens and coverings. Composites
/// are formed by substituting one member at a time and checked when they fit
/// under the cap.
pub fn check_grothendieck(g: &GCoveringSystem) -> GrothendieckReport {
    let n = g.n;
    let fmt_set = |m: u32| {
        let s: Vec<String> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect();
        format!("{{{}}}", s.join(","))
    };
    let fmt_fam = |f: &[u32]| f.iter().map(|&m| fmt_set(m)).collect::<Vec<_>>().join(" ");
    let empty = Vec::new();
    let covs = |u: u32| g.covers.get(&u).unwrap_or(&empty);

    let b1 = g
        .opens
        .iter()
        .find(|&&u| !g.is_covering(u, &normalize(vec![u])))
        .map(|&u| format!("({}) is not a covering of itself", fmt_set(u)));

    let b2 = g.opens.iter().find_map(|&u| {
        covs(u).iter().find_map(|f| {
            g.opens.iter().filter(|&&v| is_sub(v, u)).find_map(|&v| {
                let r = normalize(f.iter().map(|&m| m & v).collect());
                (!g.is_covering(v, &r)).then(|| format!("{} restricted to {}", fmt_fam(f), fmt_set(v)))
            })
        })
    });

    let b3 = g.opens.iter().find_map(|&u| {
        covs(u).iter().find_map(|f| {
            f.iter().enumerate().find_map(|(i, &ui)| {
                covs(ui).iter().find_map(|h| {
                    let mut c: Vec<u32> = f.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &m)| m).collect();
                    c.extend_from_slice(h);
                    let c = normalize(c);
                    (c.len() <= g.cap && !g.is_covering(u, &c))
                        .then(|| format!("composite {} of {} is missing", fmt_fam(&c), fmt_set(u)))
                })
            })
        })
    });

    let b4 = g.opens.iter().find_map(|&u| {
        let bits: Vec<usize> = (0..n).filter(|i| u >> i & 1 == 1).collect();
        covs(u).iter().find_map(|f| {
            (0..1u32 << bits.len()).find_map(|code| {
                let v = bits.iter().enumerate().filter(|&(k, _)| code >> k & 1 == 1).fold(0, |a, (_, &b)| a | 1 << b);
                (f.iter().all(|&m| g.is_open(v & m)) && !g.is_open(v))
                    .then(|| format!("{} is locally open on {} but not open", fmt_set(v), fmt_fam(f)))
            })
        })
    });

    let b5 = g.opens.iter().find_map(|&u| {
        let list = covs(u);
        families(&g.opens, u, g.cap).into_iter().find_map(|f| {
            (!g.is_covering(u, &f) && list.iter().any(|h| refines(h, &f)))
                .then(|| format!("{} has a distinguished refinement but is not distinguished", fmt_fam(&f)))
        })
    });

    GrothendieckReport { bullets: [b1, b2, b3, b4, b5].into_iter().map(|w| item(w, false)).collect() }
}

#[cfg(test)]
mod tests;
