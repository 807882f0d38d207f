//! Covering members as geometric regions, tested block by block.

use std::f64::consts::TAU;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::geometry::{box_of, BlockBox};
use super::{BlockId, CoveringTower, Generator};
use crate::error::{Error, Result};
use crate::linalg::Q;

/// Safety margin for floating-point angle comparisons; a containment that
/// holds only within this margin is reported as failing.
const ANGLE_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Whole,
    /// Open angular sector `from < θ < to` (turns) of the punctured disk.
    Sector {
        from: Q,
        to: Q,
    },
    /// `0 < |z| < radius`.
    Disk {
        radius: Q,
    },
    /// `inner < |z| < outer`.
    Annulus {
        inner: Q,
        outer: Q,
    },
    /// Residue disk `value + p^level ℤ_p`.
    Residue {
        value: u64,
        level: usize,
    },
    /// Union of listed blocks of one level.
    Blocks {
        level: usize,
        ids: Vec<BlockId>,
    },
    /// Union of the blocks `E_min(x)` of a finite model, as a set of points.
    Points(Vec<usize>),
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Whole => write!(f, "whole"),
            Region::Sector { from, to } => write!(f, "sector {from} {to}"),
            Region::Disk { radius } => write!(f, "disk {radius}"),
            Region::Annulus { inner, outer } => write!(f, "annulus {inner} {outer}"),
            Region::Residue { value, level } => write!(f, "residue {value} {level}"),
            Region::Blocks { level, ids } => {
                write!(f, "blocks {level}")?;
                for b in ids {
                    write!(f, " {b}")?;
                }
                Ok(())
            }
            Region::Points(p) => {
                write!(f, "points")?;
                for x in p {
                    write!(f, " {x}")?;
                }
                Ok(())
            }
        }
    }
}

/// The four quarter sectors, each widened by `1/8` turn on both sides.
pub fn quarter_sectors() -> Vec<Region> {
    (0..4).map(|k| Region::Sector { from: super::ratio(2 * k - 1, 8), to: super::ratio(2 * k + 3, 8) }).collect()
}

fn dyadic(n: i64, k: u32) -> Q {
    Q::new(BigInt::from(n), BigInt::from(1u64 << k))
}

/// Closed-box squared distances `(min, max)` from the origin, exact.
fn box_dist2(lo_x: &Q, hi_x: &Q, lo_y: &Q, hi_y: &Q) -> (Q, Q) {
    let near = |lo: &Q, hi: &Q| {
        if *lo <= Q::zero() && *hi >= Q::zero() {
            Q::zero()
        } else if lo.abs() < hi.abs() {
            lo.abs()
        } else {
            hi.abs()
        }
    };
    let far = |lo: &Q, hi: &Q| if lo.abs() > hi.abs() { lo.abs() } else { hi.abs() };
    let (nx, ny) = (near(lo_x, hi_x), near(lo_y, hi_y));
    let (fx, fy) = (far(lo_x, hi_x), far(lo_y, hi_y));
    (&nx * &nx + &ny * &ny, &fx * &fx + &fy * &fy)
}

/// Angular range (turns, unwrapped) of a closed box avoiding the origin.
pub(crate) fn box_angles(x: (f64, f64), y: (f64, f64)) -> Option<(f64, f64)> {
    if x.0 <= 0.0 && 0.0 <= x.1 && y.0 <= 0.0 && 0.0 <= y.1 {
        return None;
    }
    let corners = [(x.0, y.0), (x.0, y.1), (x.1, y.0), (x.1, y.1)];
    let c = ((y.0 + y.1) / 2.0).atan2((x.0 + x.1) / 2.0) / TAU;
    let rel: Vec<f64> = corners
        .iter()
        .map(|&(a, b)| {
            let t = b.atan2(a) / TAU;
            let mut d = t - c;
            d -= d.round();
            c + d
        })
        .collect();
    let lo = rel.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = rel.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Some((lo, hi))
}

fn sector_contains(from: &Q, to: &Q, lo: f64, hi: f64) -> bool {
    let f = from.to_f64().unwrap_or(f64::NAN);
    let t = to.to_f64().unwrap_or(f64::NAN);
    let shift = (f - lo).ceil();
    let (a, b) = (lo + shift, hi + shift);
    let ok = |a: f64, b: f64| a >= f + ANGLE_MARGIN && b <= t - ANGLE_MARGIN;
    ok(a, b) || ok(a - 1.0, b - 1.0) || ok(a + 1.0, b + 1.0)
}

impl CoveringTower {
    /// Whether the level-`k` block `b` lies inside `region`.
    pub fn block_in_region(&self, k: usize, b: BlockId, region: &Region) -> Result<bool> {
        let g = self.generator();
        let mismatch = || Error::NotBlockUnion(format!("{region} on a {} tower", g.name()));
        if let Region::Whole = region {
            return Ok(true);
        }
        if let Region::Blocks { level, ids } = region {
            if let Some(bad) = ids.iter().find(|&&id| !self.has_block(*level, id)) {
                return Err(Error::NotBlockUnion(format!("{bad} is not a block of level {level}")));
            }
            return Ok(ids.iter().any(|&c| self.block_within(k, b, *level, c)));
        }
        match (g, box_of(g, k, b), region) {
            (Generator::Metric, BlockBox::Cart { x, y }, _) => {
                let (lx, hx) = (dyadic(x.lo, x.k), dyadic(x.hi, x.k));
                let (ly, hy) = (dyadic(y.lo, y.k), dyadic(y.hi, y.k));
                let (near2, far2) = box_dist2(&lx, &hx, &ly, &hy);
                match region {
                    Region::Disk { radius } => Ok(far2 <= radius * radius),
                    Region::Annulus { inner, outer } => Ok(near2 >= inner * inner && far2 <= outer * outer),
                    Region::Sector { from, to } => Ok(match box_angles(x.as_f64(), y.as_f64()) {
                        None => false,
                        Some((lo, hi)) => sector_contains(from, to, lo, hi),
                    }),
                    _ => Err(mismatch()),
                }
            }
            (Generator::Sectorial, BlockBox::Polar { r, t }, _) => {
                let (lr, hr) = (dyadic(r.lo, r.k), dyadic(r.hi, r.k));
                match region {
                    Region::Disk { radius } => Ok(hr <= *radius),
                    Region::Annulus { inner, outer } => Ok(lr >= *inner && hr <= *outer),
                    Region::Sector { from, to } => {
                        let (lt, ht) = (dyadic(t.lo, t.k), dyadic(t.hi, t.k));
                        let one = Q::from_integer(1.into());
                        let shift = (from - &lt).ceil();
                        let a = &lt + &shift;
                        let bb = &ht + &shift;
                        Ok(a >= *from && bb <= *to || (&a - &one >= *from && &bb - &one <= *to))
                    }
                    _ => Err(mismatch()),
                }
            }
            (Generator::Padic(p), _, Region::Residue { value, level }) => match b {
                BlockId::Residue(a) => {
                    let m = p.pow(*level as u32);
                    Ok(k >= *level && a % m == *value % m)
                }
                _ => Err(mismatch()),
            },
            (Generator::Formal(p), _, Region::Residue { value, .. }) => match b {
                BlockId::Residue(a) => Ok(a == value % p),
                _ => Err(mismatch()),
            },
            (Generator::Finite(u), _, Region::Points(pts)) => match b {
                BlockId::Point(x) => {
                    let e = u.e_min()?;
                    Ok(e.row(x).ones().all(|y| pts.contains(&y)))
                }
                _ => Err(mismatch()),
            },
            _ => Err(mismatch()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{make_tower, ratio};

    #[test]
    fn angles_of_boxes() {
        let (lo, hi) = box_angles((0.25, 0.5), (0.0, 0.25)).unwrap();
        assert!(lo.abs() < 1e-12 && (hi - 0.125).abs() < 1e-12);
        assert!(box_angles((0.0, 0.5), (0.0, 0.5)).is_none());
        let (lo, hi) = box_angles((-0.5, -0.25), (-0.1, 0.1)).unwrap();
        assert!(hi - lo < 0.2 && (lo + hi) / 2.0 > 0.4);
        assert!(box_angles((-0.5, 0.5), (-0.5, 0.5)).is_none());
    }

    #[test]
    fn sector_membership() {
        let met = make_tower(Generator::Metric, 3).unwrap();
        let sec = make_tower(Generator::Sectorial, 3).unwrap();
        let s0 = &quarter_sectors()[0];
        assert!(met.block_in_region(3, BlockId::Grid(2, 2), s0).unwrap());
        assert!(!met.block_in_region(3, BlockId::Grid(0, 0), s0).unwrap());
        assert!(sec.block_in_region(3, BlockId::Polar(0, 1), s0).unwrap());
        assert!(!sec.block_in_region(3, BlockId::Polar(0, 4), s0).unwrap());
        // wrap-around: sector 3 is (5/8, 9/8) and contains the block at angle 0
        assert!(sec.block_in_region(3, BlockId::Polar(0, 0), &quarter_sectors()[3]).unwrap());
        let disk = Region::Disk { radius: ratio(1, 2) };
        assert!(met.block_in_region(3, BlockId::Grid(1, 1), &disk).unwrap());
        assert!(!met.block_in_region(3, BlockId::Grid(3, 3), &disk).unwrap());
        assert!(sec.block_in_region(3, BlockId::Polar(3, 5), &disk).unwrap());
        let padic = make_tower(Generator::Padic(3), 2).unwrap();
        assert!(matches!(padic.block_in_region(1, BlockId::Residue(0), s0), Err(Error::NotBlockUnion(_))));
        assert!(padic.block_in_region(2, BlockId::Residue(4), &Region::Residue { value: 1, level: 1 }).unwrap());
    }
}
