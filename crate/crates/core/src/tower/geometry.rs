//! Exact dyadic block geometry for the disk generators.

use super::{BlockId, Generator};

/// Open interval `(lo / 2^k, hi / 2^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Interval {
    pub lo: i64,
    pub hi: i64,
    pub k: u32,
}

impl Interval {
    fn at(self, k: u32) -> (i64, i64) {
        let s = k - self.k;
        (self.lo << s, self.hi << s)
    }

    fn within(&self, other: &Interval) -> bool {
        let k = self.k.max(other.k);
        let (a, b) = self.at(k);
        let (c, d) = other.at(k);
        c <= a && b <= d
    }

    /// Containment modulo 1 (angles in turns).
    fn within_mod1(&self, other: &Interval) -> bool {
        let k = self.k.max(other.k);
        let (a, b) = self.at(k);
        let (c, d) = other.at(k);
        let one = 1i64 << k;
        let s = (c - a).div_euclid(one) + i64::from((c - a).rem_euclid(one) != 0);
        (a + s * one) >= c && (b + s * one) <= d
    }

    pub fn as_f64(&self) -> (f64, f64) {
        let d = (1u64 << self.k) as f64;
        (self.lo as f64 / d, self.hi as f64 / d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BlockBox {
    Cart { x: Interval, y: Interval },
    Polar { r: Interval, t: Interval },
    Other,
}

impl BlockBox {
    pub fn within(&self, other: &BlockBox) -> bool {
        match (self, other) {
            (BlockBox::Cart { x, y }, BlockBox::Cart { x: x2, y: y2 }) => x.within(x2) && y.within(y2),
            (BlockBox::Polar { r, t }, BlockBox::Polar { r: r2, t: t2 }) => r.within(r2) && t.within_mod1(t2),
            _ => false,
        }
    }
}

fn closed_min_dist(lo: i64, hi: i64) -> i64 {
    if lo <= 0 && 0 <= hi {
        0
    } else {
        lo.abs().min(hi.abs())
    }
}

/// The open square of half-side `2^-k` at `(x, y)·2^-k` meets `Δ*`.
pub(crate) fn metric_kept(k: usize, x: i64, y: i64) -> bool {
    let dx = closed_min_dist(x - 1, x + 1) as i128;
    let dy = closed_min_dist(y - 1, y + 1) as i128;
    dx * dx + dy * dy < 1i128 << (2 * k)
}

/// The squares at `(x, y)` and `(a, c)` (each within one step) meet inside `Δ*`.
pub(crate) fn metric_overlap(k: usize, x: i64, y: i64, a: i64, c: i64) -> bool {
    if (x - a).abs() > 1 || (y - c).abs() > 1 {
        return false;
    }
    let dx = closed_min_dist(x.max(a) - 1, x.min(a) + 1) as i128;
    let dy = closed_min_dist(y.max(c) - 1, y.min(c) + 1) as i128;
    dx * dx + dy * dy < 1i128 << (2 * k)
}

/// Coordinate box of a block, clipped to the radial range `(0, 1)` for
/// sectorial blocks. The metric box is not clipped to the disk; containment
/// of boxes is then a sufficient condition for containment of blocks.
pub(crate) fn box_of(g: &Generator, k: usize, b: BlockId) -> BlockBox {
    let k32 = k as u32;
    match (g, b) {
        (Generator::Metric, BlockId::Grid(x, y)) => BlockBox::Cart {
            x: Interval { lo: x - 1, hi: x + 1, k: k32 },
            y: Interval { lo: y - 1, hi: y + 1, k: k32 },
        },
        (Generator::Sectorial, BlockId::Polar(j, i)) => BlockBox::Polar {
            r: Interval { lo: (j - 1).max(0), hi: (j + 1).min(1 << k), k: k32 },
            t: Interval { lo: i - 1, hi: i + 1, k: k32 },
        },
        _ => BlockBox::Other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kept_squares() {
        assert!(metric_kept(1, 0, 0));
        assert!(metric_kept(1, 2, 2)); // closed square [1/2, 3/2]² reaches within 1 of 0
        assert!(!metric_kept(1, 3, 0));
        assert!(!metric_kept(2, 4, 4)); // [3/4, 5/4]²: distance √(9/8) > 1
        assert!(metric_kept(2, 4, 0));
    }

    #[test]
    fn modular_containment() {
        let a = Interval { lo: -1, hi: 1, k: 3 }; // (−1/8, 1/8)
        let b = Interval { lo: 5, hi: 9, k: 3 }; // (5/8, 9/8)
        assert!(a.within_mod1(&b));
        let c = Interval { lo: 0, hi: 3, k: 3 };
        assert!(!a.within_mod1(&c));
        let whole = Interval { lo: -1, hi: 1, k: 1 }; // (−1/2, 1/2)
        assert!(a.within_mod1(&whole));
        assert!(!Interval { lo: 3, hi: 5, k: 3 }.within_mod1(&whole));
    }
}
