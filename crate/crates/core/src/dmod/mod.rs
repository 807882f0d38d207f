//! Linear differential operators on punctured `ℙ¹`: δ-forms, Newton
//! polygons, Fuchs–Malgrange irregularities, the Deligne index formula, and
//! a truncated linear-algebra De Rham oracle to check it against.
//!
//! Operators are `L = Σ a_i ∂^i` with `∂ = d/dz` and rational coefficients.
//! At a finite point `x` the δ-form uses `δ = (z − x)∂`; at `∞` it uses
//! `δ = w·d/dw` with `w = 1/z`, i.e. `δ = −z∂`.

mod expr;
mod opfile;
mod oracle;
mod poly;

pub use expr::{parse_expr, parse_expr_at};
pub use opfile::parse_point;
pub use opfile::{builtin_corpus, format_operator_file, parse_operator_file, CorpusEntry};
pub use oracle::{derham_oracle, index_report, IndexReport, OracleResult, DEFAULT_DMAX, WINDOW_STEP};
pub use poly::{rat, Point, Poly, RatFunc};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{q, Q};

/// `L = Σ a_i ∂^i`, `a_n ≠ 0`, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    coeffs: Vec<RatFunc>,
}

impl DiffOp {
    /// Trailing zero coefficients are dropped; the order must stay positive.
    pub fn new(mut coeffs: Vec<RatFunc>) -> Result<Self> {
        while coeffs.last().is_some_and(RatFunc::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::ZeroOperator);
        }
        Ok(DiffOp { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    /// `L f = Σ a_i f^{(i)}`.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut d = f.clone();
        let mut acc = RatFunc::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derivative();
            }
            acc = &acc + &(a * &d);
        }
        acc
    }
}

/// Signed Stirling numbers of the first kind `s(i, j)`, `0 ≤ j ≤ i ≤ n`:
/// `x(x−1)…(x−i+1) = Σ_j s(i, j) x^j`.
pub fn stirling_first(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::from(0); n + 1]; n + 1];
    s[0][0] = BigInt::from(1);
    for i in 0..n {
        for j in 0..=i + 1 {
            let left = if j > 0 { s[i][j - 1].clone() } else { BigInt::from(0) };
            s[i + 1][j] = left - BigInt::from(i) * &s[i][j];
        }
    }
    s
}

/// The operator rewritten as `Σ b_j δ^j` at a point, with local valuations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaForm {
    pub point: Point,
    pub coeffs: Vec<RatFunc>,
    /// `v_x(b_j)`, `None` where `b_j = 0`.
    pub valuations: Vec<Option<i64>>,
}

/// `(z−x)^i ∂^i = Σ_j s(i,j) δ^j`; at `∞`, `z^i ∂^i = Σ_j s(i,j) (−δ)^j`.
pub fn to_delta_form(l: &DiffOp, x: &Point) -> DeltaForm {
    let n = l.order();
    let s = stirling_first(n);
    let coeffs: Vec<RatFunc> = (0..=n)
        .map(|j| {
            let mut b = RatFunc::zero();
            for i in j..=n {
                let mut c = Q::from_integer(s[i][j].clone());
                if *x == Point::Infinity && j % 2 == 1 {
                    c = -c;
                }
                if c == q(0) {
                    continue;
                }
                let local = match x {
                    Point::Finite(a) => RatFunc::linear_power(a, -(i as i64)),
                    Point::Infinity => RatFunc::linear_power(&q(0), -(i as i64)),
                };
                b = &b + &(&(&l.coeffs[i] * &local) * &RatFunc::constant(c));
            }
            b
        })
        .collect();
    let valuations = coeffs.iter().map(|b| b.valuation(x)).collect();
    DeltaForm { point: x.clone(), coeffs, valuations }
}

/// Newton polygon of the δ-form: points `(i, −v(b_i))` and their upper hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub point: Point,
    pub points: Vec<(usize, i64)>,
    pub hull: Vec<(usize, i64)>,
    /// Positive slopes (height lost per unit to the right) with horizontal lengths.
    pub slopes: Vec<(Q, usize)>,
}

impl NewtonPolygon {
    /// Total vertical drop along positive-slope edges.
    pub fn rise(&self) -> Q {
        self.slopes.iter().map(|(s, len)| s * q(*len as i64)).sum()
    }
}

fn cross(o: (usize, i64), a: (usize, i64), b: (usize, i64)) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

pub fn newton_polygon(l: &DiffOp, x: &Point) -> NewtonPolygon {
    let d = to_delta_form(l, x);
    let points: Vec<(usize, i64)> = d.valuations.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, -v))).collect();
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &p in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let slopes = hull
        .windows(2)
        .filter(|w| w[1].1 < w[0].1)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            (Q::new(BigInt::from(w[0].1 - w[1].1), BigInt::from(len)), len)
        })
        .collect();
    NewtonPolygon { point: x.clone(), points, hull, slopes }
}

/// `ir_x(L) = max(0, max_i (v_x(b_n) − v_x(b_i)))`.
pub fn irregularity(l: &DiffOp, x: &Point) -> i64 {
    let d = to_delta_form(l, x);
    let vn = d.valuations[l.order()].expect("leading coefficient is nonzero");
    d.valuations.iter().flatten().map(|v| vn - v).max().unwrap_or(0).max(0)
}

/// An operator with its singular set `Z ⊂ ℙ¹(ℚ)`, `∞ ∈ Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionSpec {
    op: DiffOp,
    singular: Vec<Point>,
}

impl ConnectionSpec {
    /// Validates that every pole of the `a_i` and of `a_i / a_n`, and every
    /// zero of `a_n`, lies in `Z`, and that `∞ ∈ Z`.
    pub fn new(op: DiffOp, mut singular: Vec<Point>) -> Result<Self> {
        if singular.is_empty() {
            return Err(Error::EmptySingularSet);
        }
        singular.sort();
        singular.dedup();
        if !singular.contains(&Point::Infinity) {
            return Err(Error::MissingSingularity("inf (regularity at infinity is not certified)".into()));
        }
        let finite = finite_points(&singular);
        let lead = op.coeffs[op.order()].clone();
        let mut checks: Vec<RatFunc> = op.coeffs.clone();
        checks.extend(op.coeffs.iter().map(|a| a.div(&lead).expect("nonzero leading coefficient")));
        checks.push(lead.recip()?);
        for f in &checks {
            f.partial_fractions(&finite)?;
        }
        Ok(ConnectionSpec { op, singular })
    }

    pub fn op(&self) -> &DiffOp {
        &self.op
    }

    pub fn singular(&self) -> &[Point] {
        &self.singular
    }

    pub fn rank(&self) -> usize {
        self.op.order()
    }
}

pub(crate) fn finite_points(z: &[Point]) -> Vec<Q> {
    z.iter()
        .filter_map(|p| match p {
            Point::Finite(x) => Some(x.clone()),
            Point::Infinity => None,
        })
        .collect()
}

/// `χ = n·(2 − #Z) − Σ_{x∈Z} ir_x(L)`.
pub fn deligne_chi(s: &ConnectionSpec) -> i64 {
    let n = s.rank() as i64;
    let ir: i64 = s.singular.iter().map(|x| irregularity(&s.op, x)).sum();
    n * (2 - s.singular.len() as i64) - ir
}

#[cfg(test)]
mod tests;
