//! Index of `L` acting on `O(U)`, `U = ℙ¹ ∖ Z`, by exact linear algebra on
//! truncated partial-fraction windows.
//!
//! `O(U)` has the basis `z^m` (`m ≥ 0`) and `(z − x)^{-k}` (`k ≥ 1`, `x ∈ Z`
//! finite). The window of size `d` keeps `m ≤ d` and `k ≤ d`; the codomain
//! window keeps `m ≤ d + s_∞` and `k ≤ d + s_x`, where the shifts
//! `s_∞ = max_i(−v_∞(a_i) − i)` and `s_x = max_i(−v_x(a_i) + i)` bound how far
//! `L` moves degrees and pole orders, so the truncated map is exactly the
//! restriction of `L`.

use rayon::prelude::*;

use super::poly::{Point, Poly};
use super::{deligne_chi, finite_points, irregularity, ConnectionSpec};
use crate::error::{Error, Result};
use crate::linalg::{q, Matrix, Q};

/// Windows grow by this step; three consecutive agreeing windows count as stable.
pub const WINDOW_STEP: usize = 5;
/// Largest window tried by `index_report`.
pub const DEFAULT_DMAX: usize = 80;
/// First window tried by `index_report`.
const FIRST_WINDOW: usize = 5;

/// A coefficient `a_i = num / Π (z − x_j)^{orders_j}`.
struct Factored {
    num: Poly,
    orders: Vec<usize>,
}

fn factor(a: &super::RatFunc, pts: &[Q]) -> Result<Factored> {
    let mut rest = a.den().clone();
    let mut orders = Vec::new();
    for x in pts {
        let e = a.den().shift(x).low_order().unwrap_or(0);
        orders.push(e);
        rest = rest.div_rem(&Poly::linear_power(x, e))?.0;
    }
    if rest.degree() != Some(0) {
        return Err(Error::MissingSingularity(format!("pole at a root of {}", rest.monic())));
    }
    Ok(Factored { num: a.num().scale(&rest.leading().recip()), orders })
}

/// First `t` Taylor coefficients of `p` at `x`.
fn taylor(p: &Poly, x: &Q, t: usize) -> Vec<Q> {
    let mut cur: Vec<Q> = p.coeffs().to_vec();
    let mut out = Vec::with_capacity(t);
    for _ in 0..t {
        if cur.is_empty() {
            out.push(q(0));
            continue;
        }
        // synthetic division by (z − x): quotient and remainder p(x)
        let mut quot = vec![q(0); cur.len() - 1];
        let mut acc = q(0);
        for k in (0..cur.len()).rev() {
            acc = acc * x + &cur[k];
            if k > 0 {
                quot[k - 1] = acc.clone();
            }
        }
        out.push(acc);
        cur = quot;
    }
    out
}

/// Windowed coordinates: polynomial part `z^0..z^{poly_len-1}`, then for each
/// finite point the pole orders `1..=pole_len[j]`.
struct Window {
    pts: Vec<Q>,
    poly_len: usize,
    pole_len: Vec<usize>,
}

impl Window {
    fn dim(&self) -> usize {
        self.poly_len + self.pole_len.iter().sum::<usize>()
    }

    fn pole_index(&self, j: usize, k: usize) -> usize {
        self.poly_len + self.pole_len[..j].iter().sum::<usize>() + k - 1
    }

    /// Adds the partial fractions of `num / Π (z − x_j)^{orders_j}` to `col`.
    fn accumulate(&self, num: &Poly, orders: &[usize], col: &mut [Q]) -> Result<()> {
        if num.is_zero() {
            return Ok(());
        }
        let factor_of = |skip: Option<usize>| {
            self.pts
                .iter()
                .zip(orders)
                .enumerate()
                .filter(|(j, _)| Some(*j) != skip)
                .fold(Poly::one(), |acc, (_, (x, &e))| &acc * &Poly::linear_power(x, e))
        };
        let den = factor_of(None);
        let poly = num.div_rem(&den)?.0;
        for (m, c) in poly.coeffs().iter().enumerate() {
            if c == &q(0) {
                continue;
            }
            if m >= self.poly_len {
                return Err(Error::TooLarge { size: m, limit: self.poly_len });
            }
            col[m] += c;
        }
        for (j, &e) in orders.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let x = &self.pts[j];
            let other = factor_of(Some(j));
            let series = Poly::new(taylor(num, x, e)).series_div(&Poly::new(taylor(&other, x, e)), e)?;
            for k in 1..=e {
                let c = &series[e - k];
                if c == &q(0) {
                    continue;
                }
                if k > self.pole_len[j] {
                    return Err(Error::TooLarge { size: k, limit: self.pole_len[j] });
                }
                col[self.pole_index(j, k)] += c;
            }
        }
        Ok(())
    }
}

fn falling(m: usize, i: usize) -> Q {
    (0..i).fold(q(1), |acc, t| acc * q(m as i64 - t as i64))
}

fn rising(k: usize, i: usize) -> Q {
    (0..i).fold(q(1), |acc, t| acc * q((k + t) as i64))
}

/// `(h0, h1) = (dim ker, dim coker)` of `L` on the window of size `d`.
fn window_index(s: &ConnectionSpec, d: usize) -> Result<(usize, usize)> {
    let pts = finite_points(s.singular());
    let op = s.op();
    let coeffs: Vec<Factored> = op.coeffs().iter().map(|a| factor(a, &pts)).collect::<Result<_>>()?;
    let shift = |x: &Point, sign: i64| {
        op.coeffs()
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.valuation(x).map(|v| -v + sign * i as i64))
            .max()
            .unwrap_or(0)
    };
    let clamp = |v: i64| v.max(0) as usize;
    let w = Window {
        poly_len: clamp(d as i64 + shift(&Point::Infinity, -1) + 1),
        pole_len: pts.iter().map(|x| clamp(d as i64 + shift(&Point::Finite(x.clone()), 1))).collect(),
        pts: pts.clone(),
    };
    let mut columns: Vec<(Option<usize>, usize)> = (0..=d).map(|m| (None, m)).collect();
    for j in 0..pts.len() {
        columns.extend((1..=d).map(|k| (Some(j), k)));
    }
    let cols: Vec<Vec<Q>> = columns
        .par_iter()
        .map(|&(pole, e)| {
            let mut col = vec![q(0); w.dim()];
            for (i, a) in coeffs.iter().enumerate() {
                match pole {
                    None if e >= i => {
                        let num = &a.num * &Poly::monomial(falling(e, i), e - i);
                        w.accumulate(&num, &a.orders, &mut col)?;
                    }
                    None => {}
                    Some(j) => {
                        let sign = if i % 2 == 0 { q(1) } else { q(-1) };
                        let num = a.num.scale(&(sign * rising(e, i)));
                        let mut orders = a.orders.clone();
                        orders[j] += e + i;
                        w.accumulate(&num, &orders, &mut col)?;
                    }
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let mut m = Matrix::zeros(w.dim(), cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            if v != &q(0) {
                m.set(r, c, v.clone());
            }
        }
    }
    let rank = m.rank();
    Ok((cols.len() - rank, w.dim() - rank))
}

/// Oracle values on three consecutive windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// `(d, h0, h1)` per window.
    pub windows: Vec<(usize, usize, usize)>,
    pub h0: usize,
    pub h1: usize,
    pub stabilized: bool,
}

impl OracleResult {
    pub fn index(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64
    }
}

/// Evaluates the windows `d`, `d + 5`, `d + 10`; reports the largest.
pub fn derham_oracle(s: &ConnectionSpec, d: usize) -> Result<OracleResult> {
    if d == 0 {
        return Err(Error::ZeroDepth);
    }
    let sizes = [d, d + WINDOW_STEP, d + 2 * WINDOW_STEP];
    let vals: Vec<(usize, usize)> = sizes.par_iter().map(|&w| window_index(s, w)).collect::<Result<_>>()?;
    let windows: Vec<(usize, usize, usize)> = sizes.iter().zip(&vals).map(|(&w, &(a, b))| (w, a, b)).collect();
    let (h0, h1) = vals[2];
    Ok(OracleResult { windows, h0, h1, stabilized: vals.iter().all(|v| *v == vals[0]) })
}

/// Formula versus oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub irregularities: Vec<(Point, i64)>,
    pub chi_formula: i64,
    pub oracle: OracleResult,
}

impl IndexReport {
    pub fn chi_oracle(&self) -> i64 {
        self.oracle.index()
    }

    /// Agreement requires a stabilized oracle.
    pub fn agree(&self) -> bool {
        self.oracle.stabilized && self.chi_formula == self.chi_oracle()
    }

    /// Deterministic `key=value` lines.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.irregularities.iter().map(|(x, ir)| format!("ir[{x}]={ir}")).collect();
        let d = self.oracle.windows.last().map_or(0, |w| w.0);
        out.push(format!("chi_formula={}", self.chi_formula));
        out.push(format!("h0={}", self.oracle.h0));
        out.push(format!("h1={}", self.oracle.h1));
        out.push(format!("window={d}"));
        out.push(format!("stabilized={}", self.oracle.stabilized));
        out.push(format!("chi_oracle={}", self.chi_oracle()));
        out.push(format!("agree={}", self.agree()));
        out
    }
}

/// Runs the oracle on growing windows until three agree (up to `dmax`).
pub fn index_report(s: &ConnectionSpec, dmax: usize) -> Result<IndexReport> {
    let irregularities = s.singular().iter().map(|x| (x.clone(), irregularity(s.op(), x))).collect();
    let chi_formula = deligne_chi(s);
    let mut d = FIRST_WINDOW.min(dmax.saturating_sub(2 * WINDOW_STEP)).max(1);
    loop {
        let oracle = derham_oracle(s, d)?;
        if oracle.stabilized || d + 3 * WINDOW_STEP > dmax {
            return Ok(IndexReport { irregularities, chi_formula, oracle });
        }
        d += WINDOW_STEP;
    }
}
