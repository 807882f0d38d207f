//! Dense univariate polynomials and reduced rational functions over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, Q};

/// A polynomial in `z`, coefficients from the constant term up, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(q(1))
    }

    /// `z`.
    pub fn z() -> Self {
        Poly::new(vec![q(0), q(1)])
    }

    /// `c·z^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `(z − x)^k`.
    pub fn linear_power(x: &Q, k: usize) -> Self {
        let lin = Poly::new(vec![-x.clone(), q(1)]);
        (0..k).fold(Poly::one(), |acc, _| &acc * &lin)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    /// Order of vanishing at `z = 0`; `None` for zero.
    pub fn low_order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * q(k as i64)).collect())
    }

    /// `p(z + x)`.
    pub fn shift(&self, x: &Q) -> Poly {
        let lin = Poly::new(vec![x.clone(), q(1)]);
        self.0.iter().rev().fold(Poly::zero(), |acc, c| &(&acc * &lin) + &Poly::constant(c.clone()))
    }

    /// Quotient and remainder; errors on division by zero.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead = d.leading().recip();
        let mut rem = self.0.clone();
        let mut quot = vec![Q::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().expect("nonempty") * &lead;
            for (i, dc) in d.0.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor (zero for two zeros).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// First `terms` coefficients of the power series `self / d` at `z = 0`.
    pub fn series_div(&self, d: &Poly, terms: usize) -> Result<Vec<Q>> {
        let d0 = d.coeff(0);
        if d0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = d0.recip();
        let mut out: Vec<Q> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut c = self.coeff(k);
            for j in 1..=k.min(d.0.len().saturating_sub(1)) {
                c -= d.coeff(j) * &out[k - j];
            }
            out.push(c * &inv);
        }
        Ok(out)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                f.write_str(&fmt_q(&mag))?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{}*{var}", fmt_q(&mag))?;
            }
        }
        Ok(())
    }
}

/// A point of `ℙ¹(ℚ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(Q),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => f.write_str(&fmt_q(x)),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

/// `num / den` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g)?.0;
        let den = den.div_rem(&g)?.0;
        let lead = den.leading().recip();
        Ok(RatFunc { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Q) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// `(z − x)^k` for any integer `k`.
    pub fn linear_power(x: &Q, k: i64) -> Self {
        let p = Poly::linear_power(x, k.unsigned_abs() as usize);
        if k >= 0 {
            RatFunc::from_poly(p)
        } else {
            RatFunc { num: Poly::one(), den: p }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Order of vanishing at a point; `None` for zero.
    pub fn valuation(&self, x: &Point) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(match x {
            Point::Infinity => self.den.degree()? as i64 - self.num.degree()? as i64,
            Point::Finite(a) => self.num.shift(a).low_order()? as i64 - self.den.shift(a).low_order()? as i64,
        })
    }

    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    pub fn recip(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        Ok((0..e.unsigned_abs()).fold(RatFunc::constant(q(1)), |acc, _| &acc * &base))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self * &o.recip()?)
    }

    /// Polynomial part and, for each listed point, the principal-part
    /// coefficients `c_k` of `(z − x)^{-k}` (`k = 1, 2, …`). Errors when the
    /// denominator has a root outside the list.
    pub fn partial_fractions(&self, points: &[Q]) -> Result<(Poly, Vec<Vec<Q>>)> {
        let mut rest = self.den.clone();
        let mut orders = Vec::new();
        for x in points {
            let e = self.den.shift(x).low_order().unwrap_or(0);
            orders.push(e);
            rest = rest.div_rem(&Poly::linear_power(x, e))?.0;
        }
        if rest.degree() != Some(0) {
            return Err(Error::MissingSingularity(format!("pole at a root of {}", rest.monic())));
        }
        let poly = self.num.div_rem(&self.den)?.0;
        let mut parts = Vec::new();
        for (x, &e) in points.iter().zip(&orders) {
            if e == 0 {
                parts.push(Vec::new());
                continue;
            }
            // self = num / ((z−x)^e · other) ; expand num/other at x to order e
            let other = self.den.div_rem(&Poly::linear_power(x, e))?.0;
            let series = self.num.shift(x).series_div(&other.shift(x), e)?;
            parts.push((1..=e).map(|k| series[e - k].clone()).collect());
        }
        Ok((poly, parts))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).expect("nonzero");
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).expect("nonzero")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &-o
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// `a/b` as an exact rational.
pub fn rat(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (quo, rem) = a.div_rem(&b).unwrap();
        assert_eq!((quo, rem), (p(&[-1, 1]), Poly::zero()));
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[0, 0, 1]).shift(&q(1)), p(&[1, 2, 1]));
        assert_eq!(p(&[1, 2, 3]).to_string(), "3*z^2 + 2*z + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-z");
        assert_eq!(Poly::one().series_div(&p(&[1, -1]), 4).unwrap(), vec![q(1); 4]);
    }

    #[test]
    fn valuations() {
        let f = RatFunc::new(p(&[0, 0, 1]), p(&[-1, 1])).unwrap(); // z²/(z−1)
        assert_eq!(f.valuation(&Point::Finite(q(0))), Some(2));
        assert_eq!(f.valuation(&Point::Finite(q(1))), Some(-1));
        assert_eq!(f.valuation(&Point::Infinity), Some(-1));
        assert_eq!(f.valuation(&Point::Finite(q(5))), Some(0));
        assert_eq!(RatFunc::zero().valuation(&Point::Infinity), None);
    }

    #[test]
    fn partial_fraction_decomposition() {
        // (z³ + 1) / (z²(z − 1)) = 1 + 1/z... check by recombining
        let f = RatFunc::new(p(&[1, 0, 0, 1]), &p(&[0, 0, 1]) * &p(&[-1, 1])).unwrap();
        let pts = [q(0), q(1)];
        let (poly, parts) = f.partial_fractions(&pts).unwrap();
        let mut sum = RatFunc::from_poly(poly);
        for (x, cs) in pts.iter().zip(&parts) {
            for (k, c) in cs.iter().enumerate() {
                sum = &sum + &(&RatFunc::constant(c.clone()) * &RatFunc::linear_power(x, -(k as i64 + 1)));
            }
        }
        assert_eq!(sum, f);
        let g = RatFunc::new(Poly::one(), p(&[1, 0, 1])).unwrap();
        assert!(matches!(g.partial_fractions(&pts), Err(Error::MissingSingularity(_))));
    }
}
