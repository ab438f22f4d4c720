//! Truncated formal power series with exact rational coefficients.
//!
//! A [`Series`] of order `N` knows its coefficients at indices `0..N`.
//! Arithmetic is exact up to that index. Binary operations between series
//! of different orders silently truncate to the smaller order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Result};
use crate::rational::Rational;

/// Truncation order used when callers have no preference.
pub const DEFAULT_ORDER: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Series { coeffs }
    }

    pub fn from_ints(order: usize, values: &[i64]) -> Self {
        let mut s = Series::zero(order);
        for (k, v) in values.iter().enumerate().take(order) {
            s.coeffs[k] = Rational::from_int(*v);
        }
        s
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Rational::zero(); order] }
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        let mut s = Series::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(order: usize) -> Self {
        Series::constant(order, Rational::one())
    }

    /// `c * x^power`, truncated.
    pub fn monomial(order: usize, power: usize, c: Rational) -> Self {
        let mut s = Series::zero(order);
        if power < order {
            s.coeffs[power] = c;
        }
        s
    }

    /// The formal variable `x`.
    pub fn x(order: usize) -> Self {
        Series::monomial(order, 1, Rational::one())
    }

    /// Catalan generating series `T`, built from `Cat(0) = 1` and the
    /// convolution recursion `Cat(n+1) = sum_{i+j=n} Cat(i) Cat(j)`.
    pub fn catalan(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(usage("catalan series needs order >= 1"));
        }
        let mut c: Vec<Rational> = Vec::with_capacity(order);
        c.push(Rational::one());
        for n in 0..order - 1 {
            let next: Rational = (0..=n).map(|i| &c[i] * &c[n - i]).sum();
            c.push(next);
        }
        Ok(Series { coeffs: c })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient `k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set_coeff(&mut self, k: usize, v: Rational) {
        if k < self.coeffs.len() {
            self.coeffs[k] = v;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order);
        Series { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Series) -> Self {
        let n = self.order().min(other.order());
        Series { coeffs: (0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn sub(&self, other: &Series) -> Self {
        let n = self.order().min(other.order());
        Series { coeffs: (0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect() }
    }

    pub fn mul(&self, other: &Series) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Series::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / other`; `other` must have a nonzero constant term.
    pub fn div(&self, other: &Series) -> Result<Self> {
        let n = self.order().min(other.order());
        if n == 0 {
            return Ok(Series::zero(0));
        }
        let b0 = other.coeffs[0]
            .recip()
            .ok_or_else(|| domain("division by a series with zero constant term"))?;
        let mut q: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                if !other.coeffs[j].is_zero() {
                    acc -= &(&other.coeffs[j] * &q[k - j]);
                }
            }
            q.push(acc * &b0);
        }
        Ok(Series { coeffs: q })
    }

    /// `1 / self`.
    pub fn recip(&self) -> Result<Self> {
        Series::one(self.order()).div(self)
    }

    /// Formal derivative. The result has one coefficient fewer, since the
    /// top coefficient of the derivative would need index `N` of `self`.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        Series {
            coeffs: (1..n)
                .map(|k| &self.coeffs[k] * &Rational::from_int(k as i64))
                .collect(),
        }
    }

    /// Substitution `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Series) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(domain("composition with a series of nonzero constant term"));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Series::zero(n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            let c0 = acc.coeff(0) + &self.coeffs[k];
            acc.set_coeff(0, c0);
        }
        Ok(acc)
    }

    /// Multiply by `x^m` (coefficients shift up, order is kept).
    pub fn shift_up(&self, m: usize) -> Self {
        let n = self.order();
        let mut out = Series::zero(n);
        for k in m..n {
            out.coeffs[k] = self.coeffs[k - m].clone();
        }
        out
    }

    /// Divide by `x^m`; the first `m` coefficients must vanish. The order
    /// drops by `m`.
    pub fn shift_down(&self, m: usize) -> Result<Self> {
        if self.coeffs.iter().take(m).any(|c| !c.is_zero()) {
            return Err(domain(format!("series is not divisible by x^{m}")));
        }
        Ok(Series { coeffs: self.coeffs.iter().skip(m).cloned().collect() })
    }

    /// Evaluate the truncated polynomial at an exact rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn to_csv_row(&self) -> String {
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_csv_row().replace(',', ", "))
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series::add(self, rhs)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        Series::sub(self, rhs)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        Series::mul(self, rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&Rational::from_int(-1))
    }
}

/// Operation selector for [`series_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Mul,
    Div,
    Derivative,
    Compose,
}

/// Dispatch form of the series arithmetic, mirroring the CLI surface.
pub fn series_arith(kind: ArithKind, a: &Series, b: Option<&Series>) -> Result<Series> {
    let need_b = || b.ok_or_else(|| usage(format!("{kind:?} needs a second operand")));
    match kind {
        ArithKind::Add => Ok(a.add(need_b()?)),
        ArithKind::Mul => Ok(a.mul(need_b()?)),
        ArithKind::Div => a.div(need_b()?),
        ArithKind::Derivative => Ok(a.derivative()),
        ArithKind::Compose => a.compose(need_b()?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(s: &Series) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn catalan_prefix() {
        assert_eq!(ints(&Series::catalan(6).unwrap()), vec![1, 1, 2, 5, 14, 42]);
        assert_eq!(ints(&Series::catalan(1).unwrap()), vec![1]);
        assert!(Series::catalan(0).is_err());
    }

    #[test]
    fn catalan_square_and_long_division() {
        let t = Series::catalan(5).unwrap();
        assert_eq!(ints(&t.mul(&t)), vec![1, 2, 5, 14, 42]);

        let t = Series::catalan(6).unwrap();
        let x = Series::x(6);
        let denom = Series::one(6).sub(&x.mul(&t.mul(&t)));
        let q = Series::one(6).div(&denom).unwrap();
        // 126 = C(10,5)/2
        assert_eq!(ints(&q), vec![1, 1, 3, 10, 35, 126]);
    }

    #[test]
    fn derivative_of_x() {
        assert_eq!(ints(&Series::x(2).derivative()), vec![1]);
    }

    #[test]
    fn domain_errors() {
        let x = Series::x(4);
        assert!(matches!(Series::one(4).div(&x), Err(crate::Error::Domain(_))));
        assert!(matches!(x.compose(&Series::one(4)), Err(crate::Error::Domain(_))));
        assert!(series_arith(ArithKind::Mul, &x, None).is_err());
    }

    #[test]
    fn mixed_orders_truncate() {
        let a = Series::from_ints(5, &[1, 2, 3, 4, 5]);
        let b = Series::from_ints(3, &[1, 1, 1]);
        assert_eq!(a.add(&b).order(), 3);
        assert_eq!(a.mul(&b).order(), 3);
    }

    #[test]
    fn compose_geometric() {
        // 1/(1-y) with y = x + x^2
        let n = 6;
        let geo = Series::from_ints(n, &[1; 6]);
        let y = Series::from_ints(n, &[0, 1, 1]);
        let direct = Series::one(n).div(&Series::one(n).sub(&y)).unwrap();
        assert_eq!(geo.compose(&y).unwrap(), direct);
    }

    fn small_series(order: usize) -> impl Strategy<Value = Series> {
        proptest::collection::vec((-9i64..=9, 1i64..=4), order).prop_map(|v| {
            Series::from_coeffs(v.into_iter().map(|(p, q)| Rational::new(p, q)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_axioms(a in small_series(16), b in small_series(16), c in small_series(16)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn division_inverts_multiplication(a in small_series(12), b in small_series(12)) {
            prop_assume!(!b.coeff(0).is_zero());
            prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
        }
    }
}
