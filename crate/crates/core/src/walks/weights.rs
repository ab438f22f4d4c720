//! Coefficient rings for walk weights: exact rationals at a fixed mean
//! degree, or truncated series in `u = 1/c`.

use crate::error::Result;
use crate::generating::FactorialMomentModel;
use crate::rational::Rational;
use crate::series::Series;

pub trait Ring: Clone + Send + Sync {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
}

impl Ring for Rational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
}

impl Ring for Series {
    fn add(&self, other: &Self) -> Self {
        Series::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Series::mul(self, other)
    }
    fn scale(&self, q: &Rational) -> Self {
        Series::scale(self, q)
    }
}

/// Scaled factorial moments `fs(l) = FM_l / c^l` and powers of `u = 1/c`
/// in a ring.
#[derive(Debug, Clone)]
pub struct Weights<R: Ring> {
    pub zero: R,
    pub one: R,
    pub u: R,
    fs: Vec<R>,
}

impl<R: Ring> Weights<R> {
    pub fn fs(&self, l: usize) -> &R {
        &self.fs[l]
    }

    pub fn lmax(&self) -> usize {
        self.fs.len() - 1
    }

    pub fn u_pow(&self, e: usize) -> R {
        (0..e).fold(self.one.clone(), |acc, _| acc.mul(&self.u))
    }

    pub fn int(&self, n: i64) -> R {
        self.one.scale(&Rational::from_int(n))
    }
}

/// Weights at a fixed rational `c`, for `l <= lmax`.
pub fn rational_weights(model: &FactorialMomentModel, c: &Rational, lmax: usize) -> Result<Weights<Rational>> {
    let fs = (0..=lmax)
        .map(|l| model.scaled_fm(l, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Weights {
        zero: Rational::zero(),
        one: Rational::one(),
        u: c.recip().ok_or_else(|| crate::error::domain("c must be nonzero"))?,
        fs,
    })
}

/// Weights as polynomials in `u`, truncated to `order` coefficients.
pub fn series_weights(model: &FactorialMomentModel, order: usize, lmax: usize) -> Result<Weights<Series>> {
    let fs = (0..=lmax)
        .map(|l| model.scaled_fm_series(l, order))
        .collect::<Result<Vec<_>>>()?;
    Ok(Weights {
        zero: Series::zero(order),
        one: Series::one(order),
        u: Series::x(order),
        fs,
    })
}
