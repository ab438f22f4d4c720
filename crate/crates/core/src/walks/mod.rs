//! Exact moments of Galton-Watson local limits by exhaustive enumeration of
//! closed walks, and the loop-count recursions they are checked against.
//!
//! A canonical history whose root has `l_0` distinct children and whose
//! other vertices have `l_v` distinct children weighs
//! `FM_{l_0}(p) prod_v FM_{l_v}(q) / c^k` under the unimodular tree
//! `UGW(p)`, and `prod_v FM_{l_v}(q) / c^k` (root included) under `GW(q)`.

mod enumerate;
mod history;
mod recursion;
mod weights;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use enumerate::{
    build_census, census, enumerate_histories, for_each_history, k_max, set_k_max, Census,
    OneOneSite, Signature, Tally, DEFAULT_K_MAX,
};
pub use history::{LoopType, Move, WalkHistory};
pub use recursion::{root_pair_rank_factor, Recursions, Transcription, EQUATIONS};
pub use weights::{rational_weights, series_weights, Ring, Weights};

use crate::error::{usage, Error, Result};
use crate::generating::{named_series, FactorialMomentModel};
use crate::rational::Rational;
use crate::series::Series;

/// Law of the root's offspring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootLaw {
    /// Unimodular tree: root law `p`, all other vertices `q`.
    UgwP,
    /// Plain Galton-Watson tree with law `q` everywhere.
    GwQ,
}

/// Which loops (or tuples of loops) to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopSelector {
    All,
    Single(LoopType),
    PairZero,
    TripleZero,
    PairOneZero,
}

impl LoopSelector {
    fn count(self, t: &Tally) -> u64 {
        match self {
            LoopSelector::All => t.total(),
            LoopSelector::Single(ty) => t.by_type[ty.index()],
            LoopSelector::PairZero => t.pair_zero,
            LoopSelector::TripleZero => t.triple_zero,
            LoopSelector::PairOneZero => t.pair_one_zero,
        }
    }
}

/// Weight of one history with signature `sig` at half-length `k`.
pub fn signature_weight<R: Ring>(sig: &Signature, k: usize, law: RootLaw, w: &Weights<R>) -> R {
    let root = match law {
        RootLaw::UgwP => w.fs(sig.root_l as usize),
        RootLaw::GwQ => w.fs(sig.root_l as usize + 1),
    };
    let mut acc = root.clone();
    for &l in &sig.others {
        acc = acc.mul(w.fs(l as usize + 1));
    }
    acc.mul(&w.u_pow(k - sig.alpha()))
}

/// Sum of `count(tally) * weight(signature)` over a census.
pub fn weigh<R: Ring>(census: &Census, law: RootLaw, w: &Weights<R>, count: impl Fn(&Tally) -> u64) -> R {
    let mut acc = w.zero.clone();
    for (sig, t) in &census.entries {
        let n = count(t);
        if n > 0 {
            let term = signature_weight(sig, census.k, law, w).scale(&Rational::from_int(n as i64));
            acc = acc.add(&term);
        }
    }
    acc
}

/// `m_{2k}(mu^c) = sum_e N_{k, k-e} c^{-e}` for Poisson offspring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentPolynomial {
    pub k: usize,
    /// Exponent `e` of `1/c` to the number of histories with `k - e` edges.
    pub counts: BTreeMap<usize, u64>,
}

impl MomentPolynomial {
    pub fn coefficient(&self, e: usize) -> Rational {
        Rational::from_int(self.counts.get(&e).copied().unwrap_or(0) as i64)
    }

    pub fn eval(&self, c: &Rational) -> Rational {
        self.counts
            .iter()
            .map(|(&e, &n)| Rational::from_int(n as i64) * c.pow(-(e as i32)))
            .sum()
    }

    /// Coefficients as a list indexed by `e`.
    pub fn coefficients(&self) -> Vec<Rational> {
        (0..self.k).map(|e| self.coefficient(e)).collect()
    }
}

pub fn moment_polynomial(k: usize) -> Result<MomentPolynomial> {
    let c = census(k)?;
    let counts = c.alpha_counts().into_iter().map(|(a, n)| (k - a, n)).collect();
    Ok(MomentPolynomial { k, counts })
}

fn require_exact(model: &FactorialMomentModel) -> Result<()> {
    if model.has_exact_fm() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{} has no exact factorial moments", model.name())))
    }
}

/// Exact `c^{-k}` times the expected number of the selected loops.
pub fn loop_expectation(
    k: usize,
    sel: LoopSelector,
    law: RootLaw,
    model: &FactorialMomentModel,
    c: &Rational,
) -> Result<Rational> {
    require_exact(model)?;
    let cen = census(k)?;
    let w = rational_weights(model, c, k + 2)?;
    Ok(weigh(&cen, law, &w, |t| sel.count(t)))
}

/// [`loop_expectation`] as a polynomial in `u = 1/c`.
pub fn loop_expectation_series(
    k: usize,
    sel: LoopSelector,
    law: RootLaw,
    model: &FactorialMomentModel,
    order: usize,
) -> Result<Series> {
    let cen = census(k)?;
    let w = series_weights(model, order, k + 2)?;
    Ok(weigh(&cen, law, &w, |t| sel.count(t)))
}

/// Exact `m_{2k}(mu(UGW(p(c))))`.
pub fn exact_moment(k: usize, model: &FactorialMomentModel, c: &Rational) -> Result<Rational> {
    if !c.is_positive() {
        return Err(usage("c must be positive"));
    }
    loop_expectation(k, LoopSelector::All, RootLaw::UgwP, model, c)
}

/// The enumerated quantity each recursion should reproduce.
pub fn oracle_for(eq: u32) -> Result<(LoopSelector, RootLaw)> {
    Ok(match eq {
        6 => (LoopSelector::Single(LoopType::Zero), RootLaw::UgwP),
        7 => (LoopSelector::Single(LoopType::Zero), RootLaw::GwQ),
        8 => (LoopSelector::Single(LoopType::One), RootLaw::UgwP),
        9 => (LoopSelector::PairZero, RootLaw::GwQ),
        10 => (LoopSelector::Single(LoopType::One), RootLaw::GwQ),
        13 => (LoopSelector::Single(LoopType::Two), RootLaw::GwQ),
        14 => (LoopSelector::Single(LoopType::OneOne), RootLaw::GwQ),
        15 => (LoopSelector::PairOneZero, RootLaw::GwQ),
        other => return Err(usage(format!("unknown recursion {other}"))),
    })
}

pub fn recursion_eval(
    eq: u32,
    k: usize,
    model: &FactorialMomentModel,
    c: &Rational,
    mode: Transcription,
) -> Result<Rational> {
    require_exact(model)?;
    let w = rational_weights(model, c, k + 3)?;
    Recursions::new(&w, mode).eval(eq, k)
}

pub fn recursion_series(
    eq: u32,
    k: usize,
    model: &FactorialMomentModel,
    order: usize,
    mode: Transcription,
) -> Result<Series> {
    let w = series_weights(model, order, k + 3)?;
    Recursions::new(&w, mode).eval(eq, k)
}

/// The five terms of the (1,1)-loop recursion as polynomials in `1/c`.
pub fn one_one_terms_series(
    k: usize,
    model: &FactorialMomentModel,
    order: usize,
    mode: Transcription,
) -> Result<[Series; 5]> {
    let w = series_weights(model, order, k + 3)?;
    Ok(Recursions::new(&w, mode).one_one_terms(k))
}

/// One row of [`expansion_check`].
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionRow {
    pub c: Rational,
    pub exact: Rational,
    /// Exact residual, when the prediction is rational.
    pub residual: Option<Rational>,
    pub residual_f64: f64,
    pub scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionReport {
    pub k: usize,
    pub model: String,
    pub scale_exponent: f64,
    pub rows: Vec<ExpansionRow>,
    /// `(max - min) / max` of `|scaled|` across the rows.
    pub variation: f64,
}

impl ExpansionReport {
    /// Scaled residuals agree within `tol` relative variation, or all vanish.
    pub fn is_stable(&self, tol: f64) -> bool {
        self.rows.iter().all(|r| r.residual_f64 == 0.0) || self.variation <= tol
    }
}

/// Compare exact moments with the first-order expansion
/// `Cat(k) + c^{-a} m(sigma_f) + c^{-1} b_k` and rescale the residual by
/// `c^{min(2, 2a)}`.
pub fn expansion_check(
    k: usize,
    model: &FactorialMomentModel,
    c_values: &[Rational],
) -> Result<ExpansionReport> {
    let order = k + 1;
    let cat = Series::catalan(order)?.coeff(k);
    let b = named_series("B", order, None)?.coeff(k);
    let conc = model.conc_exponent();
    let sigma_f = match model.f_series(order) {
        Some(f) if conc.is_some() => crate::generating::sigma_f_moments(&f, order)?.coeff(k),
        _ => Rational::zero(),
    };
    let a_f = conc.as_ref().map(Rational::to_f64).unwrap_or(1.0);
    let scale_exponent = (2.0 * a_f).min(2.0);
    let mut rows = Vec::with_capacity(c_values.len());
    for c in c_values {
        let exact = exact_moment(k, model, c)?;
        let (residual, residual_f64) = match conc.as_ref().and_then(Rational::to_i64) {
            Some(a) => {
                let r = &exact - &cat - &(&sigma_f * &c.pow(-(a as i32))) - &(&b / c);
                let f = r.to_f64();
                (Some(r), f)
            }
            None if conc.is_none() => {
                let r = &exact - &cat - &(&b / c);
                let f = r.to_f64();
                (Some(r), f)
            }
            None => {
                let cf = c.to_f64();
                let r = (&exact - &cat - &(&b / c)).to_f64() - sigma_f.to_f64() * cf.powf(-a_f);
                (None, r)
            }
        };
        let scaled = residual_f64 * c.to_f64().powf(scale_exponent);
        rows.push(ExpansionRow { c: c.clone(), exact, residual, residual_f64, scaled });
    }
    let mags: Vec<f64> = rows.iter().map(|r| r.scaled.abs()).collect();
    let max = mags.iter().cloned().fold(0.0, f64::max);
    let min = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    let variation = if max > 0.0 { (max - min) / max } else { 0.0 };
    Ok(ExpansionReport { k, model: model.name().into(), scale_exponent, rows, variation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn moment_polynomials() {
        let p2 = moment_polynomial(2).unwrap();
        assert_eq!(p2.coefficients(), vec![r(2, 1), r(1, 1)]);
        let p3 = moment_polynomial(3).unwrap();
        assert_eq!(p3.coefficients(), vec![r(5, 1), r(6, 1), r(1, 1)]);
        let p4 = moment_polynomial(4).unwrap();
        assert_eq!(p4.coefficients(), vec![r(14, 1), r(28, 1), r(14, 1), r(1, 1)]);
    }

    #[test]
    fn exact_moment_examples() {
        let reg = FactorialMomentModel::Regular;
        assert_eq!(exact_moment(2, &reg, &r(3, 1)).unwrap(), r(5, 3));
        assert_eq!(exact_moment(2, &FactorialMomentModel::Poisson, &r(10, 1)).unwrap(), r(21, 10));
        assert_eq!(exact_moment(3, &reg, &r(1, 1)).unwrap(), r(1, 1));
        let shifted = FactorialMomentModel::ShiftedFamily { conc_exponent: r(1, 2), beta: r(1, 1) };
        assert!(matches!(exact_moment(2, &shifted, &r(3, 1)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn loop_examples() {
        let p = FactorialMomentModel::Poisson;
        let c = r(7, 1);
        let one = LoopSelector::Single(LoopType::One);
        let zero = LoopSelector::Single(LoopType::Zero);
        assert_eq!(loop_expectation(2, one, RootLaw::UgwP, &p, &c).unwrap(), r(1, 7));
        assert_eq!(loop_expectation(2, zero, RootLaw::UgwP, &p, &c).unwrap(), r(2, 1));
        let oo = LoopSelector::Single(LoopType::OneOne);
        assert_eq!(loop_expectation(4, oo, RootLaw::UgwP, &p, &c).unwrap(), r(6, 49));
    }

    #[test]
    fn expansion_poisson() {
        let p = FactorialMomentModel::Poisson;
        let cs = [r(10, 1), r(100, 1), r(1000, 1)];
        let rep = expansion_check(3, &p, &cs).unwrap();
        for row in &rep.rows {
            assert_eq!(row.residual.clone().unwrap(), row.c.pow(-2));
        }
        let rep = expansion_check(1, &p, &cs).unwrap();
        assert!(rep.rows.iter().all(|row| row.residual.clone().unwrap().is_zero()));
        let rep = expansion_check(2, &FactorialMomentModel::Regular, &[r(10, 1), r(20, 1)]).unwrap();
        assert!(rep.is_stable(0.2));
    }
}
