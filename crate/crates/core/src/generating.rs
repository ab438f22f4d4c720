//! Named generating functions and offspring-law factorial moments.
//!
//! Everything here is exact. `T` is the Catalan series; the remaining
//! series are rational expressions in `x`, `T`, and its derivatives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Error, Result};
use crate::rational::Rational;
use crate::series::Series;

/// Offspring law described through its factorial moments
/// `FM_l = E[X(X-1)...(X-l+1)]` as a function of the mean degree `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorialMomentModel {
    /// Poisson(c): `FM_l = c^l`.
    Poisson,
    /// Point mass at `c`: `FM_l = c(c-1)...(c-l+1)`.
    Regular,
    /// Laws of `c + c^{1-a/2} Y` with `Var Y -> beta`. Only the large-`c`
    /// asymptotics are known.
    ShiftedFamily { conc_exponent: Rational, beta: Rational },
    /// Explicit table `FM_0, FM_1, ...` valid at a single mean degree `c`,
    /// optionally with a declared `(conc_exponent, f)` descriptor.
    Custom {
        c: Rational,
        table: Vec<Rational>,
        conc_exponent: Option<Rational>,
        f_values: Option<Vec<Rational>>,
    },
}

impl FactorialMomentModel {
    pub fn name(&self) -> &'static str {
        match self {
            FactorialMomentModel::Poisson => "poisson",
            FactorialMomentModel::Regular => "regular",
            FactorialMomentModel::ShiftedFamily { .. } => "shifted_family",
            FactorialMomentModel::Custom { .. } => "custom",
        }
    }

    pub fn has_exact_fm(&self) -> bool {
        !matches!(self, FactorialMomentModel::ShiftedFamily { .. })
    }

    /// Exact `FM_l(p(c))`.
    pub fn fm(&self, l: usize, c: &Rational) -> Result<Rational> {
        match self {
            FactorialMomentModel::Poisson => Ok(c.pow(l as i32)),
            FactorialMomentModel::Regular => {
                Ok((0..l).map(|j| c - &Rational::from_int(j as i64)).product())
            }
            FactorialMomentModel::ShiftedFamily { .. } => Err(Error::Unsupported(
                "the shifted family only carries large-c asymptotics".into(),
            )),
            FactorialMomentModel::Custom { c: c0, table, .. } => {
                if c != c0 {
                    return Err(domain(format!("custom table is defined at c = {c0}, not {c}")));
                }
                table
                    .get(l)
                    .cloned()
                    .ok_or_else(|| domain(format!("custom table has no FM_{l}")))
            }
        }
    }

    /// `FM_l(p(c)) / c^l`.
    pub fn scaled_fm(&self, l: usize, c: &Rational) -> Result<Rational> {
        Ok(self.fm(l, c)? / c.pow(l as i32))
    }

    /// Factorial moment of the size-biased child law, `FM_{l+1}(p)/c`.
    pub fn child_fm(&self, l: usize, c: &Rational) -> Result<Rational> {
        Ok(self.fm(l + 1, c)? / c)
    }

    /// `FM_l / c^l` as a polynomial in `u = 1/c`, for laws where it is one.
    pub fn scaled_fm_series(&self, l: usize, order: usize) -> Result<Series> {
        match self {
            FactorialMomentModel::Poisson => Ok(Series::one(order)),
            FactorialMomentModel::Regular => {
                let mut acc = Series::one(order);
                for j in 1..l {
                    let factor = Series::one(order)
                        .sub(&Series::monomial(order, 1, Rational::from_int(j as i64)));
                    acc = acc.mul(&factor);
                }
                Ok(acc)
            }
            _ => Err(Error::Unsupported(format!(
                "{} has no symbolic factorial moments in 1/c",
                self.name()
            ))),
        }
    }

    /// Concentration exponent of the `(exponent, f)` descriptor; `None`
    /// when `f` vanishes identically.
    pub fn conc_exponent(&self) -> Option<Rational> {
        match self {
            FactorialMomentModel::Poisson => None,
            FactorialMomentModel::Regular => Some(Rational::one()),
            FactorialMomentModel::ShiftedFamily { conc_exponent, .. } => {
                Some(conc_exponent.clone().min(Rational::one()))
            }
            FactorialMomentModel::Custom { conc_exponent, .. } => conc_exponent.clone(),
        }
    }

    /// `f(k)` in `FM_k/c^k = 1 + f(k)/c^a + o(1/c^a)`.
    pub fn f_value(&self, k: usize) -> Option<Rational> {
        let pairs = Rational::from_int((k * k.saturating_sub(1) / 2) as i64);
        match self {
            FactorialMomentModel::Poisson => Some(Rational::zero()),
            FactorialMomentModel::Regular => Some(-pairs),
            FactorialMomentModel::ShiftedFamily { conc_exponent, beta } => {
                let one = Rational::one();
                if *conc_exponent < one {
                    Some(beta * &pairs)
                } else if *conc_exponent == one {
                    Some(&(beta - &one) * &pairs)
                } else {
                    Some(-pairs)
                }
            }
            FactorialMomentModel::Custom { f_values, .. } => {
                f_values.as_ref().map(|v| v.get(k).cloned().unwrap_or_else(Rational::zero))
            }
        }
    }

    /// `F(x) = sum_k f(k) x^k`.
    pub fn f_series(&self, order: usize) -> Option<Series> {
        let coeffs = (0..order).map(|k| self.f_value(k)).collect::<Option<Vec<_>>>()?;
        Some(Series::from_coeffs(coeffs))
    }
}

impl fmt::Display for FactorialMomentModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters accepted by [`fm_model`].
#[derive(Debug, Clone, Default)]
pub struct ModelParams {
    pub conc_exponent: Option<Rational>,
    pub beta: Option<Rational>,
    pub c: Option<Rational>,
    pub table: Option<Vec<Rational>>,
    pub f_values: Option<Vec<Rational>>,
}

pub fn fm_model(kind: &str, params: ModelParams) -> Result<FactorialMomentModel> {
    match kind {
        "poisson" | "erdos_renyi" => Ok(FactorialMomentModel::Poisson),
        "regular" => Ok(FactorialMomentModel::Regular),
        "shifted_family" => {
            let conc_exponent = params
                .conc_exponent
                .ok_or_else(|| usage("shifted_family needs a concentration exponent"))?;
            if !conc_exponent.is_positive() {
                return Err(usage("concentration exponent must be positive"));
            }
            let beta = params.beta.ok_or_else(|| usage("shifted_family needs beta"))?;
            Ok(FactorialMomentModel::ShiftedFamily { conc_exponent, beta })
        }
        "custom" => {
            let c = params.c.ok_or_else(|| usage("custom model needs c"))?;
            let table = params.table.ok_or_else(|| usage("custom model needs an FM table"))?;
            if table.len() < 2 || !table[0].eq(&Rational::one()) || table[1] != c {
                return Err(usage("custom FM table must start with FM_0 = 1, FM_1 = c"));
            }
            Ok(FactorialMomentModel::Custom {
                c,
                table,
                conc_exponent: params.conc_exponent,
                f_values: params.f_values,
            })
        }
        other => Err(usage(format!("unknown model {other:?}"))),
    }
}

/// Names accepted by [`named_series`].
pub const SERIES_NAMES: &[&str] = &[
    "T", "S1", "S1_sum", "S1_deriv", "B", "B1", "B1_tilde", "B0", "B0_tilde", "A0_2", "A0_3",
    "B1_2", "D2", "D11", "D", "B_hat", "D_hat",
];

struct Parts {
    order: usize,
    x: Series,
    t: Series,
    /// `1 - x T^2`
    gap: Series,
}

impl Parts {
    fn new(order: usize) -> Result<Self> {
        let x = Series::x(order);
        let t = Series::catalan(order)?;
        let gap = Series::one(order).sub(&x.mul(&t.pow(2)));
        Ok(Parts { order, x, t, gap })
    }

    fn xt(&self) -> Series {
        self.x.mul(&self.t)
    }

    /// `c * x^a T^b / (1 - xT^2)^g`
    fn term(&self, c: i64, a: usize, b: u32, g: u32) -> Result<Series> {
        let num = Series::monomial(self.order, a, Rational::from_int(c)).mul(&self.t.pow(b));
        num.div(&self.gap.pow(g))
    }
}

/// `S1` from the finite sum over compositions `p1 + ... + p4 = k - 2` of
/// `(2 p1 + 1) Cat(p1) Cat(p2) Cat(p3) Cat(p4)`, computed with plain integers.
pub fn s1_finite_sum(order: usize) -> Result<Series> {
    let cat = Series::catalan(order)?;
    let mut out = Series::zero(order);
    for k in 2..order {
        let m = k - 2;
        let mut acc = Rational::zero();
        for p1 in 0..=m {
            for p2 in 0..=m - p1 {
                for p3 in 0..=m - p1 - p2 {
                    let p4 = m - p1 - p2 - p3;
                    let w = Rational::from_int(2 * p1 as i64 + 1);
                    acc += &(w * &cat.coeff(p1) * &cat.coeff(p2) * &cat.coeff(p3) * &cat.coeff(p4));
                }
            }
        }
        out.set_coeff(k, acc);
    }
    Ok(out)
}

/// Compute `f` at `order + extra` and truncate, for expressions that lose
/// coefficients to differentiation.
fn with_headroom(order: usize, extra: usize, f: impl FnOnce(usize) -> Result<Series>) -> Result<Series> {
    Ok(f(order + extra)?.truncate(order))
}

/// Last coefficient in the second-order hat series: `3 a^2` or `3 a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HatTail {
    AlphaSquared,
    Alpha,
}

/// `D - 2a x B' + 2a^2 x^2 T'' + tail x T'`.
pub fn d_hat_series(order: usize, dilation_alpha: &Rational, tail: HatTail) -> Result<Series> {
    with_headroom(order, 2, |n| {
        let p = Parts::new(n)?;
        let d = named_series("D", n, None)?;
        let b = named_series("B", n, None)?;
        let b1 = b.derivative();
        let t1 = p.t.derivative();
        let t2 = t1.derivative();
        let a = dilation_alpha;
        let a2 = a * a;
        let tail_coeff = match tail {
            HatTail::AlphaSquared => &a2 * &Rational::from_int(3),
            HatTail::Alpha => a * &Rational::from_int(3),
        };
        let term_b = p.x.mul(&b1).scale(&(a * &Rational::from_int(-2)));
        let term_t2 = p.x.pow(2).mul(&t2).scale(&(&a2 * &Rational::from_int(2)));
        let term_t1 = p.x.mul(&t1).scale(&tail_coeff);
        Ok(d.add(&term_b).add(&term_t2).add(&term_t1))
    })
}

/// One named generating function, exact to `order` coefficients.
///
/// `B0` and `B0_tilde` need the series `F(x) = sum f(k) x^k`.
pub fn named_series(name: &str, order: usize, f_series: Option<&Series>) -> Result<Series> {
    if order == 0 {
        return Err(usage("order must be >= 1"));
    }
    let p = Parts::new(order)?;
    let need_f = || {
        f_series
            .map(|f| f.truncate(order))
            .ok_or_else(|| usage(format!("{name} needs an f series")))
    };
    match name {
        "T" => Ok(p.t.clone()),
        "S1" | "B" | "B1_tilde" => p.term(1, 2, 5, 1),
        "S1_sum" => s1_finite_sum(order),
        "S1_deriv" => with_headroom(order, 1, |n| {
            let p = Parts::new(n)?;
            let t1 = p.t.derivative();
            let inner = p.x.mul(&t1).mul(&p.t.pow(3)).scale(&Rational::from_int(2)).add(&p.t.pow(4));
            Ok(p.x.pow(2).mul(&inner))
        }),
        "B1" => {
            let b1t = p.term(1, 2, 5, 1)?;
            Ok(p.x.mul(&b1t).mul(&p.t.pow(2)).add(&p.term(1, 2, 5, 0)?))
        }
        "B0" => {
            let f = need_f()?;
            check_f(&f)?;
            f.compose(&p.xt())?.scale(&Rational::from_int(2)).div(&p.gap)
        }
        "B0_tilde" => {
            let f = need_f()?;
            check_f(&f)?;
            let f_over_y = f.shift_down(1)?;
            let padded = Series::from_coeffs(
                (0..order).map(|k| f_over_y.coeff(k)).collect(),
            );
            padded.compose(&p.xt())?.div(&p.gap)
        }
        "A0_2" => Ok(p.t.pow(2)),
        "A0_3" => Ok(p.t.pow(3)),
        "B1_2" => p.term(2, 2, 6, 1),
        "D2" => p.term(1, 3, 7, 1),
        "D11" => {
            let x_t2 = p.x.mul(&p.t.pow(2));
            let poly = Series::constant(order, Rational::from_int(8))
                .sub(&x_t2.scale(&Rational::from_int(11)))
                .add(&x_t2.pow(2).scale(&Rational::from_int(4)));
            Ok(p.term(1, 4, 9, 3)?.mul(&poly))
        }
        "D" => {
            let x_t2 = p.x.mul(&p.t.pow(2));
            let poly = Series::one(order)
                .add(&x_t2.scale(&Rational::from_int(6)))
                .sub(&x_t2.pow(2).scale(&Rational::from_int(10)))
                .add(&x_t2.pow(3).scale(&Rational::from_int(4)));
            Ok(p.term(1, 3, 7, 3)?.mul(&poly))
        }
        "B_hat" => with_headroom(order, 1, |n| {
            let p = Parts::new(n)?;
            let b = p.term(1, 2, 5, 1)?;
            Ok(b.sub(&p.x.mul(&p.t.derivative())))
        }),
        "D_hat" => d_hat_series(order, &Rational::new(1, 2), HatTail::AlphaSquared),
        other => Err(usage(format!(
            "unknown series {other:?}; known: {}",
            SERIES_NAMES.join(", ")
        ))),
    }
}

fn check_f(f: &Series) -> Result<()> {
    if !f.coeff(0).is_zero() || !f.coeff(1).is_zero() {
        return Err(domain("f(0) and f(1) must vanish"));
    }
    Ok(())
}

/// Even-moment generating series of the signed measure `sigma_f^{1}`:
/// `2 F(xT) / (1 - xT^2)`.
pub fn sigma_f_moments(f_series: &Series, order: usize) -> Result<Series> {
    check_f(f_series)?;
    named_series("B0", order, Some(f_series))
}

/// Where the second-order coefficients `d_k` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DSource {
    /// The closed-form series `D`.
    ClosedForm,
    /// Exhaustive walk enumeration.
    Oracle,
}

impl FromStr for DSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "closed_form" | "closed-form" => Ok(DSource::ClosedForm),
            "oracle" => Ok(DSource::Oracle),
            other => Err(usage(format!("unknown d source {other:?}"))),
        }
    }
}

impl fmt::Display for DSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DSource::ClosedForm => "paper",
            DSource::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    A,
    B,
    D,
    BHat,
    DHat,
    SigmaF,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub kind: TableKind,
    pub values: Vec<Rational>,
}

impl CoefficientTable {
    pub fn from_series(kind: TableKind, s: &Series) -> Self {
        CoefficientTable { kind, values: s.coeffs().to_vec() }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,value\n");
        for (k, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

/// Second-order coefficients `d_k` for `k < order`, from either source.
pub fn d_coefficients(order: usize, source: DSource) -> Result<Vec<Rational>> {
    match source {
        DSource::ClosedForm => Ok(named_series("D", order, None)?.coeffs().to_vec()),
        DSource::Oracle => (0..order)
            .map(|k| {
                if k < 2 {
                    return Ok(Rational::zero());
                }
                let poly = crate::walks::moment_polynomial(k)?;
                Ok(poly.coefficient(2))
            })
            .collect(),
    }
}

/// `b_hat_k = b_k - k Cat(k)` and `d_hat_k = d_k - k b_k + k(2k+1)/4 Cat(k)`.
pub fn hat_coefficients(order: usize, d_source: DSource) -> Result<(CoefficientTable, CoefficientTable)> {
    if order == 0 {
        return Err(usage("order must be >= 1"));
    }
    let t = Series::catalan(order)?;
    let b = named_series("B", order, None)?;
    let d = d_coefficients(order, d_source)?;
    let mut bh = Vec::with_capacity(order);
    let mut dh = Vec::with_capacity(order);
    for (k, dk) in d.iter().enumerate() {
        let kk = Rational::from_int(k as i64);
        let cat = t.coeff(k);
        bh.push(b.coeff(k) - &kk * &cat);
        let quarter = Rational::new((k * (2 * k + 1)) as i64, 4);
        dh.push(dk - &(&kk * &b.coeff(k)) + quarter * cat);
    }
    Ok((
        CoefficientTable { kind: TableKind::BHat, values: bh },
        CoefficientTable { kind: TableKind::DHat, values: dh },
    ))
}
