//! Closed-form densities, their exact moments, Stieltjes transforms and the
//! dilation operator.
//!
//! Square-root family densities are `Q(x) / (2 pi sqrt(4 - x^2))` on
//! `|x| < 2` for an even polynomial `Q`. Since `x^{2j}/(pi sqrt(4 - x^2))`
//! integrates to `C(2j, j)`, their moments are exact rationals.
//!
//! The branch of `sqrt(z^2 - 4)` is fixed once as `z * sqrt(1 - 4/z^2)`
//! with the principal square root, so that `H(z) ~ 1/z` at infinity.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Error, Result};
use crate::rational::{binomial, Rational};
use crate::series::Series;

/// Nodes of the periodic midpoint rule used by [`quadrature_moment`].
pub const QUADRATURE_NODES: usize = 256;

/// Default imaginary offset for [`recover_density`].
pub const DEFAULT_EPS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    /// `Q(x) / (2 pi sqrt(4 - x^2))`; `numerator[i]` multiplies `x^i`.
    SqrtFamily { numerator: Vec<Rational> },
    /// Spectral measure of the `c`-regular tree, optionally for `A / sqrt(c)`.
    KestenMcKay { c: Rational, normalized: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityForm {
    pub name: String,
    pub kind: DensityKind,
    /// The form describes the image of the base measure under `x -> dilation * x`.
    pub dilation: Rational,
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&n| Rational::from_int(n)).collect()
}

/// Numerator sign convention for the hat corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    /// Leading minus sign as originally displayed.
    Printed,
    /// The opposite sign.
    Positive,
}

impl DensityForm {
    pub fn sqrt_family(name: &str, numerator: Vec<Rational>) -> Result<Self> {
        check_even(&numerator)?;
        Ok(DensityForm {
            name: name.into(),
            kind: DensityKind::SqrtFamily { numerator },
            dilation: Rational::one(),
        })
    }

    /// Semicircle law, `Q = 4 - x^2`.
    pub fn sigma() -> Self {
        DensityForm::sqrt_family("sigma", ints(&[4, 0, -1])).expect("even")
    }

    /// First-order correction, `Q = x^4 - 4x^2 + 2`.
    pub fn sigma1() -> Self {
        DensityForm::sqrt_family("sigma1", ints(&[2, 0, -4, 0, 1])).expect("even")
    }

    /// Dilated first-order correction, `Q = +-(x^4 - 5x^2 + 4)`.
    pub fn sigma_hat1(sign: Sign) -> Self {
        let mut q = ints(&[4, 0, -5, 0, 1]);
        if sign == Sign::Printed {
            q = q.into_iter().map(|c| -c).collect();
        }
        let name = match sign {
            Sign::Positive => "sigma_hat1",
            Sign::Printed => "sigma_hat1_printed",
        };
        DensityForm::sqrt_family(name, q).expect("even")
    }

    /// Dilated second-order correction,
    /// `Q = +-(4x^8 - 34x^6 + 92x^4 - (325/4)x^2 + 21/2)`.
    pub fn sigma_hat2(sign: Sign) -> Self {
        let mut q = vec![
            Rational::new(21, 2),
            Rational::zero(),
            Rational::new(-325, 4),
            Rational::zero(),
            Rational::from_int(92),
            Rational::zero(),
            Rational::from_int(-34),
            Rational::zero(),
            Rational::from_int(4),
        ];
        if sign == Sign::Printed {
            q = q.into_iter().map(|c| -c).collect();
        }
        let name = match sign {
            Sign::Positive => "sigma_hat2",
            Sign::Printed => "sigma_hat2_printed",
        };
        DensityForm::sqrt_family(name, q).expect("even")
    }

    pub fn kesten_mckay(c: Rational, normalized: bool) -> Result<Self> {
        if c < Rational::from_int(2) {
            return Err(domain("Kesten-McKay needs degree c >= 2"));
        }
        Ok(DensityForm {
            name: "kesten_mckay".into(),
            kind: DensityKind::KestenMcKay { c, normalized },
            dilation: Rational::one(),
        })
    }

    /// Look a form up by name; `kesten_mckay` needs `c`.
    pub fn by_name(name: &str, c: Option<&Rational>) -> Result<Self> {
        match name {
            "sigma" => Ok(DensityForm::sigma()),
            "sigma1" => Ok(DensityForm::sigma1()),
            "sigma_hat1" => Ok(DensityForm::sigma_hat1(Sign::Positive)),
            "sigma_hat1_printed" => Ok(DensityForm::sigma_hat1(Sign::Printed)),
            "sigma_hat2" => Ok(DensityForm::sigma_hat2(Sign::Positive)),
            "sigma_hat2_printed" => Ok(DensityForm::sigma_hat2(Sign::Printed)),
            "kesten_mckay" | "km" => {
                let c = c.ok_or_else(|| usage("kesten_mckay needs --c"))?;
                DensityForm::kesten_mckay(c.clone(), true)
            }
            other => Err(usage(format!(
                "unknown density {other:?}; known: sigma, sigma1, sigma_hat1, sigma_hat1_printed, \
                 sigma_hat2, sigma_hat2_printed, kesten_mckay"
            ))),
        }
    }

    pub fn numerator(&self) -> Option<&[Rational]> {
        match &self.kind {
            DensityKind::SqrtFamily { numerator } => Some(numerator),
            DensityKind::KestenMcKay { .. } => None,
        }
    }

    /// Half-width of the support.
    pub fn support_edge(&self) -> f64 {
        let base = match &self.kind {
            DensityKind::SqrtFamily { .. } => 2.0,
            DensityKind::KestenMcKay { c, normalized } => {
                let cf = c.to_f64();
                let r = 2.0 * (cf - 1.0).sqrt();
                if *normalized {
                    r / cf.sqrt()
                } else {
                    r
                }
            }
        };
        base * self.dilation.to_f64()
    }
}

fn check_even(q: &[Rational]) -> Result<()> {
    if q.iter().enumerate().any(|(i, c)| i % 2 == 1 && !c.is_zero()) {
        return Err(domain("numerator must be an even polynomial"));
    }
    Ok(())
}

fn poly_f64(q: &[Rational], x: f64) -> f64 {
    q.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
}

/// Undilated density at `y`.
fn base_density(kind: &DensityKind, y: f64) -> f64 {
    match kind {
        DensityKind::SqrtFamily { numerator } => {
            if y.abs() >= 2.0 {
                0.0
            } else {
                poly_f64(numerator, y) / (2.0 * PI * (4.0 - y * y).sqrt())
            }
        }
        DensityKind::KestenMcKay { c, normalized } => {
            let cf = c.to_f64();
            let (x, jac) = if *normalized { (y * cf.sqrt(), cf.sqrt()) } else { (y, 1.0) };
            let r2 = 4.0 * (cf - 1.0);
            if x * x >= r2 {
                0.0
            } else {
                jac * cf * (r2 - x * x).sqrt() / (2.0 * PI * (cf * cf - x * x))
            }
        }
    }
}

pub fn density_eval(form: &DensityForm, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(usage("x must be finite"));
    }
    let lam = form.dilation.to_f64();
    Ok(base_density(&form.kind, x / lam) / lam)
}

/// Exact `m_{2k}` of `Q(x) / (2 pi sqrt(4 - x^2))`.
pub fn density_moments_exact(q: &[Rational], k: usize) -> Result<Rational> {
    check_even(q)?;
    let mut acc = Rational::zero();
    for (i, c) in q.iter().enumerate().step_by(2) {
        let j = (i / 2) as u64;
        let m = (k as u64) + j;
        acc += &(c * &Rational::from_bigint(binomial(2 * m, m)));
    }
    Ok(acc * Rational::new(1, 2))
}

/// Exact `m_{2k}` of a square-root family form, dilation included.
pub fn form_moment_exact(form: &DensityForm, k: usize) -> Result<Rational> {
    let q = form
        .numerator()
        .ok_or_else(|| Error::Unsupported("exact moments need a polynomial numerator".into()))?;
    Ok(density_moments_exact(q, k)? * form.dilation.pow(2 * k as i32))
}

/// Solve for the even numerator `Q` of the given degree whose moments
/// `m_0, m_2, ...` are `moments[0], moments[1], ...`.
pub fn moment_match_numerator(moments: &[Rational], degree: usize) -> Result<Vec<Rational>> {
    if degree % 2 == 1 {
        return Err(usage("degree must be even"));
    }
    let unknowns = degree / 2 + 1;
    if moments.len() < unknowns {
        return Err(usage(format!("degree {degree} needs at least {unknowns} moments")));
    }
    let entry = |k: usize, j: usize| {
        let m = (k + j) as u64;
        Rational::from_bigint(binomial(2 * m, m)) * Rational::new(1, 2)
    };
    let mut a: Vec<Vec<Rational>> = (0..unknowns)
        .map(|k| {
            let mut row: Vec<Rational> = (0..unknowns).map(|j| entry(k, j)).collect();
            row.push(moments[k].clone());
            row
        })
        .collect();
    for col in 0..unknowns {
        let pivot = (col..unknowns)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::NoSolution { residual: "singular moment system".into() })?;
        a.swap(col, pivot);
        let inv = a[col][col].recip().expect("nonzero pivot");
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &(&f * p);
                }
            }
        }
    }
    let mut q = vec![Rational::zero(); degree + 1];
    for (j, row) in a.iter().enumerate() {
        q[2 * j] = row[unknowns].clone();
    }
    for (k, m) in moments.iter().enumerate().skip(unknowns) {
        let got = density_moments_exact(&q, k)?;
        if &got != m {
            return Err(Error::NoSolution { residual: format!("m_{} off by {}", 2 * k, &got - m) });
        }
    }
    Ok(q)
}

/// Stieltjes transforms with closed forms in `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    H,
    H1,
    H2,
    HHatB,
    HHatD,
}

impl std::str::FromStr for Transform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" => Ok(Transform::H),
            "H1" => Ok(Transform::H1),
            "H2" => Ok(Transform::H2),
            "H_hatB" | "HhatB" => Ok(Transform::HHatB),
            "H_hatD" | "HhatD" => Ok(Transform::HHatD),
            other => Err(usage(format!("unknown transform {other:?}; known: H, H1, H2, H_hatB, H_hatD"))),
        }
    }
}

/// `sqrt(z^2 - 4)` on the branch `z * sqrt(1 - 4/z^2)`.
pub fn sqrt_z2m4(z: Complex64) -> Complex64 {
    z * (Complex64::new(1.0, 0.0) - 4.0 / (z * z)).sqrt()
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re.abs() <= 2.0
}

pub fn stieltjes_eval(t: Transform, z: Complex64) -> Result<Complex64> {
    if on_cut(z) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(domain(format!("z = {z} lies on the cut [-2, 2]; use recover_density")));
    }
    let s = sqrt_z2m4(z);
    let h = (z - s) / 2.0;
    let h2 = h * h;
    let h4 = h2 * h2;
    Ok(match t {
        Transform::H => h,
        Transform::H1 => h4 / s,
        Transform::H2 => {
            let h6 = h4 * h2;
            let h8 = h4 * h4;
            (h4 + 6.0 * h6 - 10.0 * h8 + 4.0 * h8 * h2) / (s * s * s)
        }
        Transform::HHatB => (h4 - h2) / s,
        Transform::HHatD => h2 * (16.0 * h4 * h2 - 8.0 * h4 + 3.0) / (4.0 * s),
    })
}

/// `-(1/pi) Im G(x + i eps)`.
pub fn recover_density(t: Transform, x: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1e-4) {
        return Err(usage("eps must lie in (0, 1e-4]"));
    }
    if x.abs() >= 2.0 {
        return Err(usage("density recovery needs |x| < 2"));
    }
    let g = stieltjes_eval(t, Complex64::new(x, eps))?;
    Ok(-g.im / PI)
}

pub fn dilate(form: &DensityForm, lambda: &Rational) -> Result<DensityForm> {
    if !lambda.is_positive() {
        return Err(usage("dilation factor must be positive"));
    }
    let mut out = form.clone();
    out.dilation = &form.dilation * lambda;
    Ok(out)
}

/// Integrand in `theta` after `x = edge * sin(theta)`, so that
/// `int f(x) dx = int g(theta) d theta` over `(-pi/2, pi/2)`.
fn theta_integrand(kind: &DensityKind, power: usize) -> (f64, Box<dyn Fn(f64) -> f64 + '_>) {
    match kind {
        DensityKind::SqrtFamily { numerator } => (
            2.0,
            Box::new(move |th: f64| {
                let x = 2.0 * th.sin();
                x.powi(power as i32) * poly_f64(numerator, x) / (2.0 * PI)
            }),
        ),
        DensityKind::KestenMcKay { c, .. } => {
            let cf = c.to_f64();
            let r = 2.0 * (cf - 1.0).sqrt();
            (
                r,
                Box::new(move |th: f64| {
                    let (s, co) = th.sin_cos();
                    let x = r * s;
                    x.powi(power as i32) * cf * r * r * co * co / (2.0 * PI * (cf * cf - x * x))
                }),
            )
        }
    }
}

fn midpoint(g: &dyn Fn(f64) -> f64, n: usize) -> f64 {
    let h = PI / n as f64;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..n {
        let y = g(-PI / 2.0 + (i as f64 + 0.5) * h) * h - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `int x^{2k} d(form)` by the midpoint rule in `theta`; the error estimate
/// compares against half the nodes.
pub fn quadrature_moment(form: &DensityForm, k: usize, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol < 1e-12 {
        return Err(usage("tolerance must be at least 1e-12"));
    }
    let (_, g) = theta_integrand(&form.kind, 2 * k);
    let fine = midpoint(&*g, QUADRATURE_NODES);
    let coarse = midpoint(&*g, QUADRATURE_NODES / 2);
    let scale = match &form.kind {
        DensityKind::KestenMcKay { c, normalized: true } => c.to_f64().powi(-(k as i32)),
        _ => 1.0,
    } * form.dilation.to_f64().powi(2 * k as i32);
    let err = (fine - coarse).abs() * scale;
    if err > tol {
        return Err(Error::Accuracy { target: tol, achieved: err });
    }
    Ok(fine * scale)
}

/// Mass of `form` on `[a, b]`, via composite Simpson in `theta`.
pub fn bin_mass(form: &DensityForm, a: f64, b: f64) -> f64 {
    let lam = form.dilation.to_f64();
    let norm = match &form.kind {
        DensityKind::KestenMcKay { c, normalized: true } => c.to_f64().sqrt(),
        _ => 1.0,
    };
    let (edge, g) = theta_integrand(&form.kind, 0);
    let lo = (a / lam * norm / edge).clamp(-1.0, 1.0).asin();
    let hi = (b / lam * norm / edge).clamp(-1.0, 1.0).asin();
    if hi <= lo {
        return 0.0;
    }
    let n = 256;
    let h = (hi - lo) / n as f64;
    let mut s = g(lo) + g(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * g(lo + i as f64 * h);
    }
    s * h / 3.0
}

/// Numerator of the second-order hat transform as a polynomial in `H`,
/// before the square-root factor is cancelled:
/// `4H^10 - 10H^8 + (6+4a)H^6 + (1-4a-a^2)H^4 + (2a^2-4a)H^2 + 3a^2`.
pub fn d_hat_numerator(alpha: &Rational) -> Series {
    let a = alpha;
    let a2 = a * a;
    let four = Rational::from_int(4);
    let mut q = Series::zero(11);
    q.set_coeff(10, Rational::from_int(4));
    q.set_coeff(8, Rational::from_int(-10));
    q.set_coeff(6, Rational::from_int(6) + &four * a);
    q.set_coeff(4, Rational::one() - &four * a - &a2);
    q.set_coeff(2, &a2 * &Rational::from_int(2) - &four * a);
    q.set_coeff(0, &a2 * &Rational::from_int(3));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn density_examples() {
        assert!((density_eval(&DensityForm::sigma(), 0.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!((density_eval(&DensityForm::sigma1(), 0.0).unwrap() - 0.5 / PI).abs() < 1e-15);
        let km = DensityForm::kesten_mckay(r(2, 1), false).unwrap();
        let want = 1.0 / (PI * 3f64.sqrt());
        assert!((density_eval(&km, 1.0).unwrap() - want).abs() < 1e-12);
        assert!(DensityForm::kesten_mckay(r(1, 1), false).is_err());
        assert_eq!(density_eval(&DensityForm::sigma(), 2.5).unwrap(), 0.0);
    }

    #[test]
    fn exact_moment_examples() {
        let s1 = DensityForm::sigma1();
        let q = s1.numerator().unwrap();
        assert_eq!(density_moments_exact(q, 0).unwrap(), r(0, 1));
        assert_eq!(density_moments_exact(q, 2).unwrap(), r(1, 1));
        assert_eq!(density_moments_exact(q, 3).unwrap(), r(6, 1));
        let t = Series::catalan(11).unwrap();
        for k in 0..=10 {
            assert_eq!(density_moments_exact(DensityForm::sigma().numerator().unwrap(), k).unwrap(), t.coeff(k));
        }
        let h1 = DensityForm::sigma_hat1(Sign::Positive);
        assert_eq!(density_moments_exact(h1.numerator().unwrap(), 1).unwrap(), r(-1, 1));
        assert!(density_moments_exact(&[r(0, 1), r(1, 1)], 1).is_err());
    }

    #[test]
    fn moment_matching() {
        let m: Vec<Rational> = [0, 0, 1, 6, 28].iter().map(|&n| r(n, 1)).collect();
        assert_eq!(moment_match_numerator(&m, 4).unwrap(), DensityForm::sigma1().numerator().unwrap());
        let m: Vec<Rational> = [0, -1, -3, -9, -28].iter().map(|&n| r(n, 1)).collect();
        assert_eq!(
            moment_match_numerator(&m, 4).unwrap(),
            DensityForm::sigma_hat1(Sign::Positive).numerator().unwrap()
        );
        let cat = Series::catalan(6).unwrap();
        assert_eq!(moment_match_numerator(cat.coeffs(), 2).unwrap(), DensityForm::sigma().numerator().unwrap());
        let bad: Vec<Rational> = [1, 1, 2, 5, 15].iter().map(|&n| r(n, 1)).collect();
        assert!(matches!(moment_match_numerator(&bad, 2), Err(Error::NoSolution { .. })));
        assert!(moment_match_numerator(&bad, 3).is_err());
    }

    #[test]
    fn stieltjes_examples() {
        let h3 = stieltjes_eval(Transform::H, Complex64::new(3.0, 0.0)).unwrap();
        assert!((h3.re - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15 && h3.im == 0.0);
        let h2 = stieltjes_eval(Transform::H, Complex64::new(2.0 + 1e-14, 0.0)).unwrap();
        assert!((h2.re - 1.0).abs() < 1e-6);
        let z = Complex64::new(2.5, 0.0);
        let s = sqrt_z2m4(z);
        let lhs = stieltjes_eval(Transform::H1, z).unwrap() * 16.0 * s;
        assert!((lhs - (z - s).powi(4)).norm() < 1e-12);
        assert!(stieltjes_eval(Transform::H, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn recovery_examples() {
        let v = recover_density(Transform::H, 1.0, 1e-8).unwrap();
        assert!((v - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-6);
        let v = recover_density(Transform::H1, 0.0, 1e-8).unwrap();
        assert!((v - 0.5 / PI).abs() < 1e-5);
        let v = recover_density(Transform::H1, 1.99, 1e-8).unwrap();
        let want = density_eval(&DensityForm::sigma1(), 1.99).unwrap();
        assert!((v - want).abs() < 1e-3);
        assert!(recover_density(Transform::H, 1.0, 1e-3).is_err());
    }

    #[test]
    fn dilation_examples() {
        let s = DensityForm::sigma();
        let same = dilate(&s, &Rational::one()).unwrap();
        for x in [-1.5, 0.0, 0.7] {
            assert_eq!(density_eval(&same, x).unwrap(), density_eval(&s, x).unwrap());
        }
        let lam = r(41, 40);
        let d = dilate(&s, &lam).unwrap();
        assert_eq!(form_moment_exact(&d, 1).unwrap(), &lam * &lam);
        assert!((d.support_edge() - 2.05).abs() < 1e-12);
        assert_eq!(dilate(&d, &r(2, 1)).unwrap().dilation, r(41, 20));
        assert!(dilate(&s, &r(0, 1)).is_err());
    }

    #[test]
    fn quadrature_examples() {
        assert!((quadrature_moment(&DensityForm::sigma(), 3, 1e-10).unwrap() - 5.0).abs() < 1e-10);
        assert!((quadrature_moment(&DensityForm::sigma1(), 2, 1e-10).unwrap() - 1.0).abs() < 1e-10);
        let km = DensityForm::kesten_mckay(r(3, 1), true).unwrap();
        assert!((quadrature_moment(&km, 1, 1e-8).unwrap() - 1.0).abs() < 1e-8);
        assert!((quadrature_moment(&km, 2, 1e-8).unwrap() - 5.0 / 3.0).abs() < 1e-8);
        assert!(quadrature_moment(&km, 1, 1e-13).is_err());
    }

    #[test]
    fn bin_mass_totals() {
        let s = DensityForm::sigma();
        assert!((bin_mass(&s, -3.0, 3.0) - 1.0).abs() < 1e-12);
        let s1 = dilate(&DensityForm::sigma1(), &r(41, 40)).unwrap();
        assert!(bin_mass(&s1, -3.0, 3.0).abs() < 1e-12);
        let km = DensityForm::kesten_mckay(r(20, 1), true).unwrap();
        assert!((bin_mass(&km, -3.0, 3.0) - 1.0).abs() < 1e-10);
        let step: f64 = (0..40).map(|i| bin_mass(&s, -2.0 + 0.1 * i as f64, -1.9 + 0.1 * i as f64)).sum();
        assert!((step - 1.0).abs() < 1e-12);
    }

    #[test]
    fn d_hat_numerator_vanishes_at_one() {
        let q = d_hat_numerator(&r(1, 2));
        assert!(q.eval(&Rational::one()).is_zero());
        assert!(!d_hat_numerator(&r(1, 3)).eval(&Rational::one()).is_zero());
    }
}
