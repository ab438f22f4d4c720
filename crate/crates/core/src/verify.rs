//! The acceptance suite: every criterion as a reproducible outcome record,
//! plus the second-order discrepancy tables.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::generating::{hat_coefficients, named_series, s1_finite_sum, DSource, FactorialMomentModel};
use crate::graphs::{
    compare_from_spectra, erdos_renyi_m4, mean_moments, simulate, CompareSummary, Figure, GraphModel, Histogram,
    DEFAULT_RANGE,
};
use crate::measures::{density_moments_exact, recover_density, stieltjes_eval, sqrt_z2m4, DensityForm, Sign, Transform};
use crate::par::Exec;
use crate::rational::Rational;
use crate::series::Series;
use crate::walks::{
    census, exact_moment, loop_expectation, moment_polynomial, one_one_terms_series, oracle_for, recursion_eval,
    recursion_series, OneOneSite, Transcription,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub value: Value,
    pub expected: Value,
    pub tolerance: String,
    pub detail: Value,
    pub runtime_ms: u128,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: value={} expected={} tol={}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.expected,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Shrink the Monte Carlo criteria to seconds; their stated tolerances
    /// then no longer apply and they are reported as scaled down.
    pub quick: bool,
    pub dense_limit: usize,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: DEFAULT_SEED, quick: false, dense_limit: 5000, exec: Exec::Parallel }
    }
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn timed(id: u32, name: &str, f: impl FnOnce() -> Result<(bool, Value, Value, String, Value)>) -> Result<Outcome> {
    let start = Instant::now();
    let (pass, value, expected, tolerance, detail) = f()?;
    Ok(Outcome {
        id,
        name: name.into(),
        pass,
        value,
        expected,
        tolerance,
        detail,
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// `sqrt(1 - 4x)` from the binomial series.
fn sqrt_one_minus_4x(order: usize) -> Series {
    let mut coeffs = Vec::with_capacity(order);
    let mut c = Rational::one();
    for n in 0..order {
        coeffs.push(c.clone());
        // binom(1/2, n+1) / binom(1/2, n) = (1/2 - n) / (n + 1), times -4
        c = c * r(-4, 1) * (r(1, 2) - Rational::from_int(n as i64)) / Rational::from_int(n as i64 + 1);
    }
    Series::from_coeffs(coeffs)
}

pub fn series_identities() -> Result<Outcome> {
    timed(1, "series identities to order 32", || {
        let n = 32;
        let x = Series::x(n);
        let t = Series::catalan(n)?;
        let gap = Series::one(n).sub(&x.mul(&t.pow(2)));
        let t_big = Series::catalan(n + 1)?;
        let t_prime = t_big.derivative().truncate(n);
        let checks = [
            ("S1_sum == S1", s1_finite_sum(n)? == named_series("S1", n, None)?),
            ("B1_tilde == B1", named_series("B1_tilde", n, None)? == named_series("B1", n, None)?),
            (
                "D == D2 + D11",
                named_series("D", n, None)? == named_series("D2", n, None)?.add(&named_series("D11", n, None)?),
            ),
            ("T'(1 - xT^2) == T^3", t_prime.mul(&gap) == t.pow(3)),
            ("1 - xT^2 == sqrt(1-4x) T", gap == sqrt_one_minus_4x(n).mul(&t)),
        ];
        let pass = checks.iter().all(|c| c.1);
        let detail: Value = checks.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into();
        Ok((pass, json!(checks.iter().filter(|c| c.1).count()), json!(checks.len()), "exact".into(), detail))
    })
}

pub fn first_order_oracle() -> Result<Outcome> {
    timed(2, "first-order enumeration counts, k <= 8", || {
        let t = Series::catalan(9)?;
        let s1 = named_series("S1", 9, None)?;
        let mut rows = Vec::new();
        let mut pass = true;
        for k in 1..=8 {
            let p = moment_polynomial(k)?;
            // N_{k,a} counts histories with a distinct edges and weighs c^{a-k}.
            let (top, next) = (p.coefficient(0), p.coefficient(1));
            let ok = top == t.coeff(k) && next == s1.coeff(k);
            pass &= ok;
            rows.push(json!({
                "k": k, "N_kk": top.to_string(), "cat": t.coeff(k).to_string(),
                "N_k_k-1": next.to_string(), "S1": s1.coeff(k).to_string(),
                "ok": ok,
            }));
        }
        let s1_list: Vec<String> = (0..=8).map(|k| s1.coeff(k).to_string()).collect();
        Ok((pass, json!(s1_list), json!(["0", "0", "1", "6", "28", "120", "495", "2002", "8008"]), "exact".into(), json!(rows)))
    })
}

pub fn recursion_cross_checks() -> Result<Outcome> {
    timed(3, "recursions 6, 8, 9, 13 vs enumeration, k <= 6", || {
        let cs = [r(3, 1), r(10, 1), r(137, 10)];
        let mut total = 0;
        let mut agree = 0;
        let mut mismatches = Vec::new();
        for eq in [6u32, 8, 9, 13] {
            let (sel, law) = oracle_for(eq)?;
            // The two-loop recursion carries one power of c too few as
            // printed; the consistent power is checked and the printed one
            // is reported alongside.
            let mode = if eq == 13 { Transcription::Consistent } else { Transcription::Printed };
            for model in [FactorialMomentModel::Poisson, FactorialMomentModel::Regular] {
                for c in &cs {
                    for k in 1..=6 {
                        let rec = recursion_eval(eq, k, &model, c, mode)?;
                        let ora = loop_expectation(k, sel, law, &model, c)?;
                        total += 1;
                        if rec == ora {
                            agree += 1;
                        } else {
                            mismatches.push(json!({"eq": eq, "model": model.name(), "c": c.to_string(), "k": k,
                                "recursion": rec.to_string(), "oracle": ora.to_string()}));
                        }
                    }
                }
            }
        }
        let c10 = r(10, 1);
        let printed: Vec<Value> = (1..=6)
            .map(|k| -> Result<Value> {
                let p = recursion_eval(13, k, &FactorialMomentModel::Poisson, &c10, Transcription::Printed)?;
                let (sel, law) = oracle_for(13)?;
                let o = loop_expectation(k, sel, law, &FactorialMomentModel::Poisson, &c10)?;
                Ok(json!({"k": k, "printed_power": p.to_string(), "oracle": o.to_string()}))
            })
            .collect::<Result<_>>()?;
        Ok((
            agree == total,
            json!(agree),
            json!(total),
            "exact".into(),
            json!({"mismatches": mismatches, "two_loop_as_printed_poisson_c10": printed}),
        ))
    })
}

pub fn expansion_order() -> Result<Outcome> {
    timed(4, "regular model residual is O(1/c^2)", || {
        let model = FactorialMomentModel::Regular;
        let cs = [r(100, 1), r(1000, 1), r(10000, 1)];
        let t = Series::catalan(6)?;
        let s1 = named_series("S1", 6, None)?;
        let mut pass = true;
        let mut worst = 0.0f64;
        let mut rows = Vec::new();
        for k in 1..=5 {
            let mut scaled = Vec::new();
            for c in &cs {
                let exact = exact_moment(k, &model, c)?;
                let pred = t.coeff(k) + (s1.coeff(k) * r(-2, 1) + s1.coeff(k)) / c;
                let res = (&exact - &pred).abs() * c.pow(2);
                scaled.push(res.to_f64());
            }
            let max = scaled.iter().cloned().fold(0.0, f64::max);
            let min = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
            let variation = if max > 0.0 { (max - min) / max } else { 0.0 };
            worst = worst.max(variation);
            pass &= variation <= 0.2 && max.is_finite();
            rows.push(json!({"k": k, "scaled_residuals": scaled, "variation": variation}));
        }
        Ok((pass, json!(worst), json!(0.0), "variation <= 0.2".into(), json!(rows)))
    })
}

/// Side-by-side second-order values at small `k`.
pub fn second_order_discrepancy() -> Result<Outcome> {
    timed(5, "second-order discrepancy report", || {
        let p = FactorialMomentModel::Poisson;
        let d = named_series("D", 9, None)?;
        let n42 = moment_polynomial(4)?.coefficient(2);
        let n32 = moment_polynomial(3)?.coefficient(2);
        let oo4 = recursion_series(14, 4, &p, 4, Transcription::Consistent)?.coeff(2);
        let oo4_printed = recursion_series(14, 4, &p, 4, Transcription::Printed)?;
        let (sel, law) = oracle_for(14)?;
        let enum4 = crate::walks::loop_expectation_series(4, sel, law, &p, 4)?.coeff(2);
        let terms = one_one_terms_series(4, &p, 4, Transcription::Consistent)?;
        let breakdown: Vec<Value> = terms
            .iter()
            .enumerate()
            .map(|(i, t)| json!({"term": i + 1, "leading": t.coeff(2).to_string()}))
            .collect();
        let sites = census(4)?.one_one_site_counts();
        let site_json: serde_json::Map<String, Value> = OneOneSite::ALL
            .iter()
            .map(|s| (format!("{s:?}"), json!(sites[s.index()])))
            .collect();
        let value = json!({
            "x4_D": d.coeff(4).to_string(), "N_4_2": n42.to_string(),
            "one_one_recursion_k4": oo4.to_string(), "one_one_enumeration_k4": enum4.to_string(),
            "x3_D": d.coeff(3).to_string(), "N_3_2": n32.to_string(),
        });
        let expected = json!({
            "x4_D": "16", "N_4_2": "14", "one_one_recursion_k4": "8", "one_one_enumeration_k4": "6",
            "x3_D": "1", "N_3_2": "1",
        });
        let pass = value == expected && breakdown.len() == 5;
        Ok((
            pass,
            value,
            expected,
            "values computed; agreement not required".into(),
            json!({
                "one_one_terms_k4": breakdown,
                "one_one_as_printed_k4": oo4_printed.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "one_one_sites_k4": site_json,
                "d_coefficient_table": d_coefficient_table(8)?,
            }),
        ))
    })
}

/// `[x^k]D` next to the enumerated `N_{k,k-2}` for `k <= kmax`.
pub fn d_coefficient_table(kmax: usize) -> Result<Value> {
    let d = named_series("D", kmax + 1, None)?;
    (0..=kmax)
        .map(|k| {
            let oracle = if k < 2 { Rational::zero() } else { moment_polynomial(k)?.coefficient(2) };
            Ok(json!({"k": k, "closed_form": d.coeff(k).to_string(), "oracle": oracle.to_string(),
                "agree": d.coeff(k) == oracle}))
        })
        .collect::<Result<Vec<_>>>()
        .map(Value::from)
}

/// Hat moment tables against the moments of both numerator signs.
pub fn hat_moment_table(order: usize) -> Result<Value> {
    let (bh, dh_closed) = hat_coefficients(order, DSource::ClosedForm)?;
    let (_, dh_oracle) = hat_coefficients(order, DSource::Oracle)?;
    let rows: Vec<Value> = (0..order)
        .map(|k| {
            let mom = |f: DensityForm| density_moments_exact(f.numerator().expect("polynomial"), k);
            Ok(json!({
                "k": k,
                "b_hat": bh.values[k].to_string(),
                "sigma_hat1_positive": mom(DensityForm::sigma_hat1(Sign::Positive))?.to_string(),
                "sigma_hat1_printed": mom(DensityForm::sigma_hat1(Sign::Printed))?.to_string(),
                "d_hat_closed_form": dh_closed.values[k].to_string(),
                "d_hat_oracle": dh_oracle.values[k].to_string(),
                "sigma_hat2_positive": mom(DensityForm::sigma_hat2(Sign::Positive))?.to_string(),
                "sigma_hat2_printed": mom(DensityForm::sigma_hat2(Sign::Printed))?.to_string(),
            }))
        })
        .collect::<Result<_>>()?;
    Ok(Value::from(rows))
}

pub fn density_moment_duality() -> Result<Outcome> {
    timed(6, "density-moment duality and numerator signs", || {
        let s1 = named_series("S1", 13, None)?;
        let q1 = DensityForm::sigma1();
        let q1 = q1.numerator().expect("polynomial");
        let s1_ok = (0..=12).all(|k| density_moments_exact(q1, k).map(|m| m == s1.coeff(k)).unwrap_or(false));
        let forms = [DensityForm::sigma1(), DensityForm::sigma_hat1(Sign::Positive), DensityForm::sigma_hat2(Sign::Positive)];
        let mass_zero = forms
            .iter()
            .all(|f| density_moments_exact(f.numerator().expect("polynomial"), 0).map(|m| m.is_zero()).unwrap_or(false));
        let (bh, dh) = hat_coefficients(13, DSource::ClosedForm)?;
        let matches = |sign: Sign, which: u8, kmax: usize| -> Result<bool> {
            let f = if which == 1 { DensityForm::sigma_hat1(sign) } else { DensityForm::sigma_hat2(sign) };
            let table = if which == 1 { &bh } else { &dh };
            for k in 0..=kmax {
                if density_moments_exact(f.numerator().expect("polynomial"), k)? != table.values[k] {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let b_pos = matches(Sign::Positive, 1, 12)?;
        let b_neg = matches(Sign::Printed, 1, 12)?;
        let d_pos = matches(Sign::Positive, 2, 3)?;
        let d_neg = matches(Sign::Printed, 2, 3)?;
        let value = json!({
            "sigma1_moments_match_S1": s1_ok, "mass_zero": mass_zero,
            "hat1_positive_matches": b_pos, "hat1_printed_matches": b_neg,
            "hat2_positive_matches": d_pos, "hat2_printed_matches": d_neg,
        });
        let expected = json!({
            "sigma1_moments_match_S1": true, "mass_zero": true,
            "hat1_positive_matches": true, "hat1_printed_matches": false,
            "hat2_positive_matches": true, "hat2_printed_matches": false,
        });
        Ok((value == expected, value, expected, "exact".into(), json!({"hat_moment_table": hat_moment_table(9)?})))
    })
}

pub fn stieltjes_numerics(seed: u64) -> Result<Outcome> {
    timed(7, "Stieltjes transform numerics", || {
        let sigma1 = DensityForm::sigma1();
        let mut recover_err = 0.0f64;
        for i in -19..=19 {
            let x = i as f64 / 10.0;
            let got = recover_density(Transform::H1, x, 1e-8)?;
            let want = crate::measures::density_eval(&sigma1, x)?;
            recover_err = recover_err.max((got - want).abs());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut quad_err = 0.0f64;
        let mut eq_err = 0.0f64;
        for _ in 0..100 {
            let z = loop {
                let z = Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(-3.0..3.0));
                if z.im.abs() > 1e-3 || z.re.abs() > 2.001 {
                    break z;
                }
            };
            let h = stieltjes_eval(Transform::H, z)?;
            quad_err = quad_err.max((h * h - z * h + 1.0).norm());
            let s = sqrt_z2m4(z);
            let printed = (z - s).powu(4) / (16.0 * s);
            let closed = h.powu(5) / (1.0 - h * h);
            eq_err = eq_err.max((printed - closed).norm() / closed.norm().max(1.0));
        }
        let pass = recover_err <= 1e-5 && quad_err <= 1e-12 && eq_err <= 1e-12;
        Ok((
            pass,
            json!({"recover_max_err": recover_err, "quadratic_max_residual": quad_err, "h1_identity_max_err": eq_err}),
            json!({"recover_max_err": 0.0, "quadratic_max_residual": 0.0, "h1_identity_max_err": 0.0}),
            "1e-5, 1e-12, 1e-12".into(),
            json!({"grid": "-1.9..1.9 step 0.1", "random_points": 100}),
        ))
    })
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (m, (var / n).sqrt())
}

pub fn monte_carlo_moments(cfg: &VerifyConfig) -> Result<Outcome> {
    timed(8, "Erdos-Renyi empirical moments", || {
        let (n, reps) = if cfg.quick { (400, 4) } else { (3000, 20) };
        let c = r(20, 1);
        let spectra = simulate(GraphModel::ErdosRenyi, n, &c, reps, cfg.seed, cfg.dense_limit, cfg.exec)?;
        let per: Vec<Vec<f64>> = spectra
            .iter()
            .map(|s| crate::graphs::empirical_moments(s, 6))
            .collect::<Result<_>>()?;
        let col = |j: usize| per.iter().map(|m| m[j]).collect::<Vec<_>>();
        let (m4, se4) = mean_and_se(&col(4));
        let (m6, se6) = mean_and_se(&col(6));
        let (m3, se3) = mean_and_se(&col(3));
        let (m5, se5) = mean_and_se(&col(5));
        let m6_theory = 5.0 + 6.0 / 20.0 + 1.0 / 400.0;
        let odd_ok = m3.abs() <= 3.0 * se3 + 1e-12 && m5.abs() <= 3.0 * se5 + 1e-12;
        let pass = !cfg.quick && (m4 - 2.05).abs() <= 0.02 && (m6 - m6_theory).abs() <= 0.1 && odd_ok;
        Ok((
            pass,
            json!({"m4": m4, "m6": m6, "m3": m3, "m5": m5}),
            json!({"m4": 2.05, "m6": m6_theory, "m3": 0.0, "m5": 0.0}),
            "m4 +-0.02, m6 +-0.1, odd within 3 SE".into(),
            json!({
                "n": n, "reps": reps, "seed": cfg.seed, "scaled_down": cfg.quick,
                "standard_errors": {"m3": se3, "m4": se4, "m5": se5, "m6": se6},
                "finite_n_expected_m4": erdos_renyi_m4(n, &c).to_f64(),
                "mean_moments": mean_moments(&spectra, 6)?,
            }),
        ))
    })
}

pub fn kesten_mckay_check(cfg: &VerifyConfig) -> Result<Outcome> {
    timed(9, "20-regular histogram vs Kesten-McKay", || {
        let n = if cfg.quick { 600 } else { 3000 };
        let c = r(20, 1);
        let spectra = simulate(GraphModel::Regular, n, &c, 1, cfg.seed, cfg.dense_limit, cfg.exec)?;
        let (_, l1, corr) = compare_from_spectra(Figure::KestenMcKay, &spectra, &c, Histogram::default_grid())?;
        Ok((
            !cfg.quick && l1 <= 0.08,
            json!(l1),
            json!(0.0),
            "L1 <= 0.08".into(),
            json!({"n": n, "seed": cfg.seed, "correlation": corr, "scaled_down": cfg.quick}),
        ))
    })
}

/// Figure comparisons of the desk-scale experiment, with their CSVs.
#[derive(Debug, Clone, Serialize)]
pub struct FigureRun {
    pub summary: CompareSummary,
    pub csv: String,
}

pub fn figure_pipeline(cfg: &VerifyConfig) -> Result<(Outcome, Vec<FigureRun>)> {
    let mut runs = Vec::new();
    let out = timed(10, "figure pipeline at desk scale", || {
        let (n, reps) = if cfg.quick { (500, 4) } else { (5000, 40) };
        let c = r(20, 1);
        let start = Instant::now();
        let spectra = simulate(GraphModel::ErdosRenyi, n, &c, reps, cfg.seed, cfg.dense_limit, cfg.exec)?;
        let moments = mean_moments(&spectra, 8)?;
        let mut corr4r = f64::NAN;
        for fig in [Figure::F4R, Figure::F5R] {
            let grid = Histogram::default_grid();
            let bins = grid.bins();
            let (rows, l1, correlation) = compare_from_spectra(fig, &spectra, &c, grid)?;
            if fig == Figure::F4R {
                corr4r = correlation;
            }
            let report = crate::graphs::CompareReport {
                rows,
                summary: CompareSummary {
                    figure: fig.to_string(),
                    model: GraphModel::ErdosRenyi.to_string(),
                    n,
                    c: c.clone(),
                    reps,
                    seed: cfg.seed,
                    bins,
                    range: DEFAULT_RANGE,
                    l1,
                    correlation,
                    moments: moments.clone(),
                    runtime_ms: start.elapsed().as_millis(),
                },
            };
            runs.push(FigureRun { csv: report.to_csv(), summary: report.summary });
        }
        let emitted = runs.len() == 2 && runs.iter().all(|r| r.csv.lines().count() > 1);
        Ok((
            !cfg.quick && corr4r >= 0.5 && emitted,
            json!({"correlation_4R": corr4r, "figure_5R_emitted": emitted}),
            json!({"correlation_4R": 0.5, "figure_5R_emitted": true}),
            "correlation >= 0.5; 5R not asserted".into(),
            json!({"n": n, "reps": reps, "seed": cfg.seed, "scaled_down": cfg.quick,
                "summaries": runs.iter().map(|r| &r.summary).collect::<Vec<_>>()}),
        ))
    })?;
    Ok((out, runs))
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub config: VerifyConfig,
    pub criteria: Vec<Outcome>,
    pub d_coefficient_table: Value,
    pub hat_moment_table: Value,
    #[serde(skip)]
    pub figures: Vec<FigureRun>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }
}

/// The exact criteria 1-7, which need no random input beyond a seed.
pub fn exact_criteria(seed: u64) -> Result<Vec<Outcome>> {
    Ok(vec![
        series_identities()?,
        first_order_oracle()?,
        recursion_cross_checks()?,
        expansion_order()?,
        second_order_discrepancy()?,
        density_moment_duality()?,
        stieltjes_numerics(seed)?,
    ])
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Report> {
    let mut criteria = exact_criteria(cfg.seed)?;
    criteria.push(monte_carlo_moments(cfg)?);
    criteria.push(kesten_mckay_check(cfg)?);
    let (fig, figures) = figure_pipeline(cfg)?;
    criteria.push(fig);
    Ok(Report {
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        criteria,
        d_coefficient_table: d_coefficient_table(8)?,
        hat_moment_table: hat_moment_table(9)?,
        figures,
    })
}
