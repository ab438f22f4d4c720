//! Finite random graphs, their rescaled spectra, and histogram comparisons
//! against the limiting densities.
//!
//! Replicate `i` of a run with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(splitmix64(s + i * 0x9E37_79B9_7F4A_7C15))`, so
//! results do not depend on scheduling or thread count.

use std::time::Instant;

use faer::{Mat, Side};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::measures::{bin_mass, dilate, DensityForm, Sign};
use crate::par::Exec;
use crate::rational::Rational;

pub const DEFAULT_DENSE_LIMIT: usize = 4000;
pub const DEFAULT_BIN_WIDTH: f64 = 0.05;
pub const DEFAULT_RANGE: (f64, f64) = (-3.5, 3.5);

/// Below this edge probability Erdos-Renyi sampling skips geometrically
/// over non-edges instead of flipping a coin per pair.
pub const SKIP_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphModel {
    ErdosRenyi,
    Configuration,
    Regular,
}

impl std::str::FromStr for GraphModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erdos_renyi" | "er" | "poisson" => Ok(GraphModel::ErdosRenyi),
            "configuration" => Ok(GraphModel::Configuration),
            "regular" => Ok(GraphModel::Regular),
            other => Err(usage(format!(
                "unknown graph model {other:?}; known: erdos_renyi, configuration, regular"
            ))),
        }
    }
}

impl std::fmt::Display for GraphModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GraphModel::ErdosRenyi => "erdos_renyi",
            GraphModel::Configuration => "configuration",
            GraphModel::Regular => "regular",
        })
    }
}

/// Degree law for the configuration model.
pub trait DegreeSampler: Send + Sync {
    fn sample(&self, rng: &mut dyn RngCore) -> usize;
}

pub struct ConstantDegree(pub usize);

impl DegreeSampler for ConstantDegree {
    fn sample(&self, _rng: &mut dyn RngCore) -> usize {
        self.0
    }
}

pub struct PoissonDegree(pub f64);

impl DegreeSampler for PoissonDegree {
    fn sample(&self, rng: &mut dyn RngCore) -> usize {
        Poisson::new(self.0).expect("positive mean").sample(rng) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSample {
    pub n: usize,
    /// Unordered pairs `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(u32, u32)>,
    pub c: Rational,
    pub model: GraphModel,
    pub seed: u64,
    /// Whether the odd degree sum forced a bump of the last degree.
    pub parity_adjusted: bool,
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `i` under master seed `master`.
pub fn replicate_seed(master: u64, i: u64) -> u64 {
    splitmix64(master.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn erdos_renyi(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    if p >= SKIP_THRESHOLD {
        for j in 1..n {
            for i in 0..j {
                if rng.random::<f64>() < p {
                    edges.push((i as u32, j as u32));
                }
            }
        }
    } else {
        // Pairs in the order (0,1), (0,2), (1,2), (0,3), ...; jump over
        // geometrically distributed runs of non-edges.
        let log_q = (1.0 - p).ln();
        let (mut v, mut w): (usize, i64) = (1, -1);
        while v < n {
            let r: f64 = rng.random();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as u32, v as u32));
            }
        }
    }
    edges.sort_unstable();
    edges
}

fn configuration(
    n: usize,
    sampler: &dyn DegreeSampler,
    rng: &mut ChaCha8Rng,
) -> (Vec<(u32, u32)>, bool) {
    let mut degrees: Vec<usize> = (0..n).map(|_| sampler.sample(rng)).collect();
    let adjusted = degrees.iter().sum::<usize>() % 2 == 1;
    if adjusted {
        degrees[n - 1] += 1;
    }
    let mut half: Vec<u32> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat(v as u32).take(d))
        .collect();
    half.shuffle(rng);
    let mut edges: Vec<(u32, u32)> = half
        .chunks_exact(2)
        .filter(|p| p[0] != p[1])
        .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    (edges, adjusted)
}

/// Draw one graph. `Configuration` needs a degree sampler; `Regular` uses
/// the constant sampler `c`.
pub fn gen_graph(
    model: GraphModel,
    n: usize,
    c: &Rational,
    seed: u64,
    sampler: Option<&dyn DegreeSampler>,
) -> Result<GraphSample> {
    if n < 2 {
        return Err(usage("n must be at least 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (edges, parity_adjusted) = match model {
        GraphModel::ErdosRenyi => {
            let nf = Rational::from_int(n as i64);
            if !c.is_positive() || c >= &nf {
                return Err(usage("erdos_renyi needs 0 < c < n"));
            }
            (erdos_renyi(n, c.to_f64() / n as f64, &mut rng), false)
        }
        GraphModel::Configuration => {
            let s = sampler.ok_or_else(|| usage("configuration model needs a degree sampler"))?;
            configuration(n, s, &mut rng)
        }
        GraphModel::Regular => {
            let d = c
                .to_i64()
                .filter(|&d| d >= 1 && (d as usize) < n)
                .ok_or_else(|| usage("regular graphs need an integer degree 1 <= c < n"))?;
            configuration(n, &ConstantDegree(d as usize), &mut rng)
        }
    };
    Ok(GraphSample { n, edges, c: c.clone(), model, seed, parity_adjusted })
}

/// Sorted eigenvalues of `A / sqrt(c)`.
pub fn spectrum(g: &GraphSample, dense_limit: usize) -> Result<Vec<f64>> {
    if g.n > dense_limit {
        return Err(Error::Resource(format!(
            "n = {} exceeds the dense eigensolver limit {dense_limit}; raise --dense-limit or use exact moments",
            g.n
        )));
    }
    let w = 1.0 / g.c.to_f64().sqrt();
    let mut a = Mat::<f64>::zeros(g.n, g.n);
    for &(i, j) in &g.edges {
        a[(i as usize, j as usize)] = w;
        a[(j as usize, i as usize)] = w;
    }
    let mut eig = a
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Domain(format!("eigensolver failed: {e:?}")))?;
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let (mut s, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            comp += (s - t) + x;
        } else {
            comp += (x - t) + s;
        }
        s = t;
    }
    s + comp
}

/// `m_j = (1/n) sum lambda^j` for `j = 0..=kmax`.
pub fn empirical_moments(eigs: &[f64], kmax: usize) -> Result<Vec<f64>> {
    if kmax > 12 {
        return Err(usage("kmax must be at most 12"));
    }
    if eigs.is_empty() {
        return Err(usage("empty spectrum"));
    }
    let n = eigs.len() as f64;
    Ok((0..=kmax)
        .map(|j| compensated_sum(eigs.iter().map(|x| x.powi(j as i32))) / n)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Density,
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub width: f64,
    pub counts: Vec<u64>,
    /// Number of eigenvalues offered, in range or not.
    pub total: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
            return Err(usage("histogram needs bins >= 1 and hi > lo"));
        }
        Ok(Histogram { lo, width: (hi - lo) / bins as f64, counts: vec![0; bins], total: 0 })
    }

    /// The default grid: width 0.05 on [-3.5, 3.5].
    pub fn default_grid() -> Self {
        let bins = ((DEFAULT_RANGE.1 - DEFAULT_RANGE.0) / DEFAULT_BIN_WIDTH).round() as usize;
        Histogram::new(DEFAULT_RANGE.0, DEFAULT_RANGE.1, bins).expect("valid default grid")
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        (self.lo + i as f64 * self.width, self.lo + (i + 1) as f64 * self.width)
    }

    pub fn add(&mut self, xs: &[f64]) {
        for &x in xs {
            self.total += 1;
            let pos = (x - self.lo) / self.width;
            if pos >= 0.0 && pos < self.bins() as f64 {
                self.counts[pos as usize] += 1;
            }
        }
    }

    pub fn values(&self, mode: Normalization) -> Vec<f64> {
        match mode {
            Normalization::Raw => self.counts.iter().map(|&c| c as f64).collect(),
            Normalization::Density => {
                let denom = self.total.max(1) as f64 * self.width;
                self.counts.iter().map(|&c| c as f64 / denom).collect()
            }
        }
    }
}

/// Spectra of `reps` independent replicates.
pub fn simulate(
    model: GraphModel,
    n: usize,
    c: &Rational,
    reps: usize,
    master_seed: u64,
    dense_limit: usize,
    exec: Exec,
) -> Result<Vec<Vec<f64>>> {
    if reps == 0 {
        return Err(usage("reps must be at least 1"));
    }
    if n > dense_limit {
        return Err(Error::Resource(format!(
            "n = {n} exceeds the dense eigensolver limit {dense_limit}"
        )));
    }
    if exec.is_parallel() {
        faer::set_global_parallelism(faer::Par::Seq);
    }
    let sampler = PoissonDegree(c.to_f64());
    let out = exec.map_range(reps, |i| {
        let seed = replicate_seed(master_seed, i as u64);
        let s: Option<&dyn DegreeSampler> = match model {
            GraphModel::Configuration => Some(&sampler),
            _ => None,
        };
        let g = gen_graph(model, n, c, seed, s)?;
        spectrum(&g, dense_limit)
    });
    out.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Figure {
    #[serde(rename = "4L")]
    F4L,
    #[serde(rename = "4R")]
    F4R,
    #[serde(rename = "5L")]
    F5L,
    #[serde(rename = "5R")]
    F5R,
    /// Histogram against the rescaled Kesten-McKay density.
    #[serde(rename = "KM")]
    KestenMcKay,
}

impl std::str::FromStr for Figure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4L" => Ok(Figure::F4L),
            "4R" => Ok(Figure::F4R),
            "5L" => Ok(Figure::F5L),
            "5R" => Ok(Figure::F5R),
            "KM" | "km" => Ok(Figure::KestenMcKay),
            other => Err(usage(format!("unknown figure {other:?}; known: 4L, 4R, 5L, 5R, KM"))),
        }
    }
}

impl std::fmt::Display for Figure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Figure::F4L => "4L",
            Figure::F4R => "4R",
            Figure::F5L => "5L",
            Figure::F5R => "5R",
            Figure::KestenMcKay => "KM",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub bin_left: f64,
    pub bin_right: f64,
    pub empirical: f64,
    pub theory: f64,
    pub diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareSummary {
    pub figure: String,
    pub model: String,
    pub n: usize,
    pub c: Rational,
    pub reps: usize,
    pub seed: u64,
    pub bins: usize,
    pub range: (f64, f64),
    pub l1: f64,
    pub correlation: f64,
    /// Replicate-averaged empirical moments `m_0..m_8`.
    pub moments: Vec<f64>,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub summary: CompareSummary,
}

impl CompareReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,empirical,theory,diff\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{:.6},{:.6},{:.10e},{:.10e},{:.10e}\n",
                r.bin_left, r.bin_right, r.empirical, r.theory, r.diff
            ));
        }
        out
    }
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = compensated_sum(a.iter().copied()) / n;
    let mb = compensated_sum(b.iter().copied()) / n;
    let cov = compensated_sum(a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)));
    let va = compensated_sum(a.iter().map(|x| (x - ma) * (x - ma)));
    let vb = compensated_sum(b.iter().map(|y| (y - mb) * (y - mb)));
    if va == 0.0 || vb == 0.0 {
        0.0
    } else {
        cov / (va.sqrt() * vb.sqrt())
    }
}

fn bin_average(form: &DensityForm, h: &Histogram, i: usize) -> f64 {
    let (a, b) = h.edges(i);
    bin_mass(form, a, b) / h.width
}

/// Dilation `1 + 1/(2c)`.
pub fn hat_dilation(c: &Rational) -> Rational {
    Rational::one() + (Rational::from_int(2) * c).recip().expect("c > 0")
}

/// Per-bin comparison of precomputed spectra with the figure's theory curve.
pub fn compare_from_spectra(
    figure: Figure,
    spectra: &[Vec<f64>],
    c: &Rational,
    grid: Histogram,
) -> Result<(Vec<CompareRow>, f64, f64)> {
    let mut h = grid;
    for s in spectra {
        h.add(s);
    }
    let emp = h.values(Normalization::Density);
    let cf = c.to_f64();
    let lam = hat_dilation(c);
    let sigma = DensityForm::sigma();
    let sigma_d = dilate(&sigma, &lam)?;
    let hat1 = dilate(&DensityForm::sigma_hat1(Sign::Positive), &lam)?;
    let hat2 = dilate(&DensityForm::sigma_hat2(Sign::Positive), &lam)?;
    let mut rows = Vec::with_capacity(h.bins());
    for (i, &e) in emp.iter().enumerate() {
        let avg = |f: &DensityForm| bin_average(f, &h, i);
        let (empirical, theory) = match figure {
            Figure::F4L => (e, avg(&sigma)),
            Figure::F4R => (cf * (e - avg(&sigma)), avg(&DensityForm::sigma1())),
            Figure::F5L => (cf * (e - avg(&sigma_d)), avg(&hat1)),
            Figure::F5R => (cf * cf * (e - avg(&sigma_d) - avg(&hat1) / cf), avg(&hat2)),
            Figure::KestenMcKay => (e, avg(&DensityForm::kesten_mckay(c.clone(), true)?)),
        };
        let (left, right) = h.edges(i);
        rows.push(CompareRow { bin_left: left, bin_right: right, empirical, theory, diff: empirical - theory });
    }
    let l1 = compensated_sum(rows.iter().map(|r| r.diff.abs())) * h.width;
    let emp_col: Vec<f64> = rows.iter().map(|r| r.empirical).collect();
    let th_col: Vec<f64> = rows.iter().map(|r| r.theory).collect();
    Ok((rows, l1, pearson(&emp_col, &th_col)))
}

/// Options for [`compare_report`].
#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub figure: Figure,
    pub model: GraphModel,
    pub n: usize,
    pub c: Rational,
    pub reps: usize,
    pub seed: u64,
    pub bins: Option<usize>,
    pub dense_limit: usize,
    pub exec: Exec,
}

/// Simulate and compare in one go.
pub fn compare_report(cfg: &CompareConfig) -> Result<CompareReport> {
    let start = Instant::now();
    let spectra = simulate(cfg.model, cfg.n, &cfg.c, cfg.reps, cfg.seed, cfg.dense_limit, cfg.exec)?;
    let grid = match cfg.bins {
        Some(b) => Histogram::new(DEFAULT_RANGE.0, DEFAULT_RANGE.1, b)?,
        None => Histogram::default_grid(),
    };
    let bins = grid.bins();
    let (rows, l1, correlation) = compare_from_spectra(cfg.figure, &spectra, &cfg.c, grid)?;
    let moments = mean_moments(&spectra, 8)?;
    Ok(CompareReport {
        rows,
        summary: CompareSummary {
            figure: cfg.figure.to_string(),
            model: cfg.model.to_string(),
            n: cfg.n,
            c: cfg.c.clone(),
            reps: cfg.reps,
            seed: cfg.seed,
            bins,
            range: DEFAULT_RANGE,
            l1,
            correlation,
            moments,
            runtime_ms: start.elapsed().as_millis(),
        },
    })
}

/// Per-replicate moments `m_0..=m_kmax`, averaged over replicates.
pub fn mean_moments(spectra: &[Vec<f64>], kmax: usize) -> Result<Vec<f64>> {
    let per: Vec<Vec<f64>> = spectra.iter().map(|s| empirical_moments(s, kmax)).collect::<Result<_>>()?;
    let reps = per.len() as f64;
    Ok((0..=kmax)
        .map(|j| compensated_sum(per.iter().map(|m| m[j])) / reps)
        .collect())
}

/// Exact `E[m_4]` of `A / sqrt(c)` for `G(n, c/n)` at finite `n`:
/// `(n(n-1)p + 2n(n-1)(n-2)p^2 + n(n-1)(n-2)(n-3)p^4) / (n c^2)`.
pub fn erdos_renyi_m4(n: usize, c: &Rational) -> Rational {
    let nn = Rational::from_int(n as i64);
    let p = c / &nn;
    let f = |j: i64| Rational::from_int(n as i64 - j);
    let n1 = &nn * &f(1);
    let n2 = &n1 * &f(2);
    let n3 = &n2 * &f(3);
    let walks = &n1 * &p + Rational::from_int(2) * &n2 * &p.pow(2) + &n3 * &p.pow(4);
    walks / (nn * c.pow(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn triangle_spectrum() {
        let g = GraphSample {
            n: 3,
            edges: vec![(0, 1), (0, 2), (1, 2)],
            c: r(2, 1),
            model: GraphModel::ErdosRenyi,
            seed: 0,
            parity_adjusted: false,
        };
        let ev = spectrum(&g, 10).unwrap();
        let s = 2f64.sqrt();
        let want = [-1.0 / s, -1.0 / s, 2.0 / s];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(spectrum(&g, 2), Err(Error::Resource(_))));
    }

    #[test]
    fn trace_identities() {
        let c = r(5, 1);
        let g = gen_graph(GraphModel::ErdosRenyi, 200, &c, 7, None).unwrap();
        let ev = spectrum(&g, 1000).unwrap();
        let m = empirical_moments(&ev, 2).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-15);
        assert!(m[1].abs() * 200.0 < 1e-8 * 200.0);
        let sum_sq = m[2] * 200.0;
        assert!((sum_sq - 2.0 * g.edges.len() as f64 / 5.0).abs() < 1e-6);
    }

    #[test]
    fn er_mean_edge_count() {
        let c = r(2, 1);
        let total: usize = (0..2000)
            .map(|s| gen_graph(GraphModel::ErdosRenyi, 4, &c, s, None).unwrap().edges.len())
            .sum();
        let mean = total as f64 / 2000.0;
        assert!((mean - 3.0).abs() < 0.15, "mean {mean}");
    }

    #[test]
    fn skipping_matches_bernoulli_in_distribution() {
        let n = 400;
        let p = 0.05;
        let reps = 200;
        let counts = |skip: bool| -> (f64, f64) {
            let xs: Vec<f64> = (0..reps)
                .map(|s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(1000 + s);
                    if skip {
                        erdos_renyi(n, p, &mut rng).len() as f64
                    } else {
                        let mut e = 0;
                        for j in 1..n {
                            for _ in 0..j {
                                if rng.random::<f64>() < p {
                                    e += 1;
                                }
                            }
                        }
                        e as f64
                    }
                })
                .collect();
            let m = xs.iter().sum::<f64>() / reps as f64;
            let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (reps as f64 - 1.0);
            (m, v)
        };
        let pairs = (n * (n - 1) / 2) as f64;
        let (m, v) = counts(true);
        let (mb, _) = counts(false);
        let sd = (pairs * p * (1.0 - p)).sqrt();
        assert!((m - pairs * p).abs() < 4.0 * sd / (reps as f64).sqrt());
        assert!((mb - pairs * p).abs() < 4.0 * sd / (reps as f64).sqrt());
        assert!((v / (pairs * p * (1.0 - p)) - 1.0).abs() < 0.35);
    }

    #[test]
    fn configuration_simple_and_parity() {
        for seed in 0..50 {
            let g = gen_graph(GraphModel::Regular, 4, &r(3, 1), seed, None).unwrap();
            let mut deg = [0; 4];
            for &(i, j) in &g.edges {
                assert!(i < j);
                deg[i as usize] += 1;
                deg[j as usize] += 1;
            }
            assert!(deg.iter().all(|&d| d <= 3));
            assert!(!g.parity_adjusted);
            let mut e = g.edges.clone();
            e.dedup();
            assert_eq!(e.len(), g.edges.len());
        }
        let g = gen_graph(GraphModel::Configuration, 6, &r(2, 1), 3, Some(&ConstantDegree(2))).unwrap();
        assert!(!g.parity_adjusted);
        let g = gen_graph(GraphModel::Regular, 5, &r(3, 1), 3, None).unwrap();
        assert!(g.parity_adjusted);
        assert!(gen_graph(GraphModel::Configuration, 6, &r(2, 1), 3, None).is_err());
        assert!(gen_graph(GraphModel::Regular, 4, &r(5, 2), 3, None).is_err());
        assert!(gen_graph(GraphModel::ErdosRenyi, 4, &r(4, 1), 3, None).is_err());
    }

    #[test]
    fn deterministic_replicates() {
        let c = r(4, 1);
        let a = simulate(GraphModel::ErdosRenyi, 100, &c, 3, 42, 4000, Exec::Parallel).unwrap();
        let b = simulate(GraphModel::ErdosRenyi, 100, &c, 3, 42, 4000, Exec::Sequential).unwrap();
        assert_eq!(a, b);
        assert_ne!(replicate_seed(42, 0), replicate_seed(42, 1));
    }

    #[test]
    fn histogram_modes() {
        let mut h = Histogram::new(-1.0, 1.0, 4).unwrap();
        h.add(&[-0.9, -0.1, 0.1, 0.2, 5.0]);
        assert_eq!(h.counts, vec![1, 1, 2, 0]);
        let d = h.values(Normalization::Density);
        assert!((d.iter().sum::<f64>() * h.width - 0.8).abs() < 1e-12);
        assert_eq!(Histogram::default_grid().bins(), 140);
    }

    #[test]
    fn finite_size_m4() {
        let m4 = erdos_renyi_m4(3000, &r(20, 1)).to_f64();
        assert!((m4 - 2.1806).abs() < 1e-3, "{m4}");
        let big = erdos_renyi_m4(10_000_000, &r(20, 1)).to_f64();
        assert!((big - 2.05).abs() < 1e-3);
    }
}
