use diluted_spectra::graphs::{
    compare_from_spectra, empirical_moments, erdos_renyi_m4, gen_graph, simulate, spectrum, ConstantDegree,
    DegreeSampler, Figure, GraphModel, Histogram,
};
use diluted_spectra::{Exec, Rational};
use proptest::prelude::*;

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[test]
fn erdos_renyi_moments_match_finite_size_expectations() {
    let (n, c) = (300usize, Rational::from_int(5));
    let spectra = simulate(GraphModel::ErdosRenyi, n, &c, 40, 11, 4000, Exec::Parallel).unwrap();
    let per: Vec<Vec<f64>> = spectra.iter().map(|s| empirical_moments(s, 4).unwrap()).collect();
    let col = |j: usize| per.iter().map(|m| m[j]).collect::<Vec<_>>();
    let (m4, se4) = mean_se(&col(4));
    let want4 = erdos_renyi_m4(n, &c).to_f64();
    assert!((m4 - want4).abs() < 4.0 * se4, "m4 {m4} vs {want4} (se {se4})");
    // E tr A^3 = n(n-1)(n-2) p^3: triangles keep m_3 away from zero at any finite n.
    let (nf, cf) = (n as f64, 5.0f64);
    let want3 = (nf - 1.0) * (nf - 2.0) * (cf / nf).powi(3) / cf.powf(1.5);
    let (m3, se3) = mean_se(&col(3));
    assert!((m3 - want3).abs() < 4.0 * se3, "m3 {m3} vs {want3} (se {se3})");
}

#[test]
fn three_regular_matches_kesten_mckay() {
    let c = Rational::from_int(3);
    let spectra = simulate(GraphModel::Regular, 3000, &c, 1, 5, 4000, Exec::Parallel).unwrap();
    let (_, l1, _) = compare_from_spectra(Figure::KestenMcKay, &spectra, &c, Histogram::default_grid()).unwrap();
    assert!(l1 <= 0.08, "L1 {l1}");
}

#[test]
fn semicircle_histogram_at_moderate_degree() {
    let c = Rational::from_int(20);
    let spectra = simulate(GraphModel::ErdosRenyi, 1500, &c, 4, 3, 4000, Exec::Parallel).unwrap();
    let (rows, l1, corr) = compare_from_spectra(Figure::F4L, &spectra, &c, Histogram::default_grid()).unwrap();
    assert_eq!(rows.len(), 140);
    assert!(l1 < 0.15, "L1 {l1}");
    assert!(corr > 0.95, "corr {corr}");
}

#[test]
fn spectrum_is_deterministic() {
    let c = Rational::new(7, 2);
    for model in [GraphModel::ErdosRenyi, GraphModel::Regular] {
        let c = if model == GraphModel::Regular { Rational::from_int(4) } else { c.clone() };
        let a = spectrum(&gen_graph(model, 150, &c, 99, None).unwrap(), 4000).unwrap();
        let b = spectrum(&gen_graph(model, 150, &c, 99, None).unwrap(), 4000).unwrap();
        assert_eq!(a, b);
    }
}

struct Table(Vec<usize>, std::sync::atomic::AtomicUsize);

impl DegreeSampler for Table {
    fn sample(&self, _rng: &mut dyn rand::RngCore) -> usize {
        let i = self.1.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        self.0[i % self.0.len()]
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn configuration_graphs_are_simple(degrees in proptest::collection::vec(0usize..6, 2..40), seed in any::<u64>()) {
        let n = degrees.len();
        let odd = degrees.iter().sum::<usize>() % 2 == 1;
        let sampler = Table(degrees, 0.into());
        let g = gen_graph(GraphModel::Configuration, n, &Rational::from_int(2), seed, Some(&sampler)).unwrap();
        prop_assert_eq!(g.parity_adjusted, odd);
        let mut seen = std::collections::HashSet::new();
        for &(i, j) in &g.edges {
            prop_assert!(i < j);
            prop_assert!((j as usize) < n);
            prop_assert!(seen.insert((i, j)));
        }
    }

    #[test]
    fn constant_degree_parity(n in 2usize..30, d in 1usize..5, seed in any::<u64>()) {
        let g = gen_graph(GraphModel::Configuration, n, &Rational::from_int(2), seed, Some(&ConstantDegree(d))).unwrap();
        prop_assert_eq!(g.parity_adjusted, (n * d) % 2 == 1);
        let mut deg = vec![0usize; n];
        for &(i, j) in &g.edges {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        let cap = |v: usize| if g.parity_adjusted && v == n - 1 { d + 1 } else { d };
        prop_assert!(deg.iter().enumerate().all(|(v, &x)| x <= cap(v)));
    }
}
