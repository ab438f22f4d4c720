use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diluted_spectra::graphs::{simulate, GraphModel};
use diluted_spectra::walks::build_census;
use diluted_spectra::{Exec, Rational};

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    for k in [6usize, 7] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, k), &k, |b, &k| {
                b.iter(|| build_census(k, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn replicates(c: &mut Criterion) {
    let mut g = c.benchmark_group("replicates");
    g.sample_size(10);
    let deg = Rational::from_int(10);
    for n in [200usize, 500] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| simulate(GraphModel::ErdosRenyi, n, &deg, 8, 1, 4000, exec).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, census, replicates);
criterion_main!(benches);
