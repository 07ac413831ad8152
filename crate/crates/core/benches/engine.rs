//! Sequential vs data-parallel execution of the two fan-out points:
//! verifier cases, and the per-slot work inside an engine run.
//!
//! Build with `--no-default-features` to compile the rayon path out
//! entirely; `Parallelism::Parallel` then falls back to the plain loop.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use kohnlab::engine::{run, EngineConfig, SpecialDomain};
use kohnlab::par::Parallelism;
use kohnlab::verifiers::{run_suite, Suite, SuiteConfig};

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for suite in [Suite::I5, Suite::Iii5, Suite::A4] {
        for (label, mode) in MODES {
            let config = SuiteConfig {
                cases: Some(16),
                parallelism: mode,
                ..SuiteConfig::with_seed(0)
            };
            group.bench_with_input(BenchmarkId::new(suite.name(), label), &config, |b, config| {
                b.iter(|| run_suite(suite, config))
            });
        }
    }
    group.finish();
}

fn engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine");
    group.sample_size(10);
    for (name, n, gens) in [
        ("z1^3,z2^4,z1z2^2", 2, &["z1^3", "z2^4", "z1*z2^2"][..]),
        ("z1^2,z2^3,z3^4", 3, &["z1^2", "z2^3", "z3^4"][..]),
    ] {
        let domain = SpecialDomain::parse(n, gens).unwrap();
        for (label, mode) in MODES {
            let config = EngineConfig {
                parallelism: mode,
                ..EngineConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(name, label), &config, |b, config| {
                b.iter(|| run(&domain, config).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suites, engine);
criterion_main!(benches);
