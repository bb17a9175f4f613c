//! Parallel against sequential execution on the three heaviest batch loops.
//! Build with `--no-default-features` to measure the fallback path only.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use degenwave::carleman::{carleman_component_integrals, ModalSolution, QuadratureGrid};
use degenwave::observability::hidden_trace_ratio_ensemble;
use degenwave::params::{validate_carleman_params, DomainSpec};
use degenwave::radial::{dirichlet_spectrum, SolverOptions};
use degenwave::wave::RadialBasis;
use degenwave::Execution;

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn label(e: Execution) -> &'static str {
    match e {
        Execution::Sequential => "sequential",
        Execution::Parallel if e.is_parallel() => "parallel",
        Execution::Parallel => "parallel-disabled",
    }
}

fn eigensolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigensolve_n4096_k16");
    for exec in MODES {
        let opts = SolverOptions { exec, ..SolverOptions::default() };
        g.bench_function(BenchmarkId::from_parameter(label(exec)), |b| {
            b.iter(|| dirichlet_spectrum(0.5, 4096, 6.0, 16, opts).unwrap())
        });
    }
    g.finish();
}

fn ensemble(c: &mut Criterion) {
    let basis = Arc::new(RadialBasis::compute(0.5, 512, 6.0, 16, SolverOptions::default()).unwrap());
    let mut g = c.benchmark_group("hidden_trace_ensemble_32x8");
    g.sample_size(10);
    for exec in MODES {
        g.bench_function(BenchmarkId::from_parameter(label(exec)), |b| {
            b.iter(|| hidden_trace_ratio_ensemble(basis.clone(), 1, 32, (8, 8), 50.0, exec).unwrap())
        });
    }
    g.finish();
}

fn integrals(c: &mut Criterion) {
    let d = DomainSpec::new(0.03).unwrap();
    let p = validate_carleman_params(0.5, &d, 0.0149, 25.0, 1.0, 2.0).unwrap();
    let phi = ModalSolution::single(0.5, 1, 1, 1.0, 0.0).unwrap();
    let grid = QuadratureGrid::default();
    let mut g = c.benchmark_group("carleman_integrals");
    g.sample_size(10);
    for exec in MODES {
        g.bench_function(BenchmarkId::from_parameter(label(exec)), |b| {
            b.iter(|| carleman_component_integrals(&phi, &p, &d, &grid, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, eigensolve, ensemble, integrals);
criterion_main!(benches);
