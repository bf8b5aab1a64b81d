//! Throughput of the FFT-bound stepping kernels and the heavier observables.
//!
//! ```bash
//! cargo bench -p quadwave-bench
//! ```

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use quadwave::analytic::jc_exact_evolution;
use quadwave::grid::Fourier;
use quadwave::observables::{q_function, AlphaLattice};
use quadwave::propagator::{SplitPropagator, SplitScheme};
use quadwave::states::{fock_wavefunction, AtomStateSpec, FieldStateSpec};
use quadwave_bench::{coherent_state, default_grid, jc_params, rabi_params};

fn bench_steps(c: &mut Criterion) {
    let grid = default_grid();
    let mut group = c.benchmark_group("step_2048");
    for (label, params) in [("jc", jc_params()), ("rabi", rabi_params())] {
        let mut prop = SplitPropagator::new(&params, &grid, 1e-3, SplitScheme::Vkv).unwrap();
        let mut psi = coherent_state(&grid, 4.0);
        group.bench_function(label, |b| {
            b.iter(|| {
                prop.step(black_box(&mut psi)).unwrap();
            });
        });
    }
    group.finish();
}

fn bench_fft_roundtrip(c: &mut Criterion) {
    let grid = default_grid();
    let mut fourier = Fourier::new(grid.clone());
    let psi = coherent_state(&grid, 4.0);
    c.bench_function("fft_roundtrip_2048", |b| {
        b.iter(|| {
            let mom = fourier.to_momentum(black_box(&psi)).unwrap();
            black_box(fourier.to_position(&mom).unwrap());
        });
    });
}

fn bench_q_function(c: &mut Criterion) {
    let grid = default_grid();
    let psi = coherent_state(&grid, 4.0);
    let lattice = AlphaLattice {
        half_width: 8.0,
        n: 101,
    };
    c.bench_function("q_function_101x101", |b| {
        b.iter(|| black_box(q_function(&psi, &lattice, 0.0).unwrap()));
    });
}

fn bench_fock(c: &mut Criterion) {
    let grid = default_grid();
    c.bench_function("fock_wavefunction_200", |b| {
        b.iter(|| black_box(fock_wavefunction(200, &grid).unwrap()));
    });
}

fn bench_oracle(c: &mut Criterion) {
    let params = jc_params();
    let times: Vec<f64> = (0..400).map(|k| 0.1 * k as f64).collect();
    c.bench_function("jc_exact_evolution_nu4_400pts", |b| {
        b.iter(|| {
            black_box(
                jc_exact_evolution(
                    &FieldStateSpec::Coherent(Complex64::new(4.0, 0.0)),
                    &AtomStateSpec::excited(),
                    &params,
                    &times,
                )
                .unwrap(),
            )
        });
    });
}

criterion_group!(
    benches,
    bench_steps,
    bench_fft_roundtrip,
    bench_q_function,
    bench_fock,
    bench_oracle
);
criterion_main!(benches);
