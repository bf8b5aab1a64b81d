//! Integration checks of the coupled dynamics that go beyond single-module
//! unit tests: JC two-level field support, adiabatic-approximation fidelity,
//! scheme cross-checks, and the free-oscillator reduction.

use num_complex::Complex64;
use quadwave::grid::Fourier;
use quadwave::models::{Model, ModelParams};
use quadwave::observables::excitation_number;
use quadwave::propagator::{PropagatorConfig, SplitPropagator, SplitScheme};
use quadwave::run::{run_full, run_full_with_adiabatic_twin, GridSpec, RunOptions};
use quadwave::states::{build_initial, fock_wavefunction, AtomStateSpec, FieldStateSpec};

fn cfg(dt: f64, t_final: f64, record_stride: usize) -> PropagatorConfig {
    PropagatorConfig {
        dt,
        t_final,
        record_stride,
        scheme: SplitScheme::Vkv,
    }
}

/// With an excited atom and Fock-n field, the JC model couples exactly the
/// pair {n, n+1}: projected field weight outside it stays below 1e-6.
#[test]
fn jc_fock_input_stays_on_two_levels() {
    let grid = quadwave::make_grid(1024, 30.0).unwrap();
    let n0 = 3usize;
    let params = ModelParams::new(1.3, 0.8, Model::JaynesCummings).unwrap();
    let mut psi = build_initial(&FieldStateSpec::Fock(n0), &AtomStateSpec::excited(), &grid).unwrap();
    let mut prop = SplitPropagator::new(&params, &grid, 1e-3, SplitScheme::Vkv).unwrap();
    for _ in 0..20_000 {
        prop.step(&mut psi).unwrap();
    }
    let fock: Vec<Vec<f64>> = (0..=n0 + 6)
        .map(|n| fock_wavefunction(n, &grid).unwrap())
        .collect();
    let mut outside = 0.0;
    for (n, f) in fock.iter().enumerate() {
        let project = |channel: &[Complex64]| -> f64 {
            let o: Complex64 = channel
                .iter()
                .zip(f.iter())
                .map(|(c, v)| c * v)
                .sum::<Complex64>()
                * grid.dq();
            o.norm_sqr()
        };
        let w = project(&psi.up) + project(&psi.down);
        if n != n0 && n != n0 + 1 {
            outside += w;
        }
    }
    assert!(outside < 1e-6, "weight outside the coupled pair: {outside:.2e}");
}

/// Small coupling at Omega = 2 keeps the adiabatic approximation faithful
/// out to t = 50 (threshold read off this simulation, fixed at 0.99).
#[test]
fn adiabatic_fidelity_small_coupling() {
    let grid = GridSpec::default().build().unwrap();
    let params = ModelParams::new(2.0, 0.1, Model::Rabi).unwrap();
    let (full, ad) = run_full_with_adiabatic_twin(
        &params,
        &grid,
        &FieldStateSpec::Fock(0),
        &AtomStateSpec::excited(),
        &cfg(1e-3, 50.0, 100),
        &RunOptions::default(),
    )
    .unwrap();
    let fid = full.series.fidelity.unwrap();
    let min = fid.iter().cloned().fold(1.0f64, f64::min);
    assert!(min > 0.99, "min fidelity {min}");
    // the dropped-coupling diagnostic stays small in the same regime
    let h_cor = ad.series.h_cor.unwrap();
    assert!(h_cor.iter().all(|h| h.abs() < 0.15), "h_cor peaked at {:?}", h_cor.iter().cloned().fold(0.0f64, f64::max));
}

/// Free-oscillator reduction: at g0 = 0 both models keep channel populations
/// frozen to 1e-10 over a long run.
#[test]
fn decoupled_limit_freezes_populations() {
    let grid = quadwave::make_grid(512, 20.0).unwrap();
    for model in [Model::Rabi, Model::JaynesCummings] {
        let params = ModelParams::new(1.7, 0.0, model).unwrap();
        let atom = AtomStateSpec::normalized(Complex64::new(0.8, 0.0), Complex64::new(0.0, 0.6))
            .unwrap();
        let mut psi = build_initial(&FieldStateSpec::Fock(1), &atom, &grid).unwrap();
        let up0 = psi.population_up();
        let mut prop = SplitPropagator::new(&params, &grid, 1e-3, SplitScheme::Vkv).unwrap();
        for _ in 0..10_000 {
            prop.step(&mut psi).unwrap();
        }
        assert!((psi.population_up() - up0).abs() < 1e-10, "{model:?}");
    }
}

/// The interaction-picture JC model shares populations with the full JC
/// model (they differ by a frame rotation that commutes with sigma_z).
#[test]
fn interaction_picture_matches_full_jc_inversion() {
    let grid = quadwave::make_grid(1024, 30.0).unwrap();
    let full = ModelParams::new(1.5, 0.4, Model::JaynesCummings).unwrap();
    let ip = full.with_model(Model::JcInteractionPicture);
    let out_full = run_full(
        &full,
        &grid,
        &FieldStateSpec::Fock(2),
        &AtomStateSpec::excited(),
        &cfg(1e-3, 10.0, 100),
        &RunOptions::default(),
    )
    .unwrap();
    let out_ip = run_full(
        &ip,
        &grid,
        &FieldStateSpec::Fock(2),
        &AtomStateSpec::excited(),
        &cfg(1e-3, 10.0, 100),
        &RunOptions::default(),
    )
    .unwrap();
    for k in 0..out_full.series.len() {
        assert!(
            (out_full.series.inversion[k] - out_ip.series.inversion[k]).abs() < 1e-6,
            "t = {}",
            out_full.series.times[k]
        );
    }
}

/// Rabi <N> runs away while JC <N> holds, on the same footing.
#[test]
fn excitation_number_separates_the_models() {
    let grid = quadwave::make_grid(1024, 30.0).unwrap();
    let mut drift = Vec::new();
    for model in [Model::JaynesCummings, Model::Rabi] {
        let params = ModelParams::new(1.0, 1.0, model).unwrap();
        let mut psi =
            build_initial(&FieldStateSpec::Fock(0), &AtomStateSpec::excited(), &grid).unwrap();
        let mut fourier = Fourier::new(grid.clone());
        let n0 = excitation_number(&psi, &mut fourier).unwrap();
        let mut prop = SplitPropagator::new(&params, &grid, 1e-3, SplitScheme::Vkv).unwrap();
        let mut worst = 0.0f64;
        for _ in 0..50 {
            for _ in 0..100 {
                prop.step(&mut psi).unwrap();
            }
            let n = excitation_number(&psi, &mut fourier).unwrap();
            worst = worst.max((n - n0).abs());
        }
        drift.push(worst);
    }
    assert!(drift[0] < 1e-5, "JC drift {:.2e}", drift[0]);
    assert!(drift[1] > 1e-2, "Rabi drift {:.2e}", drift[1]);
}
