//! Minimal library walk-through: propagate a coherent state under the JC
//! model, compare the inversion against the dressed-state solution, and
//! print the revival-time estimates.
//!
//! ```bash
//! cargo run --release -p quadwave --example collapse_revival
//! ```

use num_complex::Complex64;
use quadwave::analytic::{self, DEFAULT_CURVATURE_FIT_HALF_WIDTH};
use quadwave::models::{Model, ModelParams};
use quadwave::propagator::{PropagatorConfig, SplitScheme};
use quadwave::run::{run_full, GridSpec, RunOptions};
use quadwave::states::{AtomStateSpec, FieldStateSpec};

fn main() -> quadwave::Result<()> {
    let grid = GridSpec::default().build()?;
    let params = ModelParams::new(5.0, 0.3, Model::JaynesCummings)?;
    let field = FieldStateSpec::Coherent(Complex64::new(4.0, 0.0));
    let atom = AtomStateSpec::excited();
    let cfg = PropagatorConfig {
        dt: 1e-3,
        t_final: 200.0,
        record_stride: 100,
        scheme: SplitScheme::Vkv,
    };

    let out = run_full(&params, &grid, &field, &atom, &cfg, &RunOptions::default())?;
    let oracle = analytic::jc_exact_evolution(&field, &atom, &params, &out.series.times)?;
    let worst = out
        .series
        .inversion
        .iter()
        .zip(&oracle.inversion)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    println!("grid: {} points on [-{}, {})", grid.n_points(), grid.q_max(), grid.q_max());
    println!("max |inversion - oracle| over t <= 200: {worst:.2e}");

    let rabi = params.with_model(Model::Rabi);
    let est = analytic::revival_estimates(&rabi, &field, DEFAULT_CURVATURE_FIT_HALF_WIDTH)?;
    println!("revival estimates:");
    if let Some(t) = est.t_r_adiabatic {
        println!("  adiabatic formula : {t:.1}");
    }
    println!("  standard formula  : {:.1}", est.t_r_standard);
    println!("  curvature fit     : {:.1}", est.t_r_numeric_curvature);
    Ok(())
}
