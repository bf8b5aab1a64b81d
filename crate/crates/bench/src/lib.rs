//! Shared setup helpers for the benchmark targets.

use std::sync::Arc;

use num_complex::Complex64;
use quadwave::grid::Grid;
use quadwave::models::{Model, ModelParams};
use quadwave::states::{build_initial, AtomStateSpec, FieldStateSpec};
use quadwave::WavePacket;

pub fn default_grid() -> Arc<Grid> {
    quadwave::make_grid(2048, 40.0).unwrap()
}

pub fn coherent_state(grid: &Arc<Grid>, nu: f64) -> WavePacket {
    build_initial(
        &FieldStateSpec::Coherent(Complex64::new(nu, 0.0)),
        &AtomStateSpec::excited(),
        grid,
    )
    .unwrap()
}

pub fn jc_params() -> ModelParams {
    ModelParams::new(5.0, 0.3, Model::JaynesCummings).unwrap()
}

pub fn rabi_params() -> ModelParams {
    ModelParams::new(1.0, 1.0, Model::Rabi).unwrap()
}
