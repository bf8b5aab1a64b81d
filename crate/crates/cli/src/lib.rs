//! Library half of the scenario runner: config schema, preset catalogue,
//! execution, CSV output. The binary in `main.rs` is a thin argument parser
//! over these.

pub mod config;
pub mod exec;
pub mod output;
pub mod presets;
