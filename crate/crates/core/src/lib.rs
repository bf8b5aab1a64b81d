//! Coupled-channel wave-packet dynamics for the quantized-field Rabi and
//! Jaynes-Cummings models in the field-quadrature representation.
//!
//! The field mode is treated as a unit-mass particle on a position grid; the
//! two-level atom gives the wavefunction two components evolving on coupled
//! potential curves. Propagation uses exact split-operator factors (the
//! Hamiltonians separate exactly into q-diagonal and p-diagonal 2x2 matrix
//! functions), and everything is validated against the closed-form
//! Jaynes-Cummings solution in the number basis.
//!
//! All quantities are in scaled units: `hbar = 1`, field frequency `= 1`,
//! lengths in oscillator lengths.
//!
//! Modules:
//! - [`grid`]: position/momentum lattices, wave packets, the FFT pair
//! - [`models`]: the Hamiltonians as Pauli-decomposed matrix functions
//! - [`states`]: Fock/coherent initial states
//! - [`propagator`]: split-operator and adiabatic steppers, classical ODE
//! - [`observables`]: inversion, squeezing, entropy, Q-function, spectra
//! - [`analytic`]: dressed-state oracle, revival estimates, Landau-Zener
//! - [`manifold`]: semiclassical energy contours
//! - [`run`]: propagation driver with recording and snapshots

pub mod analytic;
pub mod error;
pub mod grid;
pub mod manifold;
pub mod models;
pub mod observables;
pub mod propagator;
pub mod run;
pub mod states;

pub use error::{Error, Result};
pub use grid::{inner_product, make_grid, ChannelBasis, Fourier, Grid, Representation, WavePacket};
pub use models::{Model, ModelParams, PotentialMatrix};
pub use observables::{QFunctionFrame, TimeSeries};
pub use propagator::{ClassicalState, PropagatorConfig, Sheet, SplitPropagator, SplitScheme};
pub use run::{GridSpec, RunOptions, RunOutput};
pub use states::{AtomStateSpec, FieldStateSpec};
