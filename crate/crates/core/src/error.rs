//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by grid construction, state preparation, propagation and
/// observable evaluation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Invalid configuration value (bad grid size, non-positive frequency, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Two wave packets live on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Operation applied in the wrong channel basis (bare vs adiabatic).
    #[error("basis mismatch: expected {expected} basis, got {got}")]
    BasisMismatch {
        expected: &'static str,
        got: &'static str,
    },

    /// Operation applied in the wrong representation (position vs momentum).
    #[error("representation mismatch: expected {expected} representation, got {got}")]
    RepresentationMismatch {
        expected: &'static str,
        got: &'static str,
    },

    /// The grid cannot resolve the requested state or lattice.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A state or trajectory stopped being finite, or leaked to the grid boundary.
    #[error("numerical blow-up: {0}")]
    Blowup(String),

    /// Fock-space truncation too small for the requested initial state.
    #[error("truncation insufficient: need at least {required} Fock states, got {given}")]
    Truncation { required: usize, given: usize },

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested energy contour lies below the sheet minimum.
    #[error("empty contour: {0}")]
    EmptyContour(String),

    /// Time series records are not uniformly spaced.
    #[error("non-uniform sampling: {0}")]
    NonUniformSampling(String),
}

pub type Result<T> = std::result::Result<T, Error>;
