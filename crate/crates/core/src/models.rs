//! The model Hamiltonians in the field-quadrature representation, expressed as
//! matrix-valued functions of `q` and `p`.
//!
//! Everything is in scaled units (`hbar = omega_field = 1`): energies in units
//! of the photon energy, lengths in units of the oscillator length, time in
//! units of the inverse field frequency.
//!
//! Each Hamiltonian splits exactly into a q-diagonal 2x2 matrix function (the
//! potential part) and a p-diagonal one (the kinetic part). That exact split
//! is what makes the split-operator factors exact per factor:
//!
//! * Rabi:  `H = p^2/2 + q^2/2 + (Omega/2) s_z + sqrt(2) g0 q s_x`
//! * JC:    `H = p^2/2 + q^2/2 + (Omega/2) s_z + (g0/sqrt2)(q s_x - p s_y)`,
//!   i.e. upper off-diagonal `g0 (q + i p)/sqrt2`
//! * JC interaction picture: the JC form minus the conserved excitation
//!   number `N = p^2/2 + q^2/2 + s_z/2`
//! * Landau-Zener: the Rabi model rotated to the displaced-oscillator frame
//!   and linearized around the crossing, `sqrt(2) g0 q s_z + (Omega/2) s_x`,
//!   with the harmonic confinement dropped


use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ChannelBasis, Grid, WavePacket};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Which Hamiltonian to propagate under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Full model, counter-rotating terms included.
    Rabi,
    /// Rotating-wave approximation of the Rabi model.
    JaynesCummings,
    /// JC model in the frame rotating with the excitation number.
    JcInteractionPicture,
    /// Linearized curve crossing without confinement.
    LandauZener,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Rabi => "rabi",
            Model::JaynesCummings => "jc",
            Model::JcInteractionPicture => "jc_interaction",
            Model::LandauZener => "lz",
        }
    }
}

/// Dimensionless model parameters.
///
/// `omega_atom` is the atomic transition frequency over the field frequency,
/// `g0` the coupling over the field frequency. The detuning is always
/// recomputed as `omega_atom - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega_atom: f64,
    pub g0: f64,
    pub model: Model,
}

impl ModelParams {
    pub fn new(omega_atom: f64, g0: f64, model: Model) -> Result<Self> {
        if omega_atom <= 0.0 || !omega_atom.is_finite() {
            return Err(Error::Config(format!(
                "omega_atom must be positive, got {omega_atom}"
            )));
        }
        if g0 < 0.0 || !g0.is_finite() {
            return Err(Error::Config(format!("g0 must be non-negative, got {g0}")));
        }
        Ok(ModelParams {
            omega_atom,
            g0,
            model,
        })
    }

    /// Detuning `Delta = Omega - 1` in scaled units.
    pub fn detuning(&self) -> f64 {
        self.omega_atom - 1.0
    }

    pub fn with_model(&self, model: Model) -> Self {
        ModelParams { model, ..*self }
    }
}

/// Hermitian 2x2 matrix field sampled on a lattice, decomposed over the Pauli
/// basis: `a*I + b_x s_x + b_y s_y + b_z s_z` with real coefficients.
///
/// Hermiticity is structural; for the Rabi model `b_y` vanishes identically.
#[derive(Debug, Clone)]
pub struct PotentialMatrix {
    pub a: Vec<f64>,
    pub b_x: Vec<f64>,
    pub b_y: Vec<f64>,
    pub b_z: Vec<f64>,
}

impl PotentialMatrix {
    fn zeros(n: usize) -> Self {
        PotentialMatrix {
            a: vec![0.0; n],
            b_x: vec![0.0; n],
            b_y: vec![0.0; n],
            b_z: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Applies the matrix pointwise to a two-component amplitude pair.
    pub fn apply(&self, up: &mut [Complex64], down: &mut [Complex64]) {
        for k in 0..self.a.len() {
            let u = up[k];
            let d = down[k];
            let bxy = Complex64::new(self.b_x[k], -self.b_y[k]);
            up[k] = (self.a[k] + self.b_z[k]) * u + bxy * d;
            down[k] = bxy.conj() * u + (self.a[k] - self.b_z[k]) * d;
        }
    }
}

/// q-diagonal part of the Hamiltonian, sampled on the position lattice.
pub fn potential_part(params: &ModelParams, grid: &Grid) -> Result<PotentialMatrix> {
    let n = grid.n_points();
    let mut m = PotentialMatrix::zeros(n);
    let omega = params.omega_atom;
    let g0 = params.g0;
    match params.model {
        Model::Rabi => {
            for (k, &q) in grid.q_values().iter().enumerate() {
                m.a[k] = 0.5 * q * q;
                m.b_z[k] = 0.5 * omega;
                m.b_x[k] = SQRT_2 * g0 * q;
            }
        }
        Model::JaynesCummings => {
            for (k, &q) in grid.q_values().iter().enumerate() {
                m.a[k] = 0.5 * q * q;
                m.b_z[k] = 0.5 * omega;
                m.b_x[k] = g0 * q / SQRT_2;
            }
        }
        Model::JcInteractionPicture => {
            let delta = params.detuning();
            for (k, &q) in grid.q_values().iter().enumerate() {
                m.b_z[k] = 0.5 * delta;
                m.b_x[k] = g0 * q / SQRT_2;
            }
        }
        Model::LandauZener => {
            for (k, &q) in grid.q_values().iter().enumerate() {
                m.b_z[k] = SQRT_2 * g0 * q;
                m.b_x[k] = 0.5 * omega;
            }
        }
    }
    Ok(m)
}

/// p-diagonal part of the Hamiltonian, sampled on the momentum lattice.
///
/// The sign of the JC `b_y` coefficient is fixed so that, combined with
/// [`potential_part`], the upper off-diagonal element is `g0 (q + i p)/sqrt2`
/// for channel ordering `(|+>, |->)`.
pub fn kinetic_part(params: &ModelParams, grid: &Grid) -> Result<PotentialMatrix> {
    let n = grid.n_points();
    let mut m = PotentialMatrix::zeros(n);
    let g0 = params.g0;
    match params.model {
        Model::Rabi | Model::LandauZener => {
            for (k, &p) in grid.p_values().iter().enumerate() {
                m.a[k] = 0.5 * p * p;
            }
        }
        Model::JaynesCummings => {
            for (k, &p) in grid.p_values().iter().enumerate() {
                m.a[k] = 0.5 * p * p;
                m.b_y[k] = -g0 * p / SQRT_2;
            }
        }
        Model::JcInteractionPicture => {
            for (k, &p) in grid.p_values().iter().enumerate() {
                m.b_y[k] = -g0 * p / SQRT_2;
            }
        }
    }
    Ok(m)
}

/// Applies `U = (s_x + s_z)/sqrt2` to the channels, mapping the bare pair to
/// the displaced-oscillator (diabatic) pair. `U` is an involution.
pub fn rotate_to_displaced_basis(psi: &WavePacket) -> Result<WavePacket> {
    if psi.basis != ChannelBasis::Bare {
        return Err(Error::BasisMismatch {
            expected: "bare",
            got: psi.basis.name(),
        });
    }
    let mut out = psi.clone();
    let s = 1.0 / SQRT_2;
    for k in 0..psi.up.len() {
        let u = psi.up[k];
        let d = psi.down[k];
        out.up[k] = s * (u + d);
        out.down[k] = s * (u - d);
    }
    Ok(out)
}

/// The two displaced-oscillator (diabatic) curves over `q`.
///
/// Rabi: `V_h(q +- sqrt2 g0) - g0^2`; JC: `V_h(q +- g0/sqrt2) - g0^2/4`,
/// with `V_h(x) = x^2/2`. Returned as `(plus_displaced, minus_displaced)`,
/// where the first curve has its minimum at negative `q`.
pub fn diabatic_curves(params: &ModelParams, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
    let (shift, offset) = match params.model {
        Model::Rabi => (SQRT_2 * params.g0, params.g0 * params.g0),
        Model::JaynesCummings => (params.g0 / SQRT_2, params.g0 * params.g0 / 4.0),
        other => {
            return Err(Error::Config(format!(
                "diabatic curves are defined for the Rabi and JC models, not {}",
                other.name()
            )))
        }
    };
    let vh = |x: f64| 0.5 * x * x;
    let upper: Vec<f64> = grid.q_values().iter().map(|&q| vh(q + shift) - offset).collect();
    let lower: Vec<f64> = grid.q_values().iter().map(|&q| vh(q - shift) - offset).collect();
    Ok((upper, lower))
}
