//! Time evolution: exact split-operator stepping for the full coupled models,
//! decoupled stepping on the adiabatic curves, and fixed-step RK4 for the
//! semiclassical trajectories.
//!
//! A single propagation is strictly sequential and owns its FFT workspace;
//! independent propagations can run in parallel freely.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use num_complex::Complex64;

use crate::analytic;
use crate::error::{Error, Result};
use crate::grid::{ChannelBasis, Fourier, Grid, WavePacket};
use crate::models::{kinetic_part, potential_part, Model, ModelParams, PotentialMatrix, SQRT_2};

/// Order of the Strang factors in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitScheme {
    /// Half potential, full kinetic, half potential (one FFT pair per step).
    Vkv,
    /// Half kinetic, full potential, half kinetic (two FFT pairs per step).
    Kvk,
}

/// Stepping parameters for a propagation run.
#[derive(Debug, Clone, Copy)]
pub struct PropagatorConfig {
    /// Timestep in scaled units.
    pub dt: f64,
    /// Total propagation time.
    pub t_final: f64,
    /// Steps between observable records.
    pub record_stride: usize,
    pub scheme: SplitScheme,
}

impl PropagatorConfig {
    pub fn new(dt: f64, t_final: f64, record_stride: usize) -> Result<Self> {
        let cfg = PropagatorConfig {
            dt,
            t_final,
            record_stride,
            scheme: SplitScheme::Vkv,
        };
        cfg.n_steps()?;
        Ok(cfg)
    }

    /// Total step count; `t_final/dt` must round to an integer.
    pub fn n_steps(&self) -> Result<usize> {
        if self.dt <= 0.0 || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record_stride must be >= 1".into()));
        }
        if self.t_final < 0.0 || !self.t_final.is_finite() {
            return Err(Error::Config(format!(
                "t_final must be non-negative, got {}",
                self.t_final
            )));
        }
        let ratio = self.t_final / self.dt;
        let n = ratio.round();
        if (ratio - n).abs() > 1e-6 {
            return Err(Error::Config(format!(
                "t_final/dt = {ratio} does not round to an integer step count"
            )));
        }
        Ok(n as usize)
    }
}

/// Dense 2x2 complex matrix, one per lattice site.
#[derive(Debug, Clone, Copy)]
struct Matrix2 {
    uu: Complex64,
    ud: Complex64,
    du: Complex64,
    dd: Complex64,
}

impl Matrix2 {
    #[inline]
    fn apply(&self, up: &mut Complex64, down: &mut Complex64) {
        let u = *up;
        let d = *down;
        *up = self.uu * u + self.ud * d;
        *down = self.du * u + self.dd * d;
    }
}

/// `scale * exp(-i tau (a I + b . sigma))` evaluated in closed form:
/// `exp(-i a tau) (cos(|b| tau) I - i sin(|b| tau) bhat . sigma)`.
fn exp_factor(a: f64, bx: f64, by: f64, bz: f64, tau: f64, scale: f64) -> Matrix2 {
    let phase = Complex64::from_polar(scale, -a * tau);
    let bn = (bx * bx + by * by + bz * bz).sqrt();
    if bn == 0.0 {
        return Matrix2 {
            uu: phase,
            ud: Complex64::new(0.0, 0.0),
            du: Complex64::new(0.0, 0.0),
            dd: phase,
        };
    }
    let (s, c) = (bn * tau).sin_cos();
    let i = Complex64::i();
    let nx = bx / bn;
    let ny = by / bn;
    let nz = bz / bn;
    Matrix2 {
        uu: phase * (c - i * s * nz),
        ud: phase * (-i * s * Complex64::new(nx, -ny)),
        du: phase * (-i * s * Complex64::new(nx, ny)),
        dd: phase * (c + i * s * nz),
    }
}

fn factors(m: &PotentialMatrix, tau: f64, scale: f64) -> Vec<Matrix2> {
    (0..m.len())
        .map(|k| exp_factor(m.a[k], m.b_x[k], m.b_y[k], m.b_z[k], tau, scale))
        .collect()
}

fn apply_factors(f: &[Matrix2], up: &mut [Complex64], down: &mut [Complex64]) {
    for (k, m) in f.iter().enumerate() {
        m.apply(&mut up[k], &mut down[k]);
    }
}

/// Split-operator stepper for the full coupled Hamiltonians.
///
/// Both 2x2 exponentials are exact per factor; one step carries the usual
/// Strang O(dt^3) local error. The raw FFT normalization (1/N per pair) is
/// folded into the cached kinetic factors so the step is unitary to rounding.
pub struct SplitPropagator {
    grid: Arc<Grid>,
    params: ModelParams,
    dt: f64,
    scheme: SplitScheme,
    v_half: Vec<Matrix2>,
    v_full: Vec<Matrix2>,
    k_half: Vec<Matrix2>,
    k_full: Vec<Matrix2>,
    fourier: Fourier,
    steps_taken: u64,
}

impl SplitPropagator {
    pub fn new(
        params: &ModelParams,
        grid: &Arc<Grid>,
        dt: f64,
        scheme: SplitScheme,
    ) -> Result<Self> {
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {dt}")));
        }
        let v = potential_part(params, grid)?;
        let k = kinetic_part(params, grid)?;
        let n = grid.n_points() as f64;
        // scale: exactly one 1/N per forward/inverse pair
        let (v_half, v_full, k_half, k_full) = match scheme {
            SplitScheme::Vkv => (
                factors(&v, dt / 2.0, 1.0),
                Vec::new(),
                Vec::new(),
                factors(&k, dt, 1.0 / n),
            ),
            SplitScheme::Kvk => (
                Vec::new(),
                factors(&v, dt, 1.0),
                factors(&k, dt / 2.0, 1.0 / n),
                Vec::new(),
            ),
        };
        Ok(SplitPropagator {
            grid: grid.clone(),
            params: *params,
            dt,
            scheme,
            v_half,
            v_full,
            k_half,
            k_full,
            fourier: Fourier::new(grid.clone()),
            steps_taken: 0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Advances the packet by one timestep in place.
    pub fn step(&mut self, psi: &mut WavePacket) -> Result<()> {
        if psi.basis != ChannelBasis::Bare {
            return Err(Error::BasisMismatch {
                expected: "bare",
                got: psi.basis.name(),
            });
        }
        if psi.grid().as_ref() != self.grid.as_ref() {
            return Err(Error::GridMismatch("propagator grid differs".into()));
        }
        match self.scheme {
            SplitScheme::Vkv => {
                apply_factors(&self.v_half, &mut psi.up, &mut psi.down);
                self.fourier.fft_raw(&mut psi.up);
                self.fourier.fft_raw(&mut psi.down);
                apply_factors(&self.k_full, &mut psi.up, &mut psi.down);
                self.fourier.ifft_raw(&mut psi.up);
                self.fourier.ifft_raw(&mut psi.down);
                apply_factors(&self.v_half, &mut psi.up, &mut psi.down);
            }
            SplitScheme::Kvk => {
                self.fourier.fft_raw(&mut psi.up);
                self.fourier.fft_raw(&mut psi.down);
                apply_factors(&self.k_half, &mut psi.up, &mut psi.down);
                self.fourier.ifft_raw(&mut psi.up);
                self.fourier.ifft_raw(&mut psi.down);
                apply_factors(&self.v_full, &mut psi.up, &mut psi.down);
                self.fourier.fft_raw(&mut psi.up);
                self.fourier.fft_raw(&mut psi.down);
                apply_factors(&self.k_half, &mut psi.up, &mut psi.down);
                self.fourier.ifft_raw(&mut psi.up);
                self.fourier.ifft_raw(&mut psi.down);
            }
        }
        self.steps_taken += 1;
        let raw: f64 = psi
            .up
            .iter()
            .chain(psi.down.iter())
            .map(|c| c.norm_sqr())
            .sum();
        if !raw.is_finite() {
            return Err(Error::Blowup(format!(
                "non-finite amplitudes after step {}",
                self.steps_taken
            )));
        }
        Ok(())
    }
}

/// One-shot Strang step (builds the cached factors; use [`SplitPropagator`]
/// for runs).
pub fn step_full(psi: &WavePacket, params: &ModelParams, dt: f64) -> Result<WavePacket> {
    let mut prop = SplitPropagator::new(params, psi.grid(), dt, SplitScheme::Vkv)?;
    let mut out = psi.clone();
    prop.step(&mut out)?;
    Ok(out)
}

/// Mixing angle of the adiabatic transformation for the Rabi model, with
/// `tan 2theta = Omega/(2 sqrt2 g0 q)` continued continuously through the
/// crossing: `theta in (0, pi/2)`, `theta(0) = pi/4`, `theta(+inf) = 0`.
pub fn mixing_angle(params: &ModelParams, q: f64) -> f64 {
    FRAC_PI_4 - 0.5 * (2.0 * SQRT_2 * params.g0 * q / params.omega_atom).atan()
}

fn rotation_angles(params: &ModelParams, grid: &Grid) -> Result<Vec<f64>> {
    if params.g0 <= 0.0 || params.g0.is_nan() {
        return Err(Error::Config(
            "adiabatic transformation needs g0 > 0".into(),
        ));
    }
    // rotation angle in the bare basis: pi/4 - theta
    Ok(grid
        .q_values()
        .iter()
        .map(|&q| FRAC_PI_4 - mixing_angle(params, q))
        .collect())
}

/// Pointwise rotation from the bare channels to the adiabatic pair.
///
/// The upper output channel is the local eigenvector of the potential matrix
/// with the larger eigenvalue, so an initial `|+>` state decomposes with
/// weights `(cos a, -sin a)` where `tan 2a = 2 sqrt2 g0 q / Omega`.
pub fn to_adiabatic_basis(psi: &WavePacket, params: &ModelParams) -> Result<WavePacket> {
    if psi.basis != ChannelBasis::Bare {
        return Err(Error::BasisMismatch {
            expected: "bare",
            got: psi.basis.name(),
        });
    }
    let angles = rotation_angles(params, psi.grid())?;
    let mut out = psi.clone();
    out.basis = ChannelBasis::Adiabatic;
    for (k, &a) in angles.iter().enumerate() {
        let (s, c) = a.sin_cos();
        let u = psi.up[k];
        let d = psi.down[k];
        out.up[k] = c * u + s * d;
        out.down[k] = -s * u + c * d;
    }
    Ok(out)
}

/// Inverse of [`to_adiabatic_basis`].
pub fn from_adiabatic_basis(psi: &WavePacket, params: &ModelParams) -> Result<WavePacket> {
    if psi.basis != ChannelBasis::Adiabatic {
        return Err(Error::BasisMismatch {
            expected: "adiabatic",
            got: psi.basis.name(),
        });
    }
    let angles = rotation_angles(params, psi.grid())?;
    let mut out = psi.clone();
    out.basis = ChannelBasis::Bare;
    for (k, &a) in angles.iter().enumerate() {
        let (s, c) = a.sin_cos();
        let u = psi.up[k];
        let d = psi.down[k];
        out.up[k] = c * u - s * d;
        out.down[k] = s * u + c * d;
    }
    Ok(out)
}

/// Decoupled stepper on the adiabatic energy curves of the Rabi model.
///
/// Each channel evolves under the scalar Hamiltonian `p^2/2 + V_pm(q)`; the
/// derivative coupling is dropped by construction, so channel populations are
/// conserved exactly.
pub struct AdiabaticPropagator {
    grid: Arc<Grid>,
    dt: f64,
    v_half_plus: Vec<Complex64>,
    v_half_minus: Vec<Complex64>,
    k_full: Vec<Complex64>,
    fourier: Fourier,
    steps_taken: u64,
}

impl AdiabaticPropagator {
    pub fn new(params: &ModelParams, grid: &Arc<Grid>, dt: f64) -> Result<Self> {
        if params.model != Model::Rabi {
            return Err(Error::Config(format!(
                "adiabatic stepping is defined for the Rabi model, not {}",
                params.model.name()
            )));
        }
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {dt}")));
        }
        if params.g0 <= 0.0 || params.g0.is_nan() {
            return Err(Error::Config("adiabatic stepping needs g0 > 0".into()));
        }
        let curves = analytic::adiabatic_curves(params, grid);
        let phase = |v: f64| Complex64::from_polar(1.0, -v * dt / 2.0);
        let n = grid.n_points() as f64;
        let k_full = grid
            .p_values()
            .iter()
            .map(|&p| Complex64::from_polar(1.0 / n, -0.5 * p * p * dt))
            .collect();
        Ok(AdiabaticPropagator {
            grid: grid.clone(),
            dt,
            v_half_plus: curves.v_plus.iter().map(|&v| phase(v)).collect(),
            v_half_minus: curves.v_minus.iter().map(|&v| phase(v)).collect(),
            k_full,
            fourier: Fourier::new(grid.clone()),
            steps_taken: 0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&mut self, psi: &mut WavePacket) -> Result<()> {
        if psi.basis != ChannelBasis::Adiabatic {
            return Err(Error::BasisMismatch {
                expected: "adiabatic",
                got: psi.basis.name(),
            });
        }
        if psi.grid().as_ref() != self.grid.as_ref() {
            return Err(Error::GridMismatch("propagator grid differs".into()));
        }
        let mul = |data: &mut [Complex64], f: &[Complex64]| {
            for (c, m) in data.iter_mut().zip(f.iter()) {
                *c *= m;
            }
        };
        mul(&mut psi.up, &self.v_half_plus);
        mul(&mut psi.down, &self.v_half_minus);
        self.fourier.fft_raw(&mut psi.up);
        self.fourier.fft_raw(&mut psi.down);
        mul(&mut psi.up, &self.k_full);
        mul(&mut psi.down, &self.k_full);
        self.fourier.ifft_raw(&mut psi.up);
        self.fourier.ifft_raw(&mut psi.down);
        mul(&mut psi.up, &self.v_half_plus);
        mul(&mut psi.down, &self.v_half_minus);
        self.steps_taken += 1;
        let raw: f64 = psi
            .up
            .iter()
            .chain(psi.down.iter())
            .map(|c| c.norm_sqr())
            .sum();
        if !raw.is_finite() {
            return Err(Error::Blowup(format!(
                "non-finite amplitudes after adiabatic step {}",
                self.steps_taken
            )));
        }
        Ok(())
    }
}

/// One-shot adiabatic Strang step.
pub fn step_adiabatic(psi: &WavePacket, params: &ModelParams, dt: f64) -> Result<WavePacket> {
    let mut prop = AdiabaticPropagator::new(params, psi.grid(), dt)?;
    let mut out = psi.clone();
    prop.step(&mut out)?;
    Ok(out)
}

/// Expectation value of the dropped derivative coupling in an
/// adiabatic-basis state: `<H_cor> = -2 Im <psi_up| dtheta p - (i/2) d2theta |psi_down>`.
///
/// Purely diagnostic: large values correlate with fidelity loss of the
/// adiabatic approximation.
pub fn h_cor_expectation(
    psi: &WavePacket,
    params: &ModelParams,
    fourier: &mut Fourier,
) -> Result<f64> {
    if psi.basis != ChannelBasis::Adiabatic {
        return Err(Error::BasisMismatch {
            expected: "adiabatic",
            got: psi.basis.name(),
        });
    }
    let grid = psi.grid().clone();
    let n = grid.n_points() as f64;
    // p psi_down via the spectral derivative
    let mut p_down = psi.down.clone();
    fourier.fft_raw(&mut p_down);
    for (c, &p) in p_down.iter_mut().zip(grid.p_values()) {
        *c *= p / n;
    }
    fourier.ifft_raw(&mut p_down);

    let mut z = Complex64::new(0.0, 0.0);
    let half_i = Complex64::new(0.0, 0.5);
    for (k, &q) in grid.q_values().iter().enumerate() {
        let dth = analytic::dtheta(params, q);
        let d2th = analytic::d2theta(params, q);
        z += psi.up[k].conj() * (dth * p_down[k] - half_i * d2th * psi.down[k]);
    }
    z *= grid.dq();
    Ok(-2.0 * z.im / psi.norm_sq())
}

/// Which adiabatic sheet a classical trajectory lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    Upper,
    Lower,
}

/// Classical phase-space point on a fixed sheet.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalState {
    pub q: f64,
    pub p: f64,
    pub sheet: Sheet,
}

/// Force on the chosen sheet: `-q + 16 Omega^2 g0^4 q/(Omega^2 + 2 g0^2 q^2)^3
/// -+ 4 g0^2 |q| / sqrt(Omega^2 + 8 g0^2 q^2)`.
///
/// The `|q|` in the level-splitting term produces the kink at the crossing,
/// so this is not exactly `-dV/dq` and the sheet energy is only approximately
/// conserved there.
pub fn classical_force(params: &ModelParams, sheet: Sheet, q: f64) -> f64 {
    let o2 = params.omega_atom * params.omega_atom;
    let g2 = params.g0 * params.g0;
    let bump = 16.0 * o2 * g2 * g2 * q / (o2 + 2.0 * g2 * q * q).powi(3);
    let split = 4.0 * g2 * q.abs() / (o2 + 8.0 * g2 * q * q).sqrt();
    let sign = match sheet {
        Sheet::Upper => -1.0,
        Sheet::Lower => 1.0,
    };
    -q + bump + sign * split
}

/// Fixed-step RK4 integration of the sheet dynamics; returns the state at
/// every step including the initial one.
pub fn classical_trajectory(
    init: ClassicalState,
    params: &ModelParams,
    dt: f64,
    t_final: f64,
) -> Result<Vec<ClassicalState>> {
    if dt <= 0.0 || dt.is_nan() || !t_final.is_finite() || !init.q.is_finite() || !init.p.is_finite() {
        return Err(Error::Config("classical trajectory needs finite inputs and dt > 0".into()));
    }
    let n_steps = (t_final / dt).round() as usize;
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(init);
    let mut q = init.q;
    let mut p = init.p;
    let f = |q: f64| classical_force(params, init.sheet, q);
    for step in 0..n_steps {
        let k1q = p;
        let k1p = f(q);
        let k2q = p + 0.5 * dt * k1p;
        let k2p = f(q + 0.5 * dt * k1q);
        let k3q = p + 0.5 * dt * k2p;
        let k3p = f(q + 0.5 * dt * k2q);
        let k4q = p + dt * k3p;
        let k4p = f(q + dt * k3q);
        q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if !q.is_finite() || !p.is_finite() {
            return Err(Error::Blowup(format!(
                "classical trajectory diverged at step {step}"
            )));
        }
        out.push(ClassicalState {
            q,
            p,
            sheet: init.sheet,
        });
    }
    Ok(out)
}
