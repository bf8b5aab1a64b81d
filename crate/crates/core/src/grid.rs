//! Uniform position grid, its FFT-dual momentum lattice, and the two-component
//! wave-packet container every other module operates on.
//!
//! The grid is periodic and endpoint-exclusive: `q_k = q_min + k*dq` for
//! `k = 0..n`, with `q_min = -q_max`. The momentum lattice follows the native
//! FFT layout (non-negative frequencies first, then the negative ones), with
//! spacing `2*pi/(n*dq)`.
//!
//! `Grid` is immutable and shared through an [`Arc`]; `WavePacket` is a value
//! type and nothing here mutates its inputs.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform, symmetric position lattice together with its momentum dual.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n_points: usize,
    q_min: f64,
    q_max: f64,
    dq: f64,
    q: Vec<f64>,
    p: Vec<f64>,
}

impl Grid {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    /// Lattice spacing `(q_max - q_min)/n_points`.
    pub fn dq(&self) -> f64 {
        self.dq
    }

    /// Momentum lattice spacing `2*pi/(n_points*dq)`.
    pub fn dp(&self) -> f64 {
        2.0 * PI / (self.n_points as f64 * self.dq)
    }

    /// Position values, `q_min + k*dq`.
    pub fn q_values(&self) -> &[f64] {
        &self.q
    }

    /// Momentum values in FFT output order: `0, dp, ..., -2*dp, -dp`.
    pub fn p_values(&self) -> &[f64] {
        &self.p
    }

    /// Integration weight for the representation `rep`.
    pub fn weight(&self, rep: Representation) -> f64 {
        match rep {
            Representation::Position => self.dq,
            Representation::Momentum => self.dp(),
        }
    }
}

/// Builds a symmetric grid with `n_points` sites on `[-q_max, q_max)`.
///
/// `n_points` must be a power of two (at least 16) so the transform uses the
/// standard radix layout.
pub fn make_grid(n_points: usize, q_max: f64) -> Result<Arc<Grid>> {
    if n_points < 16 || !n_points.is_power_of_two() {
        return Err(Error::Config(format!(
            "n_points must be a power of two >= 16, got {n_points}"
        )));
    }
    if q_max <= 0.0 || !q_max.is_finite() {
        return Err(Error::Config(format!("q_max must be positive, got {q_max}")));
    }
    let q_min = -q_max;
    let dq = (q_max - q_min) / n_points as f64;
    let q: Vec<f64> = (0..n_points).map(|k| q_min + k as f64 * dq).collect();
    let dp = 2.0 * PI / (n_points as f64 * dq);
    let half = n_points / 2;
    let p: Vec<f64> = (0..n_points)
        .map(|k| {
            if k < half {
                k as f64 * dp
            } else {
                (k as f64 - n_points as f64) * dp
            }
        })
        .collect();
    Ok(Arc::new(Grid {
        n_points,
        q_min,
        q_max,
        dq,
        q,
        p,
    }))
}

/// Which channel basis the two components of a packet refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelBasis {
    /// Atomic levels `|+>`, `|->` (or the rotated diabatic pair).
    Bare,
    /// Position-dependent eigenbasis of the potential matrix.
    Adiabatic,
}

impl ChannelBasis {
    pub fn name(self) -> &'static str {
        match self {
            ChannelBasis::Bare => "bare",
            ChannelBasis::Adiabatic => "adiabatic",
        }
    }
}

/// Representation the amplitudes are sampled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Position,
    Momentum,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Position => "position",
            Representation::Momentum => "momentum",
        }
    }
}

/// Two-component wave packet on a [`Grid`].
///
/// The norm is `sqrt(sum(|up|^2 + |down|^2) * dq)` (or `dp` in momentum
/// representation).
#[derive(Debug, Clone)]
pub struct WavePacket {
    pub up: Vec<Complex64>,
    pub down: Vec<Complex64>,
    pub basis: ChannelBasis,
    pub rep: Representation,
    grid: Arc<Grid>,
}

impl WavePacket {
    /// Zero-amplitude packet in the given basis, position representation.
    pub fn zeros(grid: Arc<Grid>, basis: ChannelBasis) -> Self {
        let n = grid.n_points();
        WavePacket {
            up: vec![Complex64::new(0.0, 0.0); n],
            down: vec![Complex64::new(0.0, 0.0); n],
            basis,
            rep: Representation::Position,
            grid,
        }
    }

    pub fn from_components(
        grid: Arc<Grid>,
        up: Vec<Complex64>,
        down: Vec<Complex64>,
        basis: ChannelBasis,
    ) -> Result<Self> {
        if up.len() != grid.n_points() || down.len() != grid.n_points() {
            return Err(Error::GridMismatch(format!(
                "component length {}/{} does not match grid size {}",
                up.len(),
                down.len(),
                grid.n_points()
            )));
        }
        Ok(WavePacket {
            up,
            down,
            basis,
            rep: Representation::Position,
            grid,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Squared norm, including the integration weight.
    pub fn norm_sq(&self) -> f64 {
        let w = self.grid.weight(self.rep);
        let s: f64 = self
            .up
            .iter()
            .chain(self.down.iter())
            .map(|c| c.norm_sqr())
            .sum();
        s * w
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Population of the upper channel (weighted, not normalized).
    pub fn population_up(&self) -> f64 {
        let w = self.grid.weight(self.rep);
        self.up.iter().map(|c| c.norm_sqr()).sum::<f64>() * w
    }

    pub fn population_down(&self) -> f64 {
        let w = self.grid.weight(self.rep);
        self.down.iter().map(|c| c.norm_sqr()).sum::<f64>() * w
    }

    /// Rescales to unit norm.
    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let s = 1.0 / n;
            for c in self.up.iter_mut().chain(self.down.iter_mut()) {
                *c *= s;
            }
        }
    }

    /// Largest absolute amplitude over both channels.
    pub fn peak_abs(&self) -> f64 {
        self.up
            .iter()
            .chain(self.down.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Ratio of the largest boundary amplitude to the peak amplitude.
    ///
    /// Values above ~1e-8 signal that the packet has reached the periodic
    /// boundary and the grid is too small for the scenario.
    pub fn boundary_fraction(&self) -> f64 {
        let n = self.grid.n_points();
        let peak = self.peak_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let edge = [0, 1, n - 2, n - 1]
            .iter()
            .flat_map(|&k| [self.up[k].norm(), self.down[k].norm()])
            .fold(0.0, f64::max);
        edge / peak
    }

    /// Norm fraction within the outer `edge_frac` of the box on each side.
    ///
    /// The run driver aborts when this mass grows past its threshold: the
    /// packet bulk is reaching the periodic boundary and the grid is too
    /// small for the scenario.
    pub fn boundary_mass_fraction(&self, edge_frac: f64) -> f64 {
        let n = self.grid.n_points();
        let margin = ((n as f64 * edge_frac).ceil() as usize).clamp(1, n / 2);
        let mut edge = 0.0;
        let mut total = 0.0;
        for k in 0..n {
            let d = self.up[k].norm_sqr() + self.down[k].norm_sqr();
            total += d;
            if k < margin || k >= n - margin {
                edge += d;
            }
        }
        if total > 0.0 {
            edge / total
        } else {
            0.0
        }
    }

    /// True if every amplitude is finite.
    pub fn is_finite(&self) -> bool {
        self.up
            .iter()
            .chain(self.down.iter())
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn check_compatible(&self, other: &WavePacket) -> Result<()> {
        if self.grid.as_ref() != other.grid.as_ref() {
            return Err(Error::GridMismatch(
                "wave packets live on different grids".into(),
            ));
        }
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis.name(),
                got: other.basis.name(),
            });
        }
        if self.rep != other.rep {
            return Err(Error::RepresentationMismatch {
                expected: self.rep.name(),
                got: other.rep.name(),
            });
        }
        Ok(())
    }
}

/// Two-channel inner product `<a|b> = w * sum(conj(a_up) b_up + conj(a_down) b_down)`.
///
/// Conjugate-symmetric: `inner_product(a, b) = conj(inner_product(b, a))`.
pub fn inner_product(a: &WavePacket, b: &WavePacket) -> Result<Complex64> {
    a.check_compatible(b)?;
    let w = a.grid.weight(a.rep);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.up.iter().zip(b.up.iter()) {
        acc += x.conj() * y;
    }
    for (x, y) in a.down.iter().zip(b.down.iter()) {
        acc += x.conj() * y;
    }
    Ok(acc * w)
}

/// Cached FFT plans plus the phase bookkeeping that makes the transform pair
/// unitary with respect to the physical measures `dq` and `dp`.
///
/// Forward: `psi~(p) = dq/sqrt(2 pi) * sum_j psi(q_j) exp(-i p q_j)`, so a
/// packet at rest centred on `q0` maps to a momentum packet centred on zero
/// with phase linear in `p*q0`. One workspace per propagation; never shared.
pub struct Fourier {
    grid: Arc<Grid>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    /// exp(-i p_k q_min) per momentum bin.
    phase: Vec<Complex64>,
}

impl Fourier {
    pub fn new(grid: Arc<Grid>) -> Self {
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(grid.n_points());
        let ifft = planner.plan_fft_inverse(grid.n_points());
        let scratch_len = fft.get_inplace_scratch_len().max(ifft.get_inplace_scratch_len());
        let phase = grid
            .p_values()
            .iter()
            .map(|&p| Complex64::from_polar(1.0, -p * grid.q_min()))
            .collect();
        Fourier {
            grid,
            fft,
            ifft,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            phase,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Raw in-place forward FFT (no physical scaling). Used by the steppers,
    /// which fold all constants into their cached factors.
    pub fn fft_raw(&mut self, data: &mut [Complex64]) {
        self.fft.process_with_scratch(data, &mut self.scratch);
    }

    /// Raw in-place inverse FFT (unnormalized: ifft(fft(x)) = n*x).
    pub fn ifft_raw(&mut self, data: &mut [Complex64]) {
        self.ifft.process_with_scratch(data, &mut self.scratch);
    }

    fn forward_channel(&mut self, data: &mut [Complex64]) {
        let scale = self.grid.dq() / (2.0 * PI).sqrt();
        self.fft.process_with_scratch(data, &mut self.scratch);
        for (c, ph) in data.iter_mut().zip(self.phase.iter()) {
            *c *= scale * ph;
        }
    }

    fn backward_channel(&mut self, data: &mut [Complex64]) {
        let scale = (2.0 * PI).sqrt() / (self.grid.dq() * self.grid.n_points() as f64);
        for (c, ph) in data.iter_mut().zip(self.phase.iter()) {
            *c *= ph.conj();
        }
        self.ifft.process_with_scratch(data, &mut self.scratch);
        for c in data.iter_mut() {
            *c *= scale;
        }
    }

    /// Unitary map to the momentum representation. Norm is preserved to
    /// machine precision and `to_position(to_momentum(psi)) == psi`.
    pub fn to_momentum(&mut self, psi: &WavePacket) -> Result<WavePacket> {
        if psi.rep != Representation::Position {
            return Err(Error::RepresentationMismatch {
                expected: "position",
                got: psi.rep.name(),
            });
        }
        if psi.grid().as_ref() != self.grid.as_ref() {
            return Err(Error::GridMismatch("Fourier workspace grid differs".into()));
        }
        let mut out = psi.clone();
        self.forward_channel(&mut out.up);
        self.forward_channel(&mut out.down);
        out.rep = Representation::Momentum;
        Ok(out)
    }

    /// Inverse of [`Fourier::to_momentum`].
    pub fn to_position(&mut self, psi: &WavePacket) -> Result<WavePacket> {
        if psi.rep != Representation::Momentum {
            return Err(Error::RepresentationMismatch {
                expected: "momentum",
                got: psi.rep.name(),
            });
        }
        if psi.grid().as_ref() != self.grid.as_ref() {
            return Err(Error::GridMismatch("Fourier workspace grid differs".into()));
        }
        let mut out = psi.clone();
        self.backward_channel(&mut out.up);
        self.backward_channel(&mut out.down);
        out.rep = Representation::Position;
        Ok(out)
    }
}
