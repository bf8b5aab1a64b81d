//! Initial-state construction: Fock and coherent field states tensored with
//! atomic levels or superpositions.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ChannelBasis, Grid, WavePacket};
use crate::models::SQRT_2;

/// Field part of an initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldStateSpec {
    /// Photon-number eigenstate `|n>`.
    Fock(usize),
    /// Coherent state `|nu>` with complex amplitude.
    Coherent(Complex64),
}

impl FieldStateSpec {
    /// Mean photon number: `n` for Fock, `|nu|^2` for coherent states.
    pub fn mean_photon_number(&self) -> f64 {
        match self {
            FieldStateSpec::Fock(n) => *n as f64,
            FieldStateSpec::Coherent(nu) => nu.norm_sqr(),
        }
    }
}

/// Normalized two-level atomic state `c_plus |+> + c_minus |->`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomStateSpec {
    pub amplitude_plus: Complex64,
    pub amplitude_minus: Complex64,
}

impl AtomStateSpec {
    /// Validates that the amplitudes are normalized to 1 within 1e-12.
    pub fn new(amplitude_plus: Complex64, amplitude_minus: Complex64) -> Result<Self> {
        let n = amplitude_plus.norm_sqr() + amplitude_minus.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "atomic amplitudes must be normalized: |c+|^2 + |c-|^2 = {n}"
            )));
        }
        Ok(AtomStateSpec {
            amplitude_plus,
            amplitude_minus,
        })
    }

    /// Normalizes arbitrary (non-zero) amplitudes.
    pub fn normalized(amplitude_plus: Complex64, amplitude_minus: Complex64) -> Result<Self> {
        let n = (amplitude_plus.norm_sqr() + amplitude_minus.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Config("atomic amplitudes must be non-zero and finite".into()));
        }
        Ok(AtomStateSpec {
            amplitude_plus: amplitude_plus / n,
            amplitude_minus: amplitude_minus / n,
        })
    }

    /// Excited atom `|+>`.
    pub fn excited() -> Self {
        AtomStateSpec {
            amplitude_plus: Complex64::new(1.0, 0.0),
            amplitude_minus: Complex64::new(0.0, 0.0),
        }
    }

    /// Ground atom `|->`.
    pub fn ground() -> Self {
        AtomStateSpec {
            amplitude_plus: Complex64::new(0.0, 0.0),
            amplitude_minus: Complex64::new(1.0, 0.0),
        }
    }
}

/// Checks that Fock state `n` is resolvable: classical turning point inside
/// the box and peak momentum `sqrt(2n+1)` below 90% of the momentum cutoff.
fn check_fock_resolution(n: usize, grid: &Grid) -> Result<()> {
    let k_peak = (2.0 * n as f64 + 1.0).sqrt();
    let p_cut = 0.9 * PI / grid.dq();
    if k_peak >= p_cut {
        return Err(Error::Resolution(format!(
            "Fock n = {n}: peak momentum {k_peak:.2} exceeds 0.9*pi/dq = {p_cut:.2}"
        )));
    }
    if k_peak >= 0.9 * grid.q_max() {
        return Err(Error::Resolution(format!(
            "Fock n = {n}: turning point {k_peak:.2} exceeds 0.9*q_max = {:.2}",
            0.9 * grid.q_max()
        )));
    }
    Ok(())
}

/// Harmonic-oscillator eigenfunction `psi_n(q)` on the grid.
///
/// Built with the stable normalized three-term recurrence
/// `psi_{n+1} = q sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1}`,
/// which stays finite for n well beyond 500 (no explicit factorials).
pub fn fock_wavefunction(n: usize, grid: &Grid) -> Result<Vec<f64>> {
    check_fock_resolution(n, grid)?;
    let qs = grid.q_values();
    let norm0 = PI.powf(-0.25);
    let mut prev: Vec<f64> = Vec::new();
    let mut cur: Vec<f64> = qs.iter().map(|&q| norm0 * (-q * q / 2.0).exp()).collect();
    for m in 0..n {
        let c1 = (2.0 / (m as f64 + 1.0)).sqrt();
        let c2 = (m as f64 / (m as f64 + 1.0)).sqrt();
        let next: Vec<f64> = qs
            .iter()
            .enumerate()
            .map(|(k, &q)| {
                let lower = if m == 0 { 0.0 } else { prev[k] };
                c1 * q * cur[k] - c2 * lower
            })
            .collect();
        prev = std::mem::take(&mut cur);
        cur = next;
    }
    Ok(cur)
}

/// Coherent-state wavefunction `psi_nu(q)` on the grid.
///
/// Gaussian envelope `pi^{-1/4} exp(-(q - sqrt2 Re nu)^2 / 2)` times the
/// plane-wave factor `exp(i sqrt2 (Im nu) q)`, so that `<q> = sqrt2 Re nu`
/// and `<p> = sqrt2 Im nu`.
pub fn coherent_wavefunction(nu: Complex64, grid: &Grid) -> Result<Vec<Complex64>> {
    let center = SQRT_2 * nu.re;
    if SQRT_2 * nu.norm() + 5.0 >= grid.q_max() {
        return Err(Error::Resolution(format!(
            "coherent amplitude |nu| = {:.3} too large for q_max = {}",
            nu.norm(),
            grid.q_max()
        )));
    }
    let p_mean = SQRT_2 * nu.im;
    if p_mean.abs() + 5.0 >= PI / grid.dq() {
        return Err(Error::Resolution(format!(
            "coherent mean momentum {p_mean:.3} too large for pi/dq = {:.3}",
            PI / grid.dq()
        )));
    }
    let norm0 = PI.powf(-0.25);
    Ok(grid
        .q_values()
        .iter()
        .map(|&q| {
            let env = norm0 * (-(q - center) * (q - center) / 2.0).exp();
            env * Complex64::from_polar(1.0, p_mean * q)
        })
        .collect())
}

/// Product state `field x atom` in the bare basis, normalized.
pub fn build_initial(
    field: &FieldStateSpec,
    atom: &AtomStateSpec,
    grid: &Arc<Grid>,
) -> Result<WavePacket> {
    let amplitudes: Vec<Complex64> = match field {
        FieldStateSpec::Fock(n) => fock_wavefunction(*n, grid)?
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect(),
        FieldStateSpec::Coherent(nu) => coherent_wavefunction(*nu, grid)?,
    };
    let mut psi = WavePacket::zeros(grid.clone(), ChannelBasis::Bare);
    for (k, a) in amplitudes.iter().enumerate() {
        psi.up[k] = atom.amplitude_plus * a;
        psi.down[k] = atom.amplitude_minus * a;
    }
    psi.normalize();
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use approx::assert_abs_diff_eq;

    fn grid_moment(values: &[f64], grid: &Grid, power: i32) -> f64 {
        values
            .iter()
            .zip(grid.q_values())
            .map(|(&v, &q)| v * v * q.powi(power))
            .sum::<f64>()
            * grid.dq()
    }

    #[test]
    fn ground_state_matches_closed_form() {
        let grid = make_grid(512, 20.0).unwrap();
        let f0 = fock_wavefunction(0, &grid).unwrap();
        for (k, &q) in grid.q_values().iter().enumerate() {
            let expected = PI.powf(-0.25) * (-q * q / 2.0).exp();
            assert_abs_diff_eq!(f0[k], expected, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(grid_moment(&f0, &grid, 0), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn fock_parity_nodes_and_norm() {
        let grid = make_grid(1024, 25.0).unwrap();
        for n in [1usize, 2, 5, 8] {
            let f = fock_wavefunction(n, &grid).unwrap();
            assert_abs_diff_eq!(grid_moment(&f, &grid, 0), 1.0, epsilon = 1e-10);
            // parity (-1)^n
            let m = grid.n_points();
            for k in 1..m / 2 {
                let mirror = f[m - k]; // q_{m-k} = -q_k
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_abs_diff_eq!(f[k], sign * mirror, epsilon = 1e-12);
            }
            // exactly n interior sign changes among non-negligible samples
            let peak = f.iter().cloned().fold(0.0f64, |a, x| a.max(x.abs()));
            let significant: Vec<f64> = f.iter().cloned().filter(|x| x.abs() > 1e-10 * peak).collect();
            let changes = significant.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
            assert_eq!(changes, n, "n = {n}");
        }
        // odd n vanishes at the origin
        let f1 = fock_wavefunction(1, &grid).unwrap();
        let k0 = grid.q_values().iter().position(|&q| q == 0.0).unwrap();
        assert_abs_diff_eq!(f1[k0], 0.0, epsilon = 1e-15);
    }

    /// Independent oracle for <q^2> of Fock 2: Simpson quadrature of the
    /// explicit Hermite form H_2(q) = 4q^2 - 2 on a fine, unrelated lattice.
    #[test]
    fn fock2_variance_against_quadrature_oracle() {
        let h2 = |q: f64| {
            let norm = (8.0f64).sqrt().recip() * PI.powf(-0.25); // (2^2 2!)^{-1/2} pi^{-1/4}
            norm * (4.0 * q * q - 2.0) * (-q * q / 2.0).exp()
        };
        let n = 40_001;
        let (a, b) = (-25.0, 25.0);
        let h = (b - a) / (n as f64 - 1.0);
        let mut second_moment = 0.0;
        for k in 0..n {
            let q = a + k as f64 * h;
            let w = if k == 0 || k == n - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            second_moment += w * h2(q).powi(2) * q * q;
        }
        second_moment *= h / 3.0;
        assert_abs_diff_eq!(second_moment, 2.5, epsilon = 1e-10);

        // and the grid construction agrees with the oracle value
        let grid = make_grid(1024, 25.0).unwrap();
        let f2 = fock_wavefunction(2, &grid).unwrap();
        assert_abs_diff_eq!(grid_moment(&f2, &grid, 2), 2.5, epsilon = 1e-8);
    }

    #[test]
    fn fock_orthogonality_up_to_30() {
        let grid = make_grid(2048, 40.0).unwrap();
        let states: Vec<Vec<f64>> = (0..=30)
            .map(|n| fock_wavefunction(n, &grid).unwrap())
            .collect();
        for m in 0..=30usize {
            for n in 0..m {
                let overlap: f64 = states[m]
                    .iter()
                    .zip(states[n].iter())
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    * grid.dq();
                assert!(overlap.abs() < 1e-8, "<{m}|{n}> = {overlap}");
            }
        }
    }

    #[test]
    fn recurrence_stays_finite_up_to_500() {
        let grid = make_grid(4096, 40.0).unwrap();
        let f = fock_wavefunction(500, &grid).unwrap();
        assert!(f.iter().all(|x| x.is_finite()));
        assert_abs_diff_eq!(grid_moment(&f, &grid, 0), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn fock_resolution_bound() {
        let grid = make_grid(64, 8.0).unwrap();
        assert!(fock_wavefunction(40, &grid).is_err());
    }

    #[test]
    fn vacuum_equals_fock_zero() {
        let grid = make_grid(512, 20.0).unwrap();
        let c = coherent_wavefunction(Complex64::new(0.0, 0.0), &grid).unwrap();
        let f0 = fock_wavefunction(0, &grid).unwrap();
        for k in 0..grid.n_points() {
            assert_abs_diff_eq!(c[k].re, f0[k], epsilon = 1e-14);
            assert_abs_diff_eq!(c[k].im, 0.0);
        }
    }

    #[test]
    fn coherent_centers_and_mean_photon_number() {
        let grid = make_grid(2048, 40.0).unwrap();
        let nu = Complex64::new(4.0, 0.0);
        let c = coherent_wavefunction(nu, &grid).unwrap();
        let dens: Vec<f64> = c.iter().map(|z| z.norm_sqr()).collect();
        let mean_q: f64 = dens
            .iter()
            .zip(grid.q_values())
            .map(|(d, q)| d * q)
            .sum::<f64>()
            * grid.dq();
        assert_abs_diff_eq!(mean_q, SQRT_2 * 4.0, epsilon = 1e-8);
        assert_eq!(FieldStateSpec::Coherent(nu).mean_photon_number(), 16.0);
    }

    #[test]
    fn complex_amplitude_sets_both_means() {
        use crate::grid::Fourier;
        let grid = make_grid(2048, 40.0).unwrap();
        let nu = Complex64::new(2.0, -1.5);
        let c = coherent_wavefunction(nu, &grid).unwrap();
        let mut psi = WavePacket::zeros(grid.clone(), ChannelBasis::Bare);
        psi.up = c;
        let mean_q: f64 = psi
            .up
            .iter()
            .zip(grid.q_values())
            .map(|(z, q)| z.norm_sqr() * q)
            .sum::<f64>()
            * grid.dq();
        assert_abs_diff_eq!(mean_q, SQRT_2 * 2.0, epsilon = 1e-8);
        let mut fourier = Fourier::new(grid.clone());
        let phi = fourier.to_momentum(&psi).unwrap();
        let mean_p: f64 = phi
            .up
            .iter()
            .zip(grid.p_values())
            .map(|(z, p)| z.norm_sqr() * p)
            .sum::<f64>()
            * grid.dp();
        assert_abs_diff_eq!(mean_p, SQRT_2 * (-1.5), epsilon = 1e-8);
    }

    /// Coherent-state Fock coefficients follow the Poisson distribution;
    /// oracle is direct quadrature of the overlap integral.
    #[test]
    fn coherent_overlaps_match_poisson() {
        let grid = make_grid(1024, 25.0).unwrap();
        let nu = Complex64::new(2.0, 0.0);
        let c = coherent_wavefunction(nu, &grid).unwrap();
        let mut factorial = 1.0;
        for n in 0..=8usize {
            if n > 0 {
                factorial *= n as f64;
            }
            let fock = fock_wavefunction(n, &grid).unwrap();
            let overlap: Complex64 = c
                .iter()
                .zip(fock.iter())
                .map(|(z, f)| z * f)
                .sum::<Complex64>()
                * grid.dq();
            let poisson = (-nu.norm_sqr()).exp() * nu.norm_sqr().powi(n as i32) / factorial;
            assert_abs_diff_eq!(overlap.norm_sqr(), poisson, epsilon = 1e-6);
        }
    }

    #[test]
    fn coherent_out_of_grid_is_rejected() {
        let grid = make_grid(256, 10.0).unwrap();
        assert!(coherent_wavefunction(Complex64::new(4.0, 0.0), &grid).is_err());
    }

    #[test]
    fn build_initial_products() {
        let grid = make_grid(512, 20.0).unwrap();
        let psi = build_initial(&FieldStateSpec::Fock(0), &AtomStateSpec::excited(), &grid).unwrap();
        assert_eq!(psi.basis, ChannelBasis::Bare);
        assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
        assert!(psi.population_down() == 0.0);

        let even = AtomStateSpec::normalized(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let psi = build_initial(&FieldStateSpec::Fock(0), &even, &grid).unwrap();
        assert_abs_diff_eq!(psi.population_up(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(psi.population_down(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn atom_spec_validation() {
        assert!(AtomStateSpec::new(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)).is_err());
        assert!(AtomStateSpec::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).is_ok());
    }
}
