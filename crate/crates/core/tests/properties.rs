//! Property tests for the structural invariants: transform unitarity,
//! Hermiticity of the reassembled Hamiltonians, the Poisson statistics of
//! coherent states, and the curve identities.

use num_complex::Complex64;
use proptest::prelude::*;
use quadwave::analytic::adiabatic_potential;
use quadwave::grid::{inner_product, make_grid, ChannelBasis, Fourier, WavePacket};
use quadwave::models::{kinetic_part, potential_part, Model, ModelParams};
use quadwave::states::{coherent_wavefunction, fock_wavefunction};

fn random_packet(seed: &[f64]) -> WavePacket {
    // superpose a handful of displaced Gaussians controlled by the seed
    let grid = make_grid(256, 14.0).unwrap();
    let mut psi = WavePacket::zeros(grid.clone(), ChannelBasis::Bare);
    for (j, chunk) in seed.chunks(4).enumerate() {
        if chunk.len() < 4 {
            break;
        }
        let (center, phase, width, weight) = (
            4.0 * chunk[0],
            3.0 * chunk[1],
            0.5 + chunk[2].abs(),
            chunk[3],
        );
        for (k, &q) in grid.q_values().iter().enumerate() {
            let env = (-(q - center) * (q - center) / (2.0 * width * width)).exp();
            let c = weight * env * Complex64::from_polar(1.0, phase * q);
            if j % 2 == 0 {
                psi.up[k] += c;
            } else {
                psi.down[k] += c;
            }
        }
    }
    if psi.norm() > 1e-12 {
        psi.normalize();
    } else {
        psi.up[64] = Complex64::new(1.0, 0.0);
        psi.normalize();
    }
    psi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Parseval plus exact round trip for arbitrary superpositions.
    #[test]
    fn transform_is_unitary(seed in prop::collection::vec(-1.0f64..1.0, 8..16)) {
        let psi = random_packet(&seed);
        let mut fourier = Fourier::new(psi.grid().clone());
        let phi = fourier.to_momentum(&psi).unwrap();
        prop_assert!((phi.norm() - psi.norm()).abs() < 1e-12);
        let back = fourier.to_position(&phi).unwrap();
        let worst = psi
            .up
            .iter()
            .zip(back.up.iter())
            .chain(psi.down.iter().zip(back.down.iter()))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(worst < 1e-12);
    }

    /// Sesquilinearity and positivity of the inner product.
    #[test]
    fn inner_product_is_sesquilinear(
        seed_a in prop::collection::vec(-1.0f64..1.0, 8..16),
        seed_b in prop::collection::vec(-1.0f64..1.0, 8..16),
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
    ) {
        let a = random_packet(&seed_a);
        let b = random_packet(&seed_b);
        let lambda = Complex64::new(re, im);
        let mut scaled = b.clone();
        for c in scaled.up.iter_mut().chain(scaled.down.iter_mut()) {
            *c *= lambda;
        }
        let lhs = inner_product(&a, &scaled).unwrap();
        let rhs = lambda * inner_product(&a, &b).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
        let aa = inner_product(&a, &a).unwrap();
        prop_assert!(aa.re >= 0.0 && aa.im.abs() < 1e-12);
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
    }

    /// Reassembled H (potential in q, kinetic applied in p) is Hermitian for
    /// every model and random parameters.
    #[test]
    fn hamiltonian_is_hermitian(
        seed_a in prop::collection::vec(-1.0f64..1.0, 8..12),
        seed_b in prop::collection::vec(-1.0f64..1.0, 8..12),
        omega in 0.1f64..6.0,
        g0 in 0.0f64..2.0,
        model_pick in 0usize..4,
    ) {
        let model = [
            Model::Rabi,
            Model::JaynesCummings,
            Model::JcInteractionPicture,
            Model::LandauZener,
        ][model_pick];
        let params = ModelParams::new(omega, g0, model).unwrap();
        let a = random_packet(&seed_a);
        let b = random_packet(&seed_b);
        let grid = a.grid().clone();
        let v = potential_part(&params, &grid).unwrap();
        let k = kinetic_part(&params, &grid).unwrap();
        let mut fourier = Fourier::new(grid.clone());
        let apply = |psi: &WavePacket, fourier: &mut Fourier| {
            let mut vp = psi.clone();
            v.apply(&mut vp.up, &mut vp.down);
            let mut mom = fourier.to_momentum(psi).unwrap();
            k.apply(&mut mom.up, &mut mom.down);
            let kp = fourier.to_position(&mom).unwrap();
            for j in 0..vp.up.len() {
                vp.up[j] += kp.up[j];
                vp.down[j] += kp.down[j];
            }
            vp
        };
        let ha = apply(&a, &mut fourier);
        let hb = apply(&b, &mut fourier);
        let lhs = inner_product(&a, &hb).unwrap();
        let rhs = inner_product(&b, &ha).unwrap().conj();
        prop_assert!((lhs - rhs).norm() < 1e-10, "{model:?}: {lhs} vs {rhs}");
    }

    /// Coherent-state Fock weights follow the Poisson distribution for
    /// complex amplitudes (quadrature oracle on the grid).
    #[test]
    fn coherent_weights_are_poissonian(
        re in -2.2f64..2.2,
        im in -2.2f64..2.2,
    ) {
        let grid = make_grid(1024, 25.0).unwrap();
        let nu = Complex64::new(re, im);
        let c = coherent_wavefunction(nu, &grid).unwrap();
        let nbar = nu.norm_sqr();
        let mut factorial = 1.0;
        for n in 0..=10usize {
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
            let poisson = (-nbar).exp() * nbar.powi(n as i32) / factorial;
            prop_assert!(
                (overlap.norm_sqr() - poisson).abs() < 1e-6,
                "n = {n}: {} vs {poisson}",
                overlap.norm_sqr()
            );
        }
    }

    /// Exact gap identity: V_+ - V_- = 2 sqrt(Omega^2/4 + 2 g0^2 q^2).
    #[test]
    fn adiabatic_gap_identity(
        omega in 0.05f64..8.0,
        g0 in 0.01f64..3.0,
        q in -20.0f64..20.0,
    ) {
        let p = ModelParams::new(omega, g0, Model::Rabi).unwrap();
        let gap = adiabatic_potential(&p, q, true) - adiabatic_potential(&p, q, false);
        let expected = 2.0 * (0.25 * omega * omega + 2.0 * g0 * g0 * q * q).sqrt();
        prop_assert!((gap - expected).abs() <= 1e-12 * expected.max(1.0));
    }
}
