//! Semiclassical energy manifolds in phase space: contours of
//! `eps_pm(p, q) = p^2/2 + q^2/2 +- lambda` at fixed energy.
//!
//! For the Rabi model `lambda = sqrt(Omega^2/4 + 2 g0^2 q^2)` and contours
//! are traced by sweeping `q` and solving for the two `p` branches, which
//! handles the non-star-shaped lower-sheet loops. For the JC model the
//! coupling depends on `q^2 + p^2` only, so contours are exact circles and
//! the radius is found by bisection.

use crate::error::{Error, Result};
use crate::models::{Model, ModelParams};
use crate::propagator::Sheet;

/// Closed constant-energy contour(s) on one adiabatic sheet.
#[derive(Debug, Clone)]
pub struct EnergyManifold {
    pub energy: f64,
    pub sheet: Sheet,
    /// One or two closed loops of `(q, p)` points.
    pub loops: Vec<Vec<(f64, f64)>>,
}

/// Semiclassical sheet energy `eps_pm(p, q)`.
pub fn sheet_energy(params: &ModelParams, sheet: Sheet, q: f64, p: f64) -> f64 {
    let sign = match sheet {
        Sheet::Upper => 1.0,
        Sheet::Lower => -1.0,
    };
    let lambda = match params.model {
        Model::JaynesCummings | Model::JcInteractionPicture => {
            let d = params.detuning();
            (0.25 * d * d + 0.5 * params.g0 * params.g0 * (q * q + p * p)).sqrt()
        }
        _ => {
            let o = params.omega_atom;
            (0.25 * o * o + 2.0 * params.g0 * params.g0 * q * q).sqrt()
        }
    };
    0.5 * (p * p + q * q) + sign * lambda
}

impl EnergyManifold {
    /// Largest `|eps(p, q) - energy|` over all contour points.
    pub fn max_residual(&self, params: &ModelParams) -> f64 {
        self.loops
            .iter()
            .flatten()
            .map(|&(q, p)| (sheet_energy(params, self.sheet, q, p) - self.energy).abs())
            .fold(0.0, f64::max)
    }
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || hi - lo < 1e-16 * (1.0 + hi.abs()) {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Allowed `q` intervals where the sheet potential lies at or below `eps0`.
fn allowed_intervals(eps0: f64, w: impl Fn(f64) -> f64, q_bound: f64) -> Vec<(f64, f64)> {
    let n = 20_000;
    let dq = 2.0 * q_bound / n as f64;
    let mut intervals = Vec::new();
    let mut inside = false;
    let mut start = 0.0;
    let mut prev_q = -q_bound;
    let mut prev_f = w(prev_q) - eps0;
    for k in 1..=n {
        let q = -q_bound + k as f64 * dq;
        let f = w(q) - eps0;
        if !inside && prev_f > 0.0 && f <= 0.0 {
            start = bisect(prev_q, q, |x| w(x) - eps0);
            inside = true;
        } else if inside && prev_f <= 0.0 && f > 0.0 {
            let end = bisect(prev_q, q, |x| w(x) - eps0);
            intervals.push((start, end));
            inside = false;
        }
        prev_q = q;
        prev_f = f;
    }
    if inside {
        intervals.push((start, q_bound));
    }
    intervals
}

/// Contour(s) of the sheet energy at `eps0`, sampled with `n_samples` points
/// per loop. Below the barrier top of a double-welled lower sheet this
/// returns two disjoint loops.
pub fn manifold_contour(
    eps0: f64,
    sheet: Sheet,
    params: &ModelParams,
    n_samples: usize,
) -> Result<EnergyManifold> {
    let n_samples = n_samples.max(8);
    match params.model {
        Model::JaynesCummings | Model::JcInteractionPicture => {
            // rotational symmetry: solve W(r) = eps0 for the radius
            let w = |r: f64| sheet_energy(params, sheet, r, 0.0);
            let r_bound = (2.0 * (eps0.abs() + 1.0)).sqrt()
                + params.g0
                + params.detuning().abs()
                + 4.0;
            let intervals = allowed_intervals(eps0, w, r_bound);
            // keep radii in r >= 0; each interval boundary with r > 0 is a circle
            let mut radii = Vec::new();
            for (a, b) in intervals {
                for r in [a, b] {
                    if r > 1e-10 {
                        radii.push(r);
                    }
                }
            }
            radii.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            if radii.is_empty() {
                return Err(Error::EmptyContour(format!(
                    "no radius satisfies eps = {eps0} on the {sheet:?} sheet"
                )));
            }
            let loops = radii
                .iter()
                .map(|&r| {
                    (0..n_samples)
                        .map(|k| {
                            let th = 2.0 * std::f64::consts::PI * k as f64 / n_samples as f64;
                            (r * th.cos(), r * th.sin())
                        })
                        .collect()
                })
                .collect();
            Ok(EnergyManifold {
                energy: eps0,
                sheet,
                loops,
            })
        }
        _ => {
            let w = |q: f64| sheet_energy(params, sheet, q, 0.0);
            let q_bound = (2.0 * (eps0.abs() + 1.0)).sqrt() + 2.0 * params.g0 + 4.0;
            let intervals = allowed_intervals(eps0, w, q_bound);
            if intervals.is_empty() {
                return Err(Error::EmptyContour(format!(
                    "eps = {eps0} lies below the {sheet:?} sheet minimum"
                )));
            }
            let half = n_samples / 2;
            let loops = intervals
                .iter()
                .map(|&(a, b)| {
                    let mut pts = Vec::with_capacity(2 * half);
                    // +p branch left to right, then -p branch back
                    for k in 0..=half {
                        let q = a + (b - a) * k as f64 / half as f64;
                        let rest = (2.0 * (eps0 - w(q))).max(0.0);
                        pts.push((q, rest.sqrt()));
                    }
                    for k in (1..half).rev() {
                        let q = a + (b - a) * k as f64 / half as f64;
                        let rest = (2.0 * (eps0 - w(q))).max(0.0);
                        pts.push((q, -rest.sqrt()));
                    }
                    pts
                })
                .collect();
            Ok(EnergyManifold {
                energy: eps0,
                sheet,
                loops,
            })
        }
    }
}
