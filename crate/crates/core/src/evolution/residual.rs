//! Residual of (BO) on a sampled trajectory.
//!
//! Time derivatives use five-point, fourth-order finite differences: central
//! in the interior and one-sided at the two first and last samples. The
//! stencil is applied to `V(t_i − t_j) f_j`, which yields
//! `(∂ₜ + H∂²ₓ) f` at `t_i` directly and keeps the fast linear phase out of
//! the difference quotient.

use num_complex::Complex64;

use super::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Five-point fourth-order first-derivative weights (times `12 h`) at offset
/// `pos` within the stencil `0..5`.
fn fd_weights(pos: usize) -> [f64; 5] {
    match pos {
        0 => [-25.0, 48.0, -36.0, 16.0, -3.0],
        1 => [-3.0, -10.0, 18.0, -6.0, 1.0],
        2 => [1.0, -8.0, 0.0, 8.0, -1.0],
        3 => [-1.0, 6.0, -18.0, 10.0, 3.0],
        4 => [3.0, -16.0, 36.0, -48.0, 25.0],
        _ => unreachable!(),
    }
}

fn stencil_start(i: usize, len: usize) -> usize {
    i.saturating_sub(2).min(len - 5)
}

fn derivative_with(
    states: &[SpectralField],
    dt: f64,
    propagate: impl Fn(&SpectralField, f64) -> SpectralField,
) -> Result<Vec<SpectralField>> {
    let len = states.len();
    if len < 5 {
        return Err(Error::TooFewSamples { needed: 5, got: len });
    }
    let grid = *states[0].grid();
    let m = grid.n_modes();
    (0..len)
        .map(|i| {
            let start = stencil_start(i, len);
            let w = fd_weights(i - start);
            let mut acc = vec![ZERO; m];
            for (l, wl) in w.iter().enumerate() {
                if *wl == 0.0 {
                    continue;
                }
                let j = start + l;
                let shifted = propagate(&states[j], (i as f64 - j as f64) * dt);
                for (a, c) in acc.iter_mut().zip(shifted.coeffs()) {
                    *a += c * *wl;
                }
            }
            let s = 1.0 / (12.0 * dt);
            acc.iter_mut().for_each(|c| *c *= s);
            SpectralField::new(grid, acc)
        })
        .collect()
}

/// Plain `∂ₜf` at every sample.
pub fn time_derivative(states: &[SpectralField], dt: f64) -> Result<Vec<SpectralField>> {
    derivative_with(states, dt, |s, _| s.clone())
}

/// `(∂ₜ + L) f` at every sample, where `L` has symbol `iξ|ξ|` (so `L = H∂²ₓ`,
/// and `L = −i∂²ₓ` on positive frequencies).
pub fn linear_time_derivative(states: &[SpectralField], dt: f64) -> Result<Vec<SpectralField>> {
    derivative_with(states, dt, |s, tau| s.free_evolve(tau))
}

/// `‖∂ₜu + H∂²ₓu − u∂ₓu‖_{L²}` at every sample of `u`.
pub fn residual_bo(u: &Trajectory) -> Result<Vec<f64>> {
    let lin = linear_time_derivative(u.states(), u.dt())?;
    u.states()
        .iter()
        .zip(&lin)
        .map(|(s, d)| {
            let nonlinear = s.product(s, 2)?.derivative().scale_real(0.5);
            Ok(d.sub(&nonlinear)?.l2_norm())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::spectral::RealField;

    #[test]
    fn weights_differentiate_quartics_exactly() {
        let f = |t: f64| t.powi(4) - 2.0 * t.powi(3) + t;
        let df = |t: f64| 4.0 * t.powi(3) - 6.0 * t * t + 1.0;
        let h = 0.1;
        for pos in 0..5 {
            let w = fd_weights(pos);
            let t0 = pos as f64 * h;
            let approx: f64 = (0..5).map(|l| w[l] * f(l as f64 * h)).sum::<f64>() / (12.0 * h);
            assert!((approx - df(t0)).abs() < 1e-12, "pos {pos}");
        }
    }

    #[test]
    fn zero_trajectory_has_zero_residual() {
        let g = Grid::new(1.0, 16).unwrap();
        let tr = Trajectory::new(g, 0.0, 0.1, vec![SpectralField::zeros(g); 7]).unwrap();
        assert!(residual_bo(&tr).unwrap().iter().all(|&r| r == 0.0));
    }

    #[test]
    fn needs_five_samples() {
        let g = Grid::new(1.0, 16).unwrap();
        let tr = Trajectory::new(g, 0.0, 0.1, vec![SpectralField::zeros(g); 4]).unwrap();
        assert!(matches!(residual_bo(&tr), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn linear_derivative_vanishes_on_free_solutions() {
        let g = Grid::new(1.0, 32).unwrap();
        let phi = RealField::from_fn(g, |x| (3.0 * x).cos() + x.sin()).unwrap().to_spectral();
        let states: Vec<_> = (0..9).map(|i| phi.free_evolve(0.05 * i as f64)).collect();
        let d = linear_time_derivative(&states, 0.05).unwrap();
        assert!(d.iter().all(|s| s.l2_norm() < 1e-12));
    }
}
