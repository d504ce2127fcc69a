//! The Duhamel operator `G ↦ ∫ V(t−t′) G(t′) dt′`.
//!
//! The integrand is handled in the interaction picture `V(−t′)G(t′)`, which is
//! constant for free solutions and slowly varying for weakly nonlinear ones.
//! It is interpolated by a four-point Lagrange stencil on the trajectory
//! lattice and integrated panel by panel with Gauss–Legendre. For an
//! integrand whose interaction picture oscillates at frequency `ω`, the
//! interpolation error is `O((ω dt)⁴)` relative; use a lattice with
//! `ω dt ≪ 1`.

use num_complex::Complex64;

use super::quadrature::{equispaced_weights, GaussLegendre};
use super::Trajectory;
use crate::error::Result;
use crate::spectral::SpectralField;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const STENCIL: usize = 4;

/// `∫_{t0}^{t} V(t−t′) G(t′) dt′` where `t0` is the first sample of `g` and
/// `t` is one of its lattice times.
pub fn duhamel(g: &Trajectory, t: f64, order: usize) -> Result<SpectralField> {
    let n_t = g.index_of_time(t)?;
    let panels = panel_integrals(g, n_t, order);
    let grid = *g.grid();
    let m = grid.n_modes();
    let mut acc = vec![ZERO; m];
    for p in &panels {
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v;
        }
    }
    let out = SpectralField::new(grid, acc)?;
    Ok(out.free_evolve(t))
}

/// The Duhamel integral at every lattice time of `g`, as a trajectory.
pub fn duhamel_trajectory(g: &Trajectory, order: usize) -> Result<Trajectory> {
    let grid = *g.grid();
    let m = grid.n_modes();
    let panels = panel_integrals(g, g.len() - 1, order);
    let mut acc = vec![ZERO; m];
    let mut states = Vec::with_capacity(g.len());
    states.push(SpectralField::zeros(grid));
    for (i, p) in panels.iter().enumerate() {
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v;
        }
        let t = g.time(i + 1);
        states.push(SpectralField::new(grid, acc.clone())?.free_evolve(t));
    }
    Trajectory::new(grid, g.t0(), g.dt(), states)
}

/// Interaction-picture integrals over the panels `[t_j, t_{j+1}]`, `j < n_end`.
fn panel_integrals(g: &Trajectory, n_end: usize, order: usize) -> Vec<Vec<Complex64>> {
    let grid = *g.grid();
    let m = grid.n_modes();
    let rule = GaussLegendre::new(order.clamp(1, super::quadrature::MAX_ORDER));
    let h = g.dt();
    let pulled: Vec<SpectralField> = g
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| s.free_evolve(-g.time(i)))
        .collect();
    let len = pulled.len();
    let width = STENCIL.min(len);

    (0..n_end)
        .map(|j| {
            let start = j.saturating_sub(1).min(len - width);
            let mut panel = vec![ZERO; m];
            for (&c, &w) in rule.nodes.iter().zip(&rule.weights) {
                let x = (j - start) as f64 + c;
                let lw = equispaced_weights(width, x);
                for (l, &wl) in lw.iter().enumerate() {
                    let coeffs = pulled[start + l].coeffs();
                    let f = w * wl * h;
                    for (p, v) in panel.iter_mut().zip(coeffs) {
                        *p += v * f;
                    }
                }
            }
            panel
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::spectral::RealField;
    use crate::Error;

    fn lattice(g: Grid, n: usize, dt: f64, f: impl Fn(f64) -> SpectralField) -> Trajectory {
        let states = (0..n).map(|i| f(i as f64 * dt)).collect();
        Trajectory::new(g, 0.0, dt, states).unwrap()
    }

    #[test]
    fn zero_forcing() {
        let g = Grid::new(1.0, 16).unwrap();
        let tr = lattice(g, 11, 0.1, |_| SpectralField::zeros(g));
        assert_eq!(duhamel(&tr, 1.0, 4).unwrap().l2_norm(), 0.0);
    }

    #[test]
    fn free_forcing_integrates_to_t_times_free_solution() {
        let g = Grid::new(1.0, 32).unwrap();
        let phi = RealField::from_fn(g, |x| x.cos() + 0.5 * (3.0 * x).sin()).unwrap().to_spectral();
        let tr = lattice(g, 21, 0.05, |t| phi.free_evolve(t));
        for t in [0.35, 1.0] {
            let got = duhamel(&tr, t, 4).unwrap();
            let expect = phi.free_evolve(t).scale_real(t);
            assert!(got.sub(&expect).unwrap().l2_norm() < 1e-13);
        }
    }

    #[test]
    fn second_iterate_forcing_matches_closed_form() {
        // G(t′) = −N sin(2Nx − 2N²t′)/2, i.e. ½∂ₓ(cos²(Nx − N²t′)), with N = 1.
        let g = Grid::new(1.0, 32).unwrap();
        let forcing = |t: f64| {
            RealField::from_fn(g, |x| -0.5 * (2.0 * x - 2.0 * t).sin())
                .unwrap()
                .to_spectral()
        };
        let tr = lattice(g, 201, 0.005, forcing);
        for t in [0.5, 1.0] {
            let got = duhamel(&tr, t, 4).unwrap();
            let expect = RealField::from_fn(g, |x| {
                0.25 * ((2.0 * x - 2.0 * t).cos() - (2.0 * x - 4.0 * t).cos())
            })
            .unwrap()
            .to_spectral();
            let err = got.sub(&expect).unwrap().l2_norm();
            assert!(err < 1e-9, "t = {t}: {err:e}");
        }
    }

    #[test]
    fn cumulative_matches_pointwise() {
        let g = Grid::new(1.0, 16).unwrap();
        let tr = lattice(g, 9, 0.125, |t| {
            RealField::from_fn(g, |x| (x - 2.0 * t).sin() * t).unwrap().to_spectral()
        });
        let all = duhamel_trajectory(&tr, 4).unwrap();
        for i in [0usize, 3, 8] {
            let one = duhamel(&tr, tr.time(i), 4).unwrap();
            assert!(one.sub(all.state(i)).unwrap().l2_norm() < 1e-14);
        }
    }

    #[test]
    fn out_of_range_time() {
        let g = Grid::new(1.0, 16).unwrap();
        let tr = lattice(g, 5, 0.1, |_| SpectralField::zeros(g));
        assert!(matches!(duhamel(&tr, 0.8, 4), Err(Error::TimeOutOfRange { .. })));
    }
}
