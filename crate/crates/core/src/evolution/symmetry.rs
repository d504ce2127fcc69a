//! Galilean mean reduction and the dilation symmetry
//! `u_β(t, x) = β⁻¹ u(β⁻² t, β⁻¹ x)`.

use num_complex::Complex64;

use super::Trajectory;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::spectral::{RealField, SpectralField};

/// Splits `u0` into its mean `m` and the mean-zero remainder.
pub fn reduce_mean(u0: &RealField) -> (RealField, f64) {
    let m = u0.mean();
    (u0.add_constant(-m), m)
}

/// Inverts [`reduce_mean`] along a trajectory: `u(t, x) = v(t, x + t m) + m`.
pub fn reconstruct(v: &Trajectory, m: f64) -> Result<Trajectory> {
    if m == 0.0 {
        return Ok(v.clone());
    }
    let period = v.grid().period();
    v.map_states(|i, s| {
        let t = v.time(i);
        let mut coeffs = s
            .multiply(|xi| Complex64::from_polar(1.0, xi * t * m))
            .into_coeffs();
        coeffs[0] += m * period;
        SpectralField::new(*s.grid(), coeffs).expect("finite shifted field")
    })
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 1.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("dilation factor must be >= 1, got {beta}")));
    }
    Ok(())
}

/// Dilates one snapshot onto the period `2πλβ`.
///
/// With the same number of samples, `û_β(n/(λβ)) = û(n/λ)`: the coefficient
/// array is unchanged and only the grid changes.
pub fn dilate_field(u: &SpectralField, beta: f64) -> Result<SpectralField> {
    check_beta(beta)?;
    let g = u.grid();
    let target = Grid::new(g.lambda() * beta, g.n_modes())?;
    SpectralField::new(target, u.coeffs().to_vec())
}

/// Dilates a trajectory: period `2πλβ`, time lattice scaled by `β²`.
pub fn dilate(u: &Trajectory, beta: f64) -> Result<Trajectory> {
    check_beta(beta)?;
    let states = u
        .states()
        .iter()
        .map(|s| dilate_field(s, beta))
        .collect::<Result<Vec<_>>>()?;
    let grid = *states[0].grid();
    let out = Trajectory::new(grid, u.t0() * beta * beta, u.dt() * beta * beta, states)?;
    Ok(match u.meta() {
        Some(cfg) => out.with_meta(crate::evolution::SolverConfig {
            dt: cfg.dt * beta * beta,
            ..*cfg
        }),
        None => out,
    })
}

/// [`dilate`] followed by spectral resampling to `target_modes` samples.
/// Fails if a coefficient above `1e-12` relative would be dropped.
pub fn dilate_onto(u: &Trajectory, beta: f64, target_modes: usize) -> Result<Trajectory> {
    let d = dilate(u, beta)?;
    let target = d.grid().with_modes(target_modes)?;
    let scale = d
        .states()
        .iter()
        .flat_map(|s| s.coeffs().iter().map(|c| c.norm()))
        .fold(0.0, f64::max);
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let meta = d.meta().copied();
    let states = d
        .states()
        .iter()
        .map(|s| s.resample(target, tol))
        .collect::<Result<Vec<_>>>()?;
    let out = Trajectory::new(target, d.t0(), d.dt(), states)?;
    Ok(match meta {
        Some(cfg) => out.with_meta(cfg),
        None => out,
    })
}
