//! Integrating-factor RK4 for `∂ₜu + H∂²ₓu = ½∂ₓ(u²)`.
//!
//! The linear part is solved exactly by `V(t)`. Over one step of length `h`,
//! `z(τ) = V(−τ)u(t_n + τ)` obeys `z' = V(−τ) N(V(τ) z)` with
//! `N(u) = ½∂ₓ(u²)`, which is advanced with the classical RK4 tableau.
//! Re-basing the interaction picture at every step keeps all phases below
//! `ξ|ξ|h`.

use num_complex::Complex64;

use super::{SolverConfig, Trajectory};
use crate::error::{Error, Result};
use crate::fft::PaddedTransform;
use crate::grid::Grid;
use crate::spectral::{band_cutoff, RealField, SpectralField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dealiased `½∂ₓ(u²)` on raw coefficient slices.
pub(crate) struct Nonlinearity {
    dx: f64,
    half_ik: Vec<Complex64>,
    padded: PaddedTransform,
    fine: Vec<Complex64>,
    raw: Vec<Complex64>,
}

impl Nonlinearity {
    pub(crate) fn new(grid: &Grid, dealias_fraction: f64) -> Self {
        let m = grid.n_modes();
        let cutoff = band_cutoff(m, dealias_fraction);
        let half_ik = (0..m)
            .map(|k| {
                if grid.wavenumber(k).unsigned_abs() as usize <= cutoff && k != m / 2 {
                    Complex64::new(0.0, 0.5 * grid.xi(k))
                } else {
                    ZERO
                }
            })
            .collect();
        let padded = PaddedTransform::new(m, 2);
        let fine = vec![ZERO; padded.fine_len()];
        Nonlinearity {
            dx: grid.dx(),
            half_ik,
            padded,
            fine,
            raw: vec![ZERO; m],
        }
    }

    /// Writes `N(u)` into `out` and returns `max |u|` over the refined grid.
    pub(crate) fn apply(&mut self, u: &[Complex64], out: &mut [Complex64]) -> f64 {
        let inv_dx = 1.0 / self.dx;
        for (r, c) in self.raw.iter_mut().zip(u) {
            *r = c * inv_dx;
        }
        self.padded.to_fine(&self.raw, &mut self.fine);
        let mut max_abs = 0.0f64;
        for v in self.fine.iter_mut() {
            max_abs = max_abs.max(v.re.abs());
            *v = Complex64::new(v.re * v.re, 0.0);
        }
        self.padded.from_fine(&mut self.fine, &mut self.raw);
        for ((o, r), m) in out.iter_mut().zip(&self.raw).zip(&self.half_ik) {
            *o = r * self.dx * m;
        }
        max_abs
    }
}

/// Dealiased `½∂ₓ(u²)` of a real field.
pub fn nonlinear_term(u: &SpectralField, dealias_fraction: f64) -> SpectralField {
    let mut op = Nonlinearity::new(u.grid(), dealias_fraction);
    let mut out = vec![ZERO; u.grid().n_modes()];
    op.apply(u.coeffs(), &mut out);
    SpectralField::new(*u.grid(), out).expect("finite nonlinear term")
}

/// Solves (BO) from mean-zero `u0` up to `t_final`.
///
/// The step is `t_final / n` with `n = ⌈t_final / cfg.dt⌉`, so the output
/// lattice always ends at `t_final`; every step is stored.
pub fn evolve(u0: &RealField, t_final: f64, cfg: &SolverConfig) -> Result<Trajectory> {
    let spec = u0.to_spectral();
    spec.ensure_mean_zero()?;
    evolve_spectral(&spec, t_final, cfg)
}

/// [`evolve`] starting from spectral data. The mean is not checked here, so
/// this also integrates data with a nonzero mean.
pub fn evolve_spectral(u0: &SpectralField, t_final: f64, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!("final time must be >= 0, got {t_final}")));
    }
    let grid = *u0.grid();
    let m = grid.n_modes();
    let steps = ((t_final / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
    let h = if t_final > 0.0 { t_final / steps as f64 } else { cfg.dt };
    let steps = if t_final > 0.0 { steps } else { 0 };

    let phase = |tau: f64| -> Vec<Complex64> {
        (0..m)
            .map(|k| {
                let xi = grid.xi(k);
                Complex64::from_polar(1.0, -xi * xi.abs() * tau)
            })
            .collect()
    };
    let e_half = phase(0.5 * h);
    let e_full = phase(h);

    let mut op = Nonlinearity::new(&grid, cfg.dealias_fraction);
    let mut u = u0.coeffs().to_vec();
    let mut stage = vec![ZERO; m];
    let mut k1 = vec![ZERO; m];
    let mut k2 = vec![ZERO; m];
    let mut k3 = vec![ZERO; m];
    let mut k4 = vec![ZERO; m];

    let check = |t: f64, max_abs: f64| -> Result<()> {
        if !max_abs.is_finite() || max_abs > cfg.blowup_threshold {
            return Err(Error::Blowup {
                t,
                max_abs,
                threshold: cfg.blowup_threshold,
            });
        }
        Ok(())
    };

    let mut states = Vec::with_capacity(steps + 1);
    states.push(u0.clone());
    for n in 0..steps {
        let t = n as f64 * h;
        let amp = op.apply(&u, &mut k1);
        check(t, amp)?;

        for j in 0..m {
            stage[j] = e_half[j] * (u[j] + 0.5 * h * k1[j]);
        }
        op.apply(&stage, &mut k2);
        for j in 0..m {
            // k2 lives at τ = h/2 in the physical picture; pull u back there too.
            stage[j] = e_half[j] * u[j] + 0.5 * h * k2[j];
        }
        op.apply(&stage, &mut k3);
        for j in 0..m {
            stage[j] = e_full[j] * u[j] + h * e_half[j] * k3[j];
        }
        op.apply(&stage, &mut k4);
        for j in 0..m {
            u[j] = e_full[j] * u[j]
                + h / 6.0 * (e_full[j] * k1[j] + 2.0 * e_half[j] * (k2[j] + k3[j]) + k4[j]);
        }
        states.push(SpectralField::new(grid, u.clone())?);
    }
    if let Some(last) = states.last() {
        let amp = last.to_physical_real_part().max_abs();
        check(t_final, amp)?;
    }
    Ok(Trajectory::new(grid, 0.0, h, states)?.with_meta(SolverConfig { dt: h, ..*cfg }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::RealField;

    fn grid(m: usize) -> Grid {
        Grid::new(1.0, m).unwrap()
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = grid(32);
        let tr = evolve(&RealField::zeros(g), 0.5, &SolverConfig::with_dt(0.1)).unwrap();
        assert_eq!(tr.len(), 6);
        assert!(tr.states().iter().all(|s| s.l2_norm() == 0.0));
    }

    #[test]
    fn step_is_adjusted_to_hit_final_time() {
        let g = grid(16);
        let u0 = RealField::from_fn(g, |x| 0.01 * x.cos()).unwrap();
        let tr = evolve(&u0, 1.0, &SolverConfig::with_dt(0.3)).unwrap();
        assert_eq!(tr.len(), 5);
        assert!((tr.t_end() - 1.0).abs() < 1e-15);
        assert!((tr.meta().unwrap().dt - 0.25).abs() < 1e-15);
    }

    #[test]
    fn nonzero_mean_is_rejected() {
        let g = grid(16);
        let u0 = RealField::from_fn(g, |x| 1.0 + x.cos()).unwrap();
        assert!(matches!(
            evolve(&u0, 1.0, &SolverConfig::default()),
            Err(Error::MeanNotZero(_))
        ));
    }

    #[test]
    fn blowup_is_reported() {
        let g = grid(16);
        let u0 = RealField::from_fn(g, |x| 2.0 * x.cos()).unwrap();
        let cfg = SolverConfig {
            blowup_threshold: 1.0,
            ..SolverConfig::with_dt(0.01)
        };
        assert!(matches!(evolve(&u0, 0.1, &cfg), Err(Error::Blowup { .. })));
    }

    #[test]
    fn nonlinear_term_of_cosine() {
        // ½∂ₓ(cos²x) = −½ sin 2x
        let g = grid(32);
        let u = RealField::from_fn(g, f64::cos).unwrap().to_spectral();
        let n = nonlinear_term(&u, 2.0 / 3.0);
        let expect = RealField::from_fn(g, |x| -0.5 * (2.0 * x).sin()).unwrap().to_spectral();
        assert!(n.sub(&expect).unwrap().l2_norm() < 1e-13);
    }
}
