//! The gauge transform `W = P₊(e^{−iF/2})`, `F = ∂ₓ⁻¹u`, `w = ∂ₓW`, and
//! residuals of the identities and evolution equations it satisfies.
//!
//! The exponential is evaluated pointwise on a grid refined by the
//! oversampling factor and brought back to the working grid; products of the
//! resulting fields are formed exactly by zero padding. Every identity below
//! is therefore exact up to the (spectrally small) tail of `e^{−iF/2}` beyond
//! the Nyquist band.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evolution::{linear_time_derivative, Trajectory};
use crate::grid::Grid;
use crate::spectral::{Projection, RealField, SpectralField};

/// Default refinement of the grid on which `e^{∓iF/2}` is evaluated.
pub const DEFAULT_OVERSAMPLE: usize = 2;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The matched tuple `(u, F, W, w)` at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeBundle {
    u: SpectralField,
    f: SpectralField,
    /// `e^{−iF/2}` on the working grid.
    phase: SpectralField,
    big_w: SpectralField,
    w: SpectralField,
}

impl GaugeBundle {
    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn u(&self) -> RealField {
        self.u.to_physical_real_part()
    }

    pub fn u_spectral(&self) -> &SpectralField {
        &self.u
    }

    /// `F = ∂ₓ⁻¹u`.
    pub fn f(&self) -> RealField {
        self.f.to_physical_real_part()
    }

    pub fn f_spectral(&self) -> &SpectralField {
        &self.f
    }

    /// `e^{−iF/2}`.
    pub fn phase(&self) -> &SpectralField {
        &self.phase
    }

    /// `W = P₊(e^{−iF/2})`.
    pub fn big_w(&self) -> &SpectralField {
        &self.big_w
    }

    /// `w = ∂ₓW`.
    pub fn w(&self) -> &SpectralField {
        &self.w
    }

    /// `P₀(F²ₓ)` as a number, i.e. the mean of `u²`.
    pub fn mean_square(&self) -> f64 {
        self.u.l2_norm().powi(2) / self.grid().period()
    }

    /// `‖∂ₓW + (i/2)P₊(e^{−iF/2}u)‖_{L²}`: the two definitions of `w`.
    pub fn chain_rule_defect(&self) -> Result<f64> {
        let alt = self.phase.product(&self.u, 2)?.plus().scale(-0.5 * I);
        Ok(self.w.sub(&alt)?.l2_norm())
    }
}

/// Builds the gauge bundle of a mean-zero real field.
pub fn make_gauge(u: &RealField) -> Result<GaugeBundle> {
    make_gauge_with(&u.to_spectral(), DEFAULT_OVERSAMPLE)
}

/// [`make_gauge`] from spectral data with an explicit oversampling factor.
pub fn make_gauge_with(u: &SpectralField, oversample: usize) -> Result<GaugeBundle> {
    let grid = *u.grid();
    let f = u.antiderivative()?;
    let factor = oversample.max(1);
    let fine: Vec<Complex64> = f
        .to_fine_physical(factor)
        .into_iter()
        .map(|v| Complex64::from_polar(1.0, -0.5 * v.re))
        .collect();
    let phase = SpectralField::from_fine_physical(grid, factor, &fine)?;
    let big_w = phase.plus();
    let w = big_w.derivative();
    Ok(GaugeBundle {
        u: u.clone(),
        f,
        phase,
        big_w,
        w,
    })
}

/// `2i e^{iF/2}w + 2i e^{iF/2}∂ₓP₋(e^{−iF/2})` in spectral form.
fn inversion_spectral(b: &GaugeBundle) -> Result<SpectralField> {
    let conj_phase = b.phase.conj();
    let low = b.phase.minus().derivative();
    let sum = b.w.add(&low)?;
    Ok(conj_phase.product(&sum, 2)?.scale(2.0 * I))
}

/// Reconstructs `u` from `(F, w)`. The imaginary part, which vanishes up to
/// roundoff, is discarded.
pub fn invert_gauge(b: &GaugeBundle) -> Result<RealField> {
    Ok(inversion_spectral(b)?.to_physical_real_part())
}

/// `‖invert_gauge(make_gauge(u)) − u‖_{L²}`.
pub fn check_inversion(u: &RealField) -> Result<f64> {
    let b = make_gauge(u)?;
    Ok(inversion_spectral(&b)?.sub(&b.u)?.l2_norm())
}

/// `L²` defect of `P₋u = −2iP₋(e^{−iF/2}w̄) − 2iP₋(e^{−iF/2}∂ₓP₊(e^{iF/2}))`.
pub fn check_negative_mode_identity(u: &RealField) -> Result<f64> {
    let b = make_gauge(u)?;
    Ok(b.u.minus().sub(&negative_modes_from_gauge(&b)?)?.l2_norm())
}

fn negative_modes_from_gauge(b: &GaugeBundle) -> Result<SpectralField> {
    let high = b.phase.conj().plus().derivative();
    let sum = b.w.conj().add(&high)?;
    Ok(b.phase.product(&sum, 2)?.minus().scale(-2.0 * I))
}

/// `L²` defect of
/// `P_{>1}u = 2iP_{>1}(e^{iF/2}w) + 2iP_{>1}(P_{>1}(e^{iF/2})∂ₓP₋(e^{−iF/2}))`.
pub fn check_highmode_inversion(u: &RealField) -> Result<f64> {
    let b = make_gauge(u)?;
    let above = Projection::StrictlyAbove(1.0);
    let conj_phase = b.phase.conj();
    let first = conj_phase.product(&b.w, 2)?;
    let second = conj_phase
        .project(above)?
        .product(&b.phase.minus().derivative(), 2)?;
    let rhs = first.add(&second)?.project(above)?.scale(2.0 * I);
    Ok(b.u.project(above)?.sub(&rhs)?.l2_norm())
}

fn bundles(traj: &Trajectory) -> Result<Vec<GaugeBundle>> {
    traj.states()
        .par_iter()
        .map(|s| make_gauge_with(s, DEFAULT_OVERSAMPLE))
        .collect()
}

fn residual_norms(
    lhs: &[SpectralField],
    rhs: impl Fn(usize) -> Result<SpectralField> + Sync,
) -> Result<Vec<f64>> {
    (0..lhs.len())
        .into_par_iter()
        .map(|i| Ok(lhs[i].sub(&rhs(i)?)?.l2_norm()))
        .collect()
}

/// Residual of `Fₜ + HFₓₓ = F²ₓ/2 − ½P₀(F²ₓ)` at every sample.
pub fn residual_f_eq(traj: &Trajectory) -> Result<Vec<f64>> {
    let fs = traj
        .states()
        .iter()
        .map(|s| s.antiderivative())
        .collect::<Result<Vec<_>>>()?;
    let lhs = linear_time_derivative(&fs, traj.dt())?;
    residual_norms(&lhs, |i| {
        let u = traj.state(i);
        let sq = u.product(u, 2)?;
        Ok(sq.sub(&sq.zero_mode())?.scale_real(0.5))
    })
}

/// Residual of `wₜ − iwₓₓ = −∂ₓP₊(W P₋(uₓ)) + (i/4)P₀(F²ₓ)w` at every sample.
pub fn residual_w_eq(traj: &Trajectory) -> Result<Vec<f64>> {
    let b = bundles(traj)?;
    let ws: Vec<_> = b.iter().map(|x| x.w.clone()).collect();
    let lhs = linear_time_derivative(&ws, traj.dt())?;
    residual_norms(&lhs, |i| {
        let bi = &b[i];
        let first = bi
            .big_w
            .product(&bi.u.derivative().minus(), 2)?
            .plus()
            .derivative()
            .scale_real(-1.0);
        first.add(&bi.w.scale(0.25 * I * bi.mean_square()))
    })
}

/// Residual of the substituted form
/// `wₜ − iwₓₓ = 2i∂ₓP₊(W∂ₓP₋(e^{−iF/2}w̄)) + 2i∂ₓP₊[W∂ₓP₋(e^{−iF/2}∂ₓP₊(e^{iF/2}))]
/// + (i/4)P₀(F²ₓ)Wₓ` at every sample.
pub fn residual_w_eq2(traj: &Trajectory) -> Result<Vec<f64>> {
    let b = bundles(traj)?;
    let ws: Vec<_> = b.iter().map(|x| x.w.clone()).collect();
    let lhs = linear_time_derivative(&ws, traj.dt())?;
    residual_norms(&lhs, |i| {
        let bi = &b[i];
        let outer = |inner: SpectralField| -> Result<SpectralField> {
            Ok(bi
                .big_w
                .product(&inner.minus().derivative(), 2)?
                .plus()
                .derivative()
                .scale(2.0 * I))
        };
        let first = outer(bi.phase.product(&bi.w.conj(), 2)?)?;
        let high = bi.phase.conj().plus().derivative();
        let second = outer(bi.phase.product(&high, 2)?)?;
        first
            .add(&second)?
            .add(&bi.w.scale(0.25 * I * bi.mean_square()))
    })
}

/// One row of the gauge residual export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeResidualRow {
    pub t: f64,
    pub residual_f: f64,
    pub residual_w: f64,
    pub residual_w2: f64,
}

/// All three equation residuals along a trajectory.
pub fn residual_series(traj: &Trajectory) -> Result<Vec<GaugeResidualRow>> {
    let rf = residual_f_eq(traj)?;
    let rw = residual_w_eq(traj)?;
    let rw2 = residual_w_eq2(traj)?;
    Ok((0..traj.len())
        .map(|i| GaugeResidualRow {
            t: traj.time(i),
            residual_f: rf[i],
            residual_w: rw[i],
            residual_w2: rw2[i],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn grid() -> Grid {
        Grid::new(1.0, 64).unwrap()
    }

    #[test]
    fn zero_field() {
        let b = make_gauge(&RealField::zeros(grid())).unwrap();
        assert_eq!(b.big_w().l2_norm(), 0.0);
        assert_eq!(b.w().l2_norm(), 0.0);
        assert_eq!(b.f().max_abs(), 0.0);
        assert_eq!(invert_gauge(&b).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn small_amplitude_taylor() {
        // w = −(iε/4)e^{ix} + O(ε²)
        let eps = 1e-6;
        let g = grid();
        let b = make_gauge(&RealField::from_fn(g, |x| eps * x.cos()).unwrap()).unwrap();
        let expect = SpectralField::plane_wave(g, 1, Complex64::new(0.0, -0.25 * eps)).unwrap();
        let err = b.w().sub(&expect).unwrap().l2_norm();
        assert!(err < 10.0 * eps * eps, "err = {err:e}");
    }

    #[test]
    fn identities_on_a_trig_field() {
        let u = RealField::from_fn(grid(), |x| x.cos() + 0.3 * (2.0 * x).sin()).unwrap();
        assert!(make_gauge(&u).unwrap().chain_rule_defect().unwrap() < 1e-10);
        assert!(check_inversion(&u).unwrap() < 1e-10);
        assert!(check_negative_mode_identity(&u).unwrap() < 1e-10);
        let v = RealField::from_fn(grid(), |x| x.cos() + (3.0 * x).cos()).unwrap();
        assert!(check_highmode_inversion(&v).unwrap() < 1e-10);
    }

    #[test]
    fn rejects_nonzero_mean() {
        let u = RealField::from_fn(grid(), |x| 0.1 + x.cos()).unwrap();
        assert!(matches!(make_gauge(&u), Err(Error::MeanNotZero(_))));
        assert!(matches!(check_negative_mode_identity(&u), Err(Error::MeanNotZero(_))));
    }

    #[test]
    fn zero_trajectory_residuals_vanish() {
        let g = grid();
        let tr = Trajectory::new(g, 0.0, 0.01, vec![SpectralField::zeros(g); 6]).unwrap();
        for r in residual_series(&tr).unwrap() {
            assert_eq!((r.residual_f, r.residual_w, r.residual_w2), (0.0, 0.0, 0.0));
        }
    }
}
