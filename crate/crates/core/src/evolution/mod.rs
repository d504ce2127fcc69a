//! Time integration of the Benjamin–Ono equation and the tools that inspect
//! its solutions.

mod duhamel;
mod monitors;
pub mod quadrature;
mod residual;
mod solver;
mod symmetry;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::spectral::{RealField, SpectralField};

pub use duhamel::{duhamel, duhamel_trajectory};
pub use monitors::{
    energy, energy_quadratic, mean, momentum, monitor_series, CubicSign, MonitorRow,
    CONSERVED_CUBIC_SIGN,
};
pub use residual::{linear_time_derivative, residual_bo, time_derivative};
pub use solver::{evolve, evolve_spectral, nonlinear_term};
pub use symmetry::{dilate, dilate_field, dilate_onto, reconstruct, reduce_mean};

/// Numerical parameters shared by the solver, the Duhamel quadrature and the
/// Picard recursion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Time step (output lattice spacing).
    pub dt: f64,
    /// Fraction of the Nyquist band kept after each quadratic product.
    pub dealias_fraction: f64,
    /// Gauss–Legendre points per panel.
    pub quadrature_order: usize,
    /// Largest admissible `max |u|` before a run is declared blown up.
    pub blowup_threshold: f64,
    /// Upper bound on the phase `ω·h` swept by one Picard collocation panel.
    pub max_phase_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 1e-3,
            dealias_fraction: 2.0 / 3.0,
            quadrature_order: 4,
            blowup_threshold: 1e6,
            max_phase_step: 0.25,
        }
    }
}

impl SolverConfig {
    pub fn with_dt(dt: f64) -> Self {
        SolverConfig {
            dt,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "dealias_fraction must lie in (0, 1], got {}",
                self.dealias_fraction
            )));
        }
        if self.quadrature_order == 0 || self.quadrature_order > quadrature::MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "quadrature_order must lie in 1..={}, got {}",
                quadrature::MAX_ORDER,
                self.quadrature_order
            )));
        }
        if !(self.blowup_threshold > 0.0) {
            return Err(Error::InvalidParameter("blowup_threshold must be > 0".into()));
        }
        if !(self.max_phase_step > 0.0 && self.max_phase_step.is_finite()) {
            return Err(Error::InvalidParameter("max_phase_step must be > 0".into()));
        }
        Ok(())
    }
}

/// Uniformly sampled solution `t ↦ u(t)` on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    grid: Grid,
    t0: f64,
    dt: f64,
    states: Vec<SpectralField>,
    meta: Option<SolverConfig>,
}

impl Trajectory {
    pub fn new(grid: Grid, t0: f64, dt: f64, states: Vec<SpectralField>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("bad time lattice t0={t0}, dt={dt}")));
        }
        if states.is_empty() {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }
        for s in &states {
            grid.ensure_same(s.grid())?;
        }
        Ok(Trajectory {
            grid,
            t0,
            dt,
            states,
            meta: None,
        })
    }

    pub fn with_meta(mut self, cfg: SolverConfig) -> Self {
        self.meta = Some(cfg);
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn meta(&self) -> Option<&SolverConfig> {
        self.meta.as_ref()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.states.len() - 1)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.states.len()).map(|i| self.time(i)).collect()
    }

    pub fn states(&self) -> &[SpectralField] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &SpectralField {
        &self.states[i]
    }

    pub fn last(&self) -> &SpectralField {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn into_states(self) -> Vec<SpectralField> {
        self.states
    }

    /// Physical samples of every state (real part).
    pub fn physical(&self) -> Vec<RealField> {
        self.states.iter().map(|s| s.to_physical_real_part()).collect()
    }

    /// Lattice index of time `t`, which must coincide with a sample.
    pub fn index_of_time(&self, t: f64) -> Result<usize> {
        let (start, end) = (self.t0, self.t_end());
        let slack = 1e-9 * self.dt;
        if !(t >= start - slack && t <= end + slack) {
            return Err(Error::TimeOutOfRange { t, start, end });
        }
        let x = (t - self.t0) / self.dt;
        let i = x.round();
        if (x - i).abs() > 1e-6 {
            return Err(Error::TimeMisaligned(t));
        }
        Ok(i as usize)
    }

    /// Same lattice, states transformed one by one.
    pub fn map_states(&self, f: impl Fn(usize, &SpectralField) -> SpectralField) -> Result<Trajectory> {
        let states: Vec<SpectralField> =
            self.states.iter().enumerate().map(|(i, s)| f(i, s)).collect();
        let grid = *states[0].grid();
        let mut out = Trajectory::new(grid, self.t0, self.dt, states)?;
        out.meta = self.meta;
        Ok(out)
    }

    /// Largest `L²` distance between matching states.
    pub fn max_l2_distance(&self, other: &Trajectory) -> Result<f64> {
        self.max_distance(other, |d| d.l2_norm())
    }

    pub fn max_distance(&self, other: &Trajectory, norm: impl Fn(&SpectralField) -> f64) -> Result<f64> {
        if self.states.len() != other.states.len() {
            return Err(Error::LengthMismatch {
                expected: self.states.len(),
                got: other.states.len(),
            });
        }
        let mut worst = 0.0f64;
        for (a, b) in self.states.iter().zip(&other.states) {
            worst = worst.max(norm(&a.sub(b)?));
        }
        Ok(worst)
    }
}
