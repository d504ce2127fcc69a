//! Uniform grid on the torus `R / 2πλZ`.
//!
//! A grid with `M` samples carries the frequency lattice
//! `ξ ∈ λ⁻¹·{−M/2+1, …, M/2}`. Coefficient arrays are kept in FFT order:
//! index `k < M/2` holds the integer wavenumber `k`, index `k > M/2` holds
//! `k − M`, and index `M/2` is the Nyquist slot, which every field keeps at zero.
//!
//! # Measure convention
//!
//! All norms in this crate share a single convention. With
//! `φ̂(ξ) = ∫ e^{−iξx} φ(x) dx` over one period,
//!
//! * space frequencies carry the measure `(2πλ)⁻¹ · counting`, so
//!   `‖φ‖²_{H^s} = (2πλ)⁻¹ Σ_ξ ⟨ξ⟩^{2s} |φ̂(ξ)|²` and Plancherel is exact
//!   (`H⁰ = L²`);
//! * time frequencies carry `dτ / 2π`, so the space-time `X^{0,0}` norm is
//!   the `L²_{t,x}` norm and `‖u‖_{L∞_t H^s} ≤ ‖u‖_{Z^{0,s}}` with constant one.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Spatial discretization: period `2πλ`, `M` samples.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Grid {
    lambda: f64,
    n_modes: usize,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n_modes == other.n_modes && self.lambda.to_bits() == other.lambda.to_bits()
    }
}

impl Eq for Grid {}

impl Grid {
    /// `lambda ≥ 1`, `n_modes` a power of two (at least 4).
    pub fn new(lambda: f64, n_modes: usize) -> Result<Self> {
        if !lambda.is_finite() || lambda < 1.0 {
            return Err(Error::InvalidGrid(format!("lambda must be >= 1, got {lambda}")));
        }
        if n_modes < 4 || !n_modes.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "mode count must be a power of two >= 4, got {n_modes}"
            )));
        }
        Ok(Grid { lambda, n_modes })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn period(&self) -> f64 {
        2.0 * PI * self.lambda
    }

    /// Quadrature weight `dx = 2πλ / M`.
    pub fn dx(&self) -> f64 {
        self.period() / self.n_modes as f64
    }

    /// Weight of one frequency under the space measure, `1 / (2πλ)`.
    pub fn xi_weight(&self) -> f64 {
        1.0 / self.period()
    }

    pub fn nyquist_index(&self) -> usize {
        self.n_modes / 2
    }

    /// Integer wavenumber stored at FFT index `k`.
    pub fn wavenumber(&self, k: usize) -> i64 {
        let m = self.n_modes as i64;
        let k = k as i64;
        if k <= m / 2 {
            k
        } else {
            k - m
        }
    }

    /// FFT index of an integer wavenumber, if it fits strictly inside the Nyquist band.
    pub fn index_of(&self, n: i64) -> Option<usize> {
        let half = (self.n_modes / 2) as i64;
        if n.abs() >= half {
            return None;
        }
        Some(if n >= 0 { n as usize } else { (n + self.n_modes as i64) as usize })
    }

    /// Frequency `ξ = n / λ` at FFT index `k`.
    pub fn xi(&self, k: usize) -> f64 {
        self.wavenumber(k) as f64 / self.lambda
    }

    /// Frequencies in FFT order (Nyquist slot included).
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_modes).map(|k| self.xi(k)).collect()
    }

    /// Sample positions `x_j = 2πλ j / M`.
    pub fn points(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n_modes).map(|j| j as f64 * dx).collect()
    }

    /// Same period, different resolution.
    pub fn with_modes(&self, n_modes: usize) -> Result<Grid> {
        Grid::new(self.lambda, n_modes)
    }

    /// Largest resolved `|ξ|` (one below Nyquist).
    pub fn max_xi(&self) -> f64 {
        (self.n_modes / 2 - 1) as f64 / self.lambda
    }

    pub(crate) fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!(
                "(lambda={}, M={}) vs (lambda={}, M={})",
                self.lambda, self.n_modes, other.lambda, other.n_modes
            )));
        }
        Ok(())
    }
}

/// Japanese bracket `⟨x⟩ = (1 + x²)^{1/2}`.
#[inline]
pub fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}
