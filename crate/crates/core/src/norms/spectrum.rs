use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::fft;
use crate::grid::Grid;
use crate::spectral::SpectralField;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Time window multiplied into a trajectory before the time transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaperSpec {
    /// Constant 1 on the whole sample range.
    Boxcar,
    /// 1 on the middle half, rising from 0 over each outer quarter along the
    /// quintic smoothstep `6r⁵ − 15r⁴ + 10r³` (C²).
    #[default]
    Bump,
}

impl TaperSpec {
    /// Window values at `n` equispaced samples covering the interval.
    pub fn values(self, n: usize) -> Vec<f64> {
        match self {
            TaperSpec::Boxcar => vec![1.0; n],
            TaperSpec::Bump => {
                let smooth = |r: f64| r * r * r * (10.0 - 15.0 * r + 6.0 * r * r);
                (0..n)
                    .map(|i| {
                        let r = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 };
                        let edge = r.min(1.0 - r);
                        if edge >= 0.25 {
                            1.0
                        } else {
                            smooth(4.0 * edge)
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Space-time Fourier data `û(τ, ξ)` of a tapered, zero-padded trajectory.
///
/// Rows are time frequencies in FFT order (`n_pad` of them, spacing
/// `2π/(n_pad·dt)`), columns are the spatial frequencies of the grid. The
/// time origin is the first sample. Sums over the lattice carry the weights
/// `Δτ/2π` and `1/(2πλ)`, so the unweighted norm is exactly `‖u‖_{L²_{t,x}}`
/// of the tapered field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeSpectrum {
    grid: Grid,
    t0: f64,
    dt: f64,
    n_t: usize,
    n_pad: usize,
    taper: TaperSpec,
    data: Vec<Complex64>,
}

/// Minimum number of time samples accepted by [`st_transform`].
pub const MIN_TIME_SAMPLES: usize = 8;

/// Tapers `traj` in time, zero-pads to the next power of two at least twice
/// its length and transforms.
pub fn st_transform(traj: &Trajectory, taper: TaperSpec) -> Result<SpaceTimeSpectrum> {
    let n_t = traj.len();
    if n_t < MIN_TIME_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_TIME_SAMPLES,
            got: n_t,
        });
    }
    let grid = *traj.grid();
    let m = grid.n_modes();
    let n_pad = (2 * n_t).next_power_of_two();
    let window = taper.values(n_t);
    let dt = traj.dt();
    let columns: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|k| {
            let mut col = vec![ZERO; n_pad];
            for (i, s) in traj.states().iter().enumerate() {
                col[i] = s.coeffs()[k] * window[i];
            }
            fft::forward(&mut col);
            col.iter_mut().for_each(|c| *c *= dt);
            col
        })
        .collect();
    let mut data = vec![ZERO; n_pad * m];
    for (k, col) in columns.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            data[i * m + k] = *c;
        }
    }
    Ok(SpaceTimeSpectrum {
        grid,
        t0: traj.t0(),
        dt,
        n_t,
        n_pad,
        taper,
        data,
    })
}

impl SpaceTimeSpectrum {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of time samples before padding.
    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Number of time frequencies.
    pub fn n_tau(&self) -> usize {
        self.n_pad
    }

    pub fn taper(&self) -> TaperSpec {
        self.taper
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// `û` at row `i` (time frequency) and column `k` (space frequency).
    pub fn at(&self, i: usize, k: usize) -> Complex64 {
        self.data[i * self.grid.n_modes() + k]
    }

    pub fn tau_spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.n_pad as f64 * self.dt)
    }

    /// Time frequency of row `i`; the Nyquist row reports `+τ_N`.
    pub fn tau(&self, i: usize) -> f64 {
        let h = self.n_pad / 2;
        let n = if i <= h { i as f64 } else { i as f64 - self.n_pad as f64 };
        n * self.tau_spacing()
    }

    /// Row of the time frequency `n·Δτ`, if on the lattice.
    pub fn row_of(&self, n: i64) -> Option<usize> {
        let h = (self.n_pad / 2) as i64;
        if n.abs() >= h {
            return None;
        }
        Some(n.rem_euclid(self.n_pad as i64) as usize)
    }

    /// Product of the two lattice weights `Δτ/2π · 1/(2πλ)`.
    pub fn cell_weight(&self) -> f64 {
        self.grid.xi_weight() / (self.n_pad as f64 * self.dt)
    }

    /// Evaluates `f(τ, ξ)` on a lattice cell. On the Nyquist row `τ = ±τ_N`
    /// are the same lattice point, so the mean of the two values is used;
    /// this keeps every weighted norm invariant under conjugation.
    pub(crate) fn symmetric_weight(&self, i: usize, k: usize, f: &impl Fn(f64, f64) -> f64) -> f64 {
        let xi = self.grid.xi(k);
        let tau = self.tau(i);
        if i == self.n_pad / 2 {
            0.5 * (f(tau, xi) + f(-tau, xi))
        } else {
            f(tau, xi)
        }
    }

    /// Keeps the columns whose `ξ` satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(f64) -> bool) -> SpaceTimeSpectrum {
        let m = self.grid.n_modes();
        let mask: Vec<bool> = (0..m).map(|k| keep(self.grid.xi(k))).collect();
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(idx, c)| if mask[idx % m] { *c } else { ZERO })
            .collect();
        SpaceTimeSpectrum {
            data,
            ..self.clone()
        }
    }

    /// Spectrum of the complex conjugate field, `conj û(−τ, −ξ)`.
    pub fn conj(&self) -> SpaceTimeSpectrum {
        let m = self.grid.n_modes();
        let p = self.n_pad;
        let mut data = vec![ZERO; p * m];
        for i in 0..p {
            for k in 0..m {
                data[i * m + k] = self.data[((p - i) % p) * m + (m - k) % m].conj();
            }
        }
        SpaceTimeSpectrum {
            data,
            ..self.clone()
        }
    }

    /// Tapered spatial spectra at the original sample times.
    pub fn windowed_states(&self) -> Vec<SpectralField> {
        let m = self.grid.n_modes();
        let p = self.n_pad;
        let inv_t = 1.0 / (p as f64 * self.dt);
        let columns: Vec<Vec<Complex64>> = (0..m)
            .into_par_iter()
            .map(|k| {
                let mut col: Vec<Complex64> = (0..p).map(|i| self.data[i * m + k]).collect();
                fft::inverse(&mut col);
                col.iter_mut().for_each(|c| *c *= inv_t);
                col
            })
            .collect();
        (0..self.n_t)
            .map(|i| {
                let coeffs = (0..m).map(|k| columns[k][i]).collect();
                SpectralField::from_raw(self.grid, coeffs)
            })
            .collect()
    }

    /// `‖·‖_{L⁴_{t,x}}` of the tapered field: exact in `x` (products on a
    /// doubled grid), rectangle rule in `t`.
    pub fn l4_norm(&self) -> f64 {
        let dx = self.grid.dx() / 2.0;
        let sum: f64 = self
            .windowed_states()
            .par_iter()
            .map(|s| {
                s.to_fine_physical(2)
                    .iter()
                    .map(|v| v.norm_sqr() * v.norm_sqr())
                    .sum::<f64>()
            })
            .sum();
        (self.dt * dx * sum).powf(0.25)
    }
}
