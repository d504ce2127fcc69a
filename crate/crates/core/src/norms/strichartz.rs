use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bourgain_norm, st_transform, NormFamily, TaperSpec};
use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::grid::Grid;
use crate::spectral::SpectralField;

/// Random space-time fields `Σ_ξ a(t, ξ) e^{i(ξx − ξ|ξ|t)}` with
/// `a(t, ξ) = Σ_{|m| ≤ modulation} g_{ξ,m} e^{2πimt/T}` and i.i.d. complex
/// Gaussian `g`, sampled on `n_t` points of `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomFieldSpec {
    pub lambda: f64,
    pub n_modes: usize,
    pub n_t: usize,
    pub t_window: f64,
    /// Largest `|n|` carrying a coefficient. `None` picks the largest band
    /// whose time frequencies stay below half the time Nyquist frequency,
    /// capped at `M/4`.
    pub band: Option<usize>,
    pub modulation: usize,
    pub taper: TaperSpec,
}

impl RandomFieldSpec {
    pub fn new(n_modes: usize, n_t: usize) -> Self {
        RandomFieldSpec {
            lambda: 1.0,
            n_modes,
            n_t,
            t_window: 1.0,
            band: None,
            modulation: 2,
            taper: TaperSpec::Bump,
        }
    }

    pub fn dt(&self) -> f64 {
        self.t_window / (self.n_t - 1) as f64
    }

    /// The band actually used.
    pub fn effective_band(&self) -> usize {
        if let Some(b) = self.band {
            return b;
        }
        let tau_nyquist = PI / self.dt();
        let shift = 2.0 * PI * self.modulation as f64 / self.t_window;
        let cap = self.n_modes / 4;
        let mut k = 1;
        while k < cap {
            let xi = (k + 1) as f64 / self.lambda;
            if xi * xi + shift > 0.5 * tau_nyquist {
                break;
            }
            k += 1;
        }
        k
    }

    fn validate(&self) -> Result<Grid> {
        let grid = Grid::new(self.lambda, self.n_modes)?;
        if self.n_t < super::MIN_TIME_SAMPLES {
            return Err(Error::TooFewSamples {
                needed: super::MIN_TIME_SAMPLES,
                got: self.n_t,
            });
        }
        if !(self.t_window > 0.0 && self.t_window.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "time window must be > 0, got {}",
                self.t_window
            )));
        }
        let band = self.effective_band();
        if band == 0 || band as i64 >= (self.n_modes / 2) as i64 {
            return Err(Error::InvalidParameter(format!(
                "band {band} not in 1..{}",
                self.n_modes / 2
            )));
        }
        Ok(grid)
    }
}

/// Draws one field from `rng`.
pub fn random_field(spec: &RandomFieldSpec, rng: &mut impl Rng) -> Result<Trajectory> {
    let grid = spec.validate()?;
    let band = spec.effective_band() as i64;
    let modes: Vec<i64> = (-band..=band).collect();
    let n_mod = spec.modulation as i64;
    let mut g = Vec::with_capacity(modes.len() * (2 * n_mod as usize + 1));
    for _ in 0..modes.len() * (2 * n_mod as usize + 1) {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        g.push(Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2);
    }
    let dt = spec.dt();
    let period = grid.period();
    let omega = 2.0 * PI / spec.t_window;
    let states = (0..spec.n_t)
        .map(|i| {
            let t = i as f64 * dt;
            let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.n_modes()];
            for (q, &n) in modes.iter().enumerate() {
                let xi = n as f64 / spec.lambda;
                let mut a = Complex64::new(0.0, 0.0);
                for (r, m) in (-n_mod..=n_mod).enumerate() {
                    a += g[q * (2 * n_mod as usize + 1) + r]
                        * Complex64::from_polar(1.0, omega * m as f64 * t);
                }
                let k = grid.index_of(n).expect("band below Nyquist");
                coeffs[k] = a * Complex64::from_polar(period, -xi * xi.abs() * t);
            }
            SpectralField::new(grid, coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(grid, 0.0, dt, states)
}

/// Distribution of `‖v‖_{L⁴}/‖v‖_{X^{3/8,0}}` over random windowed fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrichartzSummary {
    pub seed: u64,
    pub samples: usize,
    pub band: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub mean_ratio: f64,
    /// `(q, value)` for q in 0.5, 0.9, 0.99.
    pub quantiles: Vec<(f64, f64)>,
    #[serde(skip)]
    pub ratios: Vec<f64>,
}

/// Samples `sample_count` fields; sample `i` draws from a ChaCha8 stream keyed
/// by `(seed, i)`, so the result does not depend on the thread schedule.
pub fn strichartz_ratio(spec: &RandomFieldSpec, sample_count: usize, seed: u64) -> Result<StrichartzSummary> {
    if sample_count == 0 {
        return Err(Error::InvalidParameter("sample_count must be >= 1".into()));
    }
    spec.validate()?;
    let ratios = (0..sample_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let field = random_field(spec, &mut rng)?;
            let st = st_transform(&field, spec.taper)?;
            let l4 = bourgain_norm(&st, NormFamily::L4, None, None)?;
            let x = bourgain_norm(&st, NormFamily::X, Some(3.0 / 8.0), Some(0.0))?;
            Ok(l4 / x)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let quantile = |q: f64| {
        let idx = ((q * (sorted.len() - 1) as f64).round() as usize).min(sorted.len() - 1);
        sorted[idx]
    };
    Ok(StrichartzSummary {
        seed,
        samples: sample_count,
        band: spec.effective_band(),
        max_ratio: *sorted.last().unwrap(),
        min_ratio: sorted[0],
        mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
        quantiles: [0.5, 0.9, 0.99].iter().map(|&q| (q, quantile(q))).collect(),
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_band_respects_time_resolution() {
        let s = RandomFieldSpec::new(64, 64);
        let b = s.effective_band();
        assert!(b >= 1 && b <= 16);
        let xi = b as f64;
        assert!(xi * xi < 0.5 * PI / s.dt());
    }

    #[test]
    fn deterministic_given_seed() {
        let s = RandomFieldSpec::new(16, 16);
        let a = strichartz_ratio(&s, 6, 3).unwrap();
        let b = strichartz_ratio(&s, 6, 3).unwrap();
        assert_eq!(a.ratios, b.ratios);
        let c = strichartz_ratio(&s, 6, 4).unwrap();
        assert_ne!(a.ratios, c.ratios);
        assert!(a.ratios.iter().all(|r| r.is_finite() && *r > 0.0));
    }

    #[test]
    fn rejects_empty_request() {
        assert!(strichartz_ratio(&RandomFieldSpec::new(16, 16), 0, 1).is_err());
    }
}
