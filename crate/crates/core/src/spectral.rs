//! Fourier calculus on the torus: transforms, projections, Fourier
//! multipliers, Sobolev/Lebesgue norms and the free group `V(t)`.
//!
//! Coefficients follow `φ̂(ξ) = ∫ e^{−iξx} φ(x) dx`, realized by the
//! rectangle rule on the grid (exact for band-limited data). See
//! [`crate::grid`] for the measure convention shared by every norm.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{self, PaddedTransform};
use crate::grid::{bracket, Grid};

/// Absolute tolerance on the zero-mode coefficient for "mean zero" checks.
pub const TOL_MEAN: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Physical samples `u(x_j)` of a real field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealField {
    grid: Grid,
    samples: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n_modes() {
            return Err(Error::LengthMismatch {
                expected: grid.n_modes(),
                got: samples.len(),
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("real field samples"));
        }
        Ok(RealField { grid, samples })
    }

    pub fn zeros(grid: Grid) -> Self {
        RealField {
            grid,
            samples: vec![0.0; grid.n_modes()],
        }
    }

    /// Samples `f(x_j)` on the grid.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        RealField::new(grid, grid.points().into_iter().map(f).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Mean value `(2πλ)⁻¹ ∫ u`.
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// `true` when the zero-mode coefficient is within [`TOL_MEAN`].
    pub fn is_mean_zero(&self) -> bool {
        (self.mean() * self.grid.period()).abs() <= TOL_MEAN
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn to_spectral(&self) -> SpectralField {
        let mut buf: Vec<Complex64> = self
            .samples
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        SpectralField::from_physical_complex_owned(self.grid, &mut buf)
    }

    pub fn lebesgue_norm(&self, q: Lebesgue) -> f64 {
        lebesgue_norm(self.grid.dx(), self.samples.iter().map(|v| v.abs()), q)
    }

    pub fn add_constant(&self, c: f64) -> RealField {
        RealField {
            grid: self.grid,
            samples: self.samples.iter().map(|v| v + c).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> RealField {
        RealField {
            grid: self.grid,
            samples: self.samples.iter().map(|v| v * c).collect(),
        }
    }
}

/// Lebesgue exponents supported by [`RealField::lebesgue_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lebesgue {
    L1,
    L2,
    L4,
    LInf,
}

pub(crate) fn lebesgue_norm(dx: f64, abs_values: impl Iterator<Item = f64>, q: Lebesgue) -> f64 {
    match q {
        Lebesgue::L1 => dx * abs_values.sum::<f64>(),
        Lebesgue::L2 => (dx * abs_values.map(|v| v * v).sum::<f64>()).sqrt(),
        Lebesgue::L4 => (dx * abs_values.map(|v| (v * v) * (v * v)).sum::<f64>()).powf(0.25),
        Lebesgue::LInf => abs_values.fold(0.0, f64::max),
    }
}

/// Frequency projections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Projection {
    /// `P_+`: `ξ > 0`.
    Plus,
    /// `P_-`: `ξ < 0`.
    Minus,
    /// `P_0`: `ξ = 0`.
    Zero,
    /// `P_a`: `|ξ| ≤ a`.
    AtMost(f64),
    /// `Q_a`: `|ξ| > a`.
    Above(f64),
    /// `P_{>a}`: `ξ > a`.
    StrictlyAbove(f64),
    /// `P_{<a}`: `ξ < a`.
    StrictlyBelow(f64),
}

impl Projection {
    /// Whether frequency `xi` is kept. Ties on thresholds resolve by the strictness
    /// of each kind, with a relative slack for rounding in `n / λ`.
    pub fn keeps(&self, xi: f64) -> bool {
        let tie = |a: f64| 1e-12 * a.abs().max(1.0);
        match *self {
            Projection::Plus => xi > 0.0,
            Projection::Minus => xi < 0.0,
            Projection::Zero => xi == 0.0,
            Projection::AtMost(a) => xi.abs() <= a + tie(a),
            Projection::Above(a) => xi.abs() > a + tie(a),
            Projection::StrictlyAbove(a) => xi > a + tie(a),
            Projection::StrictlyBelow(a) => xi < a - tie(a),
        }
    }

    fn threshold(&self) -> Option<f64> {
        match *self {
            Projection::AtMost(a)
            | Projection::Above(a)
            | Projection::StrictlyAbove(a)
            | Projection::StrictlyBelow(a) => Some(a),
            _ => None,
        }
    }
}

/// Spatial operators accepted by [`SpectralField::fractional`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FractionalOp {
    /// `D^α`, symbol `|ξ|^α`.
    Dx,
    /// `J^α`, symbol `⟨ξ⟩^α`.
    Jx,
}

/// Fourier coefficients `φ̂(ξ)` in FFT order, Nyquist slot held at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    /// Builds a field from FFT-ordered coefficients. The Nyquist slot is zeroed.
    pub fn new(grid: Grid, mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n_modes() {
            return Err(Error::LengthMismatch {
                expected: grid.n_modes(),
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("spectral coefficients"));
        }
        coeffs[grid.nyquist_index()] = ZERO;
        Ok(SpectralField { grid, coeffs })
    }

    pub(crate) fn from_raw(grid: Grid, mut coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.n_modes());
        coeffs[grid.nyquist_index()] = ZERO;
        SpectralField { grid, coeffs }
    }

    pub fn zeros(grid: Grid) -> Self {
        SpectralField {
            grid,
            coeffs: vec![ZERO; grid.n_modes()],
        }
    }

    /// The plane wave `amplitude · e^{i n x / λ}`.
    pub fn plane_wave(grid: Grid, n: i64, amplitude: Complex64) -> Result<Self> {
        let k = grid.index_of(n).ok_or_else(|| {
            Error::Resolution(format!("wavenumber {n} not resolved on M={}", grid.n_modes()))
        })?;
        let mut f = SpectralField::zeros(grid);
        f.coeffs[k] = amplitude * grid.period();
        Ok(f)
    }

    /// Transform of complex physical samples.
    pub fn from_physical_complex(grid: Grid, values: &[Complex64]) -> Result<Self> {
        if values.len() != grid.n_modes() {
            return Err(Error::LengthMismatch {
                expected: grid.n_modes(),
                got: values.len(),
            });
        }
        let mut buf = values.to_vec();
        Ok(SpectralField::from_physical_complex_owned(grid, &mut buf))
    }

    fn from_physical_complex_owned(grid: Grid, buf: &mut [Complex64]) -> Self {
        fft::forward(buf);
        let dx = grid.dx();
        let coeffs = buf.iter().map(|c| c * dx).collect();
        SpectralField::from_raw(grid, coeffs)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at integer wavenumber `n` (zero when unresolved).
    pub fn coeff(&self, n: i64) -> Complex64 {
        self.grid.index_of(n).map_or(ZERO, |k| self.coeffs[k])
    }

    /// Mean value `P_0` as a number.
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0] / self.grid.period()
    }

    pub fn is_mean_zero(&self) -> bool {
        self.coeffs[0].norm() <= TOL_MEAN
    }

    pub(crate) fn ensure_mean_zero(&self) -> Result<()> {
        if self.is_mean_zero() {
            Ok(())
        } else {
            Err(Error::MeanNotZero(self.coeffs[0].norm()))
        }
    }

    /// `max_ξ |φ̂(−ξ) − conj φ̂(ξ)|`; zero for real fields.
    pub fn hermitian_defect(&self) -> f64 {
        let m = self.grid.n_modes();
        (0..m)
            .map(|k| (self.coeffs[(m - k) % m] - self.coeffs[k].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, rel_tol: f64) -> bool {
        self.hermitian_defect() <= rel_tol * self.max_coeff().max(f64::MIN_POSITIVE)
    }

    fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Physical samples of a real field. Fails if the coefficients are not
    /// Hermitian to 1e−9 relative.
    pub fn to_physical(&self) -> Result<RealField> {
        let defect = self.hermitian_defect();
        let scale = self.max_coeff();
        if defect > 1e-9 * scale {
            return Err(Error::NotReal(defect / scale.max(f64::MIN_POSITIVE)));
        }
        Ok(self.to_physical_real_part())
    }

    /// Real part of the physical samples, without a reality check.
    pub fn to_physical_real_part(&self) -> RealField {
        let samples = self.to_physical_complex().into_iter().map(|c| c.re).collect();
        RealField {
            grid: self.grid,
            samples,
        }
    }

    pub fn to_physical_complex(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        fft::inverse(&mut buf);
        let s = 1.0 / self.grid.period();
        buf.iter_mut().for_each(|c| *c *= s);
        buf
    }

    /// Samples on a grid refined by `factor` (spectral interpolation).
    pub fn to_fine_physical(&self, factor: usize) -> Vec<Complex64> {
        let mut t = PaddedTransform::new(self.grid.n_modes(), factor);
        let mut out = vec![ZERO; t.fine_len()];
        let raw: Vec<Complex64> = self.coeffs.iter().map(|c| c / self.grid.dx()).collect();
        t.to_fine(&raw, &mut out);
        out
    }

    /// Inverse of [`SpectralField::to_fine_physical`]; modes beyond the
    /// Nyquist band of `grid` are dropped.
    pub fn from_fine_physical(grid: Grid, factor: usize, values: &[Complex64]) -> Result<Self> {
        let mut t = PaddedTransform::new(grid.n_modes(), factor);
        if values.len() != t.fine_len() {
            return Err(Error::LengthMismatch {
                expected: t.fine_len(),
                got: values.len(),
            });
        }
        let mut buf = values.to_vec();
        let mut out = vec![ZERO; grid.n_modes()];
        t.from_fine(&mut buf, &mut out);
        let dx = grid.dx();
        out.iter_mut().for_each(|c| *c *= dx);
        Ok(SpectralField::from_raw(grid, out))
    }

    /// Applies a diagonal multiplier `m(ξ)`.
    pub fn multiply(&self, symbol: impl Fn(f64) -> Complex64) -> SpectralField {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * symbol(self.grid.xi(k)))
            .collect();
        SpectralField::from_raw(self.grid, coeffs)
    }

    fn multiply_real(&self, symbol: impl Fn(f64) -> f64) -> SpectralField {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * symbol(self.grid.xi(k)))
            .collect();
        SpectralField::from_raw(self.grid, coeffs)
    }

    pub fn project(&self, kind: Projection) -> Result<SpectralField> {
        if let Some(a) = kind.threshold() {
            if !(a >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "projection threshold must be >= 0, got {a}"
                )));
            }
        }
        Ok(self.multiply_real(|xi| if kind.keeps(xi) { 1.0 } else { 0.0 }))
    }

    /// Infallible projections onto the sign classes.
    pub fn plus(&self) -> SpectralField {
        self.multiply_real(|xi| if xi > 0.0 { 1.0 } else { 0.0 })
    }

    pub fn minus(&self) -> SpectralField {
        self.multiply_real(|xi| if xi < 0.0 { 1.0 } else { 0.0 })
    }

    pub fn zero_mode(&self) -> SpectralField {
        self.multiply_real(|xi| if xi == 0.0 { 1.0 } else { 0.0 })
    }

    /// Periodic Hilbert transform, symbol `−i sgn ξ` (zero on the mean).
    pub fn hilbert(&self) -> SpectralField {
        self.multiply(|xi| {
            if xi > 0.0 {
                Complex64::new(0.0, -1.0)
            } else if xi < 0.0 {
                Complex64::new(0.0, 1.0)
            } else {
                ZERO
            }
        })
    }

    /// `∂ₓ`, symbol `iξ`.
    pub fn derivative(&self) -> SpectralField {
        self.multiply(|xi| Complex64::new(0.0, xi))
    }

    /// Zero-mean primitive `∂ₓ⁻¹`, symbol `1/(iξ)`.
    pub fn antiderivative(&self) -> Result<SpectralField> {
        self.ensure_mean_zero()?;
        Ok(self.multiply(|xi| {
            if xi == 0.0 {
                ZERO
            } else {
                Complex64::new(0.0, -1.0 / xi)
            }
        }))
    }

    /// `D^α` or `J^α`. `D^α` with `α < 0` needs a zero-mean input.
    pub fn fractional(&self, op: FractionalOp, alpha: f64) -> Result<SpectralField> {
        match op {
            FractionalOp::Jx => Ok(self.multiply_real(|xi| bracket(xi).powf(alpha))),
            FractionalOp::Dx => {
                if alpha < 0.0 {
                    self.ensure_mean_zero()?;
                }
                if alpha == 0.0 {
                    return Ok(self.clone());
                }
                Ok(self.multiply_real(|xi| if xi == 0.0 { 0.0 } else { xi.abs().powf(alpha) }))
            }
        }
    }

    /// Free group `V(t)`, symbol `e^{−iξ|ξ|t}`.
    pub fn free_evolve(&self, t: f64) -> SpectralField {
        self.multiply(|xi| Complex64::from_polar(1.0, -xi * xi.abs() * t))
    }

    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let w = self.grid.xi_weight();
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| bracket(self.grid.xi(k)).powf(2.0 * s) * c.norm_sqr())
            .sum();
        (w * sum).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.xi_weight();
        (w * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `∫ f ḡ` via Plancherel.
    pub fn inner(&self, other: &SpectralField) -> Result<Complex64> {
        self.grid.ensure_same(&other.grid)?;
        let w = self.grid.xi_weight();
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            * w)
    }

    /// Transform of the complex conjugate field: `conj φ̂(−ξ)`.
    pub fn conj(&self) -> SpectralField {
        let m = self.grid.n_modes();
        let coeffs = (0..m).map(|k| self.coeffs[(m - k) % m].conj()).collect();
        SpectralField::from_raw(self.grid, coeffs)
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &SpectralField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<SpectralField> {
        self.grid.ensure_same(&other.grid)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f(*a, *b))
            .collect();
        Ok(SpectralField::from_raw(self.grid, coeffs))
    }

    pub fn scale(&self, c: Complex64) -> SpectralField {
        SpectralField::from_raw(self.grid, self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> SpectralField {
        SpectralField::from_raw(self.grid, self.coeffs.iter().map(|v| v * c).collect())
    }

    /// Product computed on a grid refined by `oversample` (≥ 2 makes it exact
    /// for any pair of resolved fields) and truncated back to this grid.
    pub fn product(&self, other: &SpectralField, oversample: usize) -> Result<SpectralField> {
        self.grid.ensure_same(&other.grid)?;
        let factor = oversample.max(1);
        let a = self.to_fine_physical(factor);
        let b = other.to_fine_physical(factor);
        let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        SpectralField::from_fine_physical(self.grid, factor, &prod)
    }

    /// Exact product restricted to `|n| ≤ ⌊fraction·M/2⌋` (the 2/3 rule for `fraction = 2/3`).
    pub fn dealiased_product(&self, other: &SpectralField, fraction: f64) -> Result<SpectralField> {
        let p = self.product(other, 2)?;
        Ok(p.truncate_band(fraction))
    }

    /// Zeroes wavenumbers above `⌊fraction·M/2⌋`.
    pub fn truncate_band(&self, fraction: f64) -> SpectralField {
        let cutoff = band_cutoff(self.grid.n_modes(), fraction);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if self.grid.wavenumber(k).unsigned_abs() as usize <= cutoff {
                    *c
                } else {
                    ZERO
                }
            })
            .collect();
        SpectralField::from_raw(self.grid, coeffs)
    }

    /// Moves the field onto a grid with the same period and a different
    /// resolution. Refuses to drop any coefficient above `tol` in magnitude.
    pub fn resample(&self, target: Grid, tol: f64) -> Result<SpectralField> {
        if (target.lambda() - self.grid.lambda()).abs() > 0.0 {
            return Err(Error::GridMismatch("resample needs equal periods".into()));
        }
        let mut out = SpectralField::zeros(target);
        for (k, c) in self.coeffs.iter().enumerate() {
            let n = self.grid.wavenumber(k);
            match target.index_of(n) {
                Some(j) => out.coeffs[j] = *c,
                None if c.norm() > tol => {
                    return Err(Error::Resolution(format!(
                        "mode {n} (|c|={:e}) does not fit on M={}",
                        c.norm(),
                        target.n_modes()
                    )))
                }
                None => {}
            }
        }
        Ok(out)
    }

    /// Largest `|n|` whose coefficient exceeds `tol` in magnitude.
    pub fn band_limit(&self, tol: f64) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(k, _)| self.grid.wavenumber(k).abs())
            .max()
            .unwrap_or(0)
    }
}

pub(crate) fn band_cutoff(m: usize, fraction: f64) -> usize {
    ((fraction * (m / 2) as f64) + 1e-9).floor() as usize
}
