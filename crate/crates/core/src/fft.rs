//! Thin layer over `rustfft` with per-thread plan caching, plus the padded
//! transforms used for alias-free products.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn forward_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

pub(crate) fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Unnormalized forward DFT in place.
pub(crate) fn forward(buf: &mut [Complex64]) {
    forward_plan(buf.len()).process(buf);
}

/// Unnormalized inverse DFT in place.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    inverse_plan(buf.len()).process(buf);
}

/// Copies an `m`-point FFT-ordered spectrum into a `p`-point one (`p ≥ m`),
/// leaving the new high modes at zero. The Nyquist slot of the source is skipped.
pub(crate) fn pad_spectrum(src: &[Complex64], dst: &mut [Complex64]) {
    let m = src.len();
    let p = dst.len();
    debug_assert!(p >= m);
    dst.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
    let half = m / 2;
    dst[..half].copy_from_slice(&src[..half]);
    for k in half + 1..m {
        dst[p - (m - k)] = src[k];
    }
}

/// Inverse of [`pad_spectrum`]: keeps wavenumbers `|n| < m/2` of a `p`-point spectrum.
pub(crate) fn truncate_spectrum(src: &[Complex64], dst: &mut [Complex64]) {
    let m = dst.len();
    let p = src.len();
    debug_assert!(p >= m);
    let half = m / 2;
    dst[..half].copy_from_slice(&src[..half]);
    dst[half] = Complex64::new(0.0, 0.0);
    for k in half + 1..m {
        dst[k] = src[p - (m - k)];
    }
}

/// Reusable buffers and plans for products of `m`-mode spectra evaluated on a
/// `p = factor·m` grid. All spectra here are raw DFT coefficients (no
/// `2πλ/M` factor); callers handle the physical normalization.
pub(crate) struct PaddedTransform {
    m: usize,
    p: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl PaddedTransform {
    pub(crate) fn new(m: usize, factor: usize) -> Self {
        let p = m * factor.max(1);
        let fwd = forward_plan(p);
        let inv = inverse_plan(p);
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        PaddedTransform {
            m,
            p,
            fwd,
            inv,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    pub(crate) fn fine_len(&self) -> usize {
        self.p
    }

    /// Spectrum with `m` entries (field convention: value = Σ c_k e^{ikx}/m)
    /// to values on the fine grid.
    pub(crate) fn to_fine(&mut self, spec: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(spec.len(), self.m);
        pad_spectrum(spec, out);
        self.inv.process_with_scratch(out, &mut self.scratch);
        let s = 1.0 / self.m as f64;
        out.iter_mut().for_each(|c| *c *= s);
    }

    /// Fine-grid values back to an `m`-entry spectrum under the same convention.
    /// Destroys `fine`.
    pub(crate) fn from_fine(&mut self, fine: &mut [Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(fine.len(), self.p);
        self.fwd.process_with_scratch(fine, &mut self.scratch);
        truncate_spectrum(fine, out);
        let s = self.m as f64 / self.p as f64;
        out.iter_mut().for_each(|c| *c *= s);
    }
}
