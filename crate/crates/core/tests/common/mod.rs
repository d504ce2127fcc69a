#![allow(dead_code)]

use bo_core::{Grid, RealField, SpectralField};
use num_complex::Complex64;
use proptest::prelude::*;

/// Real mean-zero field with the given coefficients on modes `1..=len`.
pub fn real_field(grid: Grid, modes: &[(f64, f64)]) -> RealField {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.n_modes()];
    let period = grid.period();
    for (i, &(re, im)) in modes.iter().enumerate() {
        let n = (i + 1) as i64;
        let c = Complex64::new(re, im) * period;
        coeffs[grid.index_of(n).unwrap()] = c;
        coeffs[grid.index_of(-n).unwrap()] = c.conj();
    }
    SpectralField::new(grid, coeffs).unwrap().to_physical().unwrap()
}

/// Complex field with coefficients on `-len..=len`.
pub fn complex_field(grid: Grid, modes: &[(f64, f64)]) -> SpectralField {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.n_modes()];
    let band = (modes.len() / 2) as i64;
    for (i, &(re, im)) in modes.iter().enumerate() {
        let n = i as i64 - band;
        coeffs[grid.index_of(n).unwrap()] = Complex64::new(re, im) * grid.period();
    }
    SpectralField::new(grid, coeffs).unwrap()
}

pub fn coeff_list(max_len: usize, amp: f64) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-amp..amp, -amp..amp), 1..=max_len)
}

pub fn cos_n(grid: Grid, n: f64, amp: f64) -> RealField {
    RealField::from_fn(grid, move |x| amp * (n * x).cos()).unwrap()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
