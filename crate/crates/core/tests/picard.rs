mod common;

use std::f64::consts::PI;

use bo_core::evolution::SolverConfig;
use bo_core::picard::{
    closed_form_a, eps_n, fitted_order, illposed_sweep, picard_iterates, series_vs_solver, sweep_config,
    sweep_rows, third_iterates, EpsParams, GridPolicy,
};
use bo_core::{Error, Grid, RealField};
use common::{coeff_list, cos_n, real_field};
use proptest::prelude::*;

fn grid(m: usize) -> Grid {
    Grid::new(1.0, m).unwrap()
}

fn max_err(s: &[bo_core::picard::SeriesRow]) -> f64 {
    s.iter().map(|r| r.error).fold(0.0, f64::max)
}

#[test]
fn iterates_match_closed_forms() {
    let g = grid(64);
    let cfg = SolverConfig::with_dt(1.0 / 64.0);
    for n in [1u32, 2, 4] {
        let table = picard_iterates(&cos_n(g, n as f64, 1.0), 3, 1.0, &cfg).unwrap();
        for k in 1..=3 {
            let a = table.a(k);
            let mut worst = 0.0f64;
            for i in 0..a.len() {
                let exact = closed_form_a(k, n, a.time(i), g).unwrap().to_spectral();
                worst = worst.max(a.state(i).sub(&exact).unwrap().l2_norm());
            }
            assert!(worst <= 1e-6, "N = {n}, k = {k}: {worst:e}");
        }
    }
}

#[test]
fn closed_forms_at_time_zero() {
    let g = grid(32);
    let a1 = closed_form_a(1, 3, 0.0, g).unwrap();
    assert_eq!(a1, cos_n(g, 3.0, 1.0));
    for k in [2, 3] {
        assert!(closed_form_a(k, 5, 0.0, g).unwrap().max_abs() < 1e-15);
    }
    assert!(closed_form_a(4, 1, 0.5, g).is_err());
    assert!(closed_form_a(1, 0, 0.5, g).is_err());
}

#[test]
fn rejects_bad_requests() {
    let g = grid(32);
    let cfg = SolverConfig::with_dt(0.1);
    assert!(matches!(picard_iterates(&cos_n(g, 1.0, 1.0), 13, 1.0, &cfg), Err(Error::InvalidParameter(_))));
    assert!(matches!(picard_iterates(&cos_n(g, 1.0, 1.0), 0, 1.0, &cfg), Err(Error::InvalidParameter(_))));
    let shifted = cos_n(g, 1.0, 1.0).add_constant(0.2);
    assert!(matches!(picard_iterates(&shifted, 2, 1.0, &cfg), Err(Error::MeanNotZero(_))));
    assert!(illposed_sweep(0.5, 0.5, &[8], GridPolicy::default(), &EpsParams::default()).is_err());
    assert!(matches!(GridPolicy::Fixed { n_modes: 64 }.grid_for(32), Err(Error::Resolution(_))));
}

#[test]
fn series_error_vanishes_at_zero_amplitude() {
    let g = grid(32);
    let rows = series_vs_solver(&cos_n(g, 1.0, 1.0), 0.0, 2, 0.5, 0.0, &SolverConfig::with_dt(0.01)).unwrap();
    assert!(rows.iter().all(|r| r.error == 0.0));
}

#[test]
fn series_error_ratios_under_doubling() {
    let g = grid(64);
    let cfg = SolverConfig::with_dt(1.0 / 128.0);
    let phi = cos_n(g, 1.0, 1.0);
    for (k, want, tol) in [(1usize, 4.0, 0.10), (2, 8.0, 0.15)] {
        let e1 = max_err(&series_vs_solver(&phi, 1e-2, k, 1.0, 0.0, &cfg).unwrap());
        let e2 = max_err(&series_vs_solver(&phi, 2e-2, k, 1.0, 0.0, &cfg).unwrap());
        let ratio = e2 / e1;
        assert!((ratio / want - 1.0).abs() <= tol, "K = {k}: ratio {ratio}");
    }
    let eps = [1e-3, 2e-3, 4e-3];
    let errs: Vec<f64> = eps.iter().map(|e| e * e * 3.0).collect();
    assert!((fitted_order(&eps, &errs) - 2.0).abs() < 1e-12);
}

#[test]
fn third_iterate_leading_term() {
    let t = 0.5;
    let third = third_iterates(t, &[4, 8, 16], GridPolicy::default(), &sweep_config(t)).unwrap();
    let rows = sweep_rows(&third, 0.0, &EpsParams::default());
    let lead = t / 8.0 * PI.sqrt();
    for r in &rows {
        let n2 = (r.n * r.n) as f64;
        assert!((r.norm_a3 / lead - 1.0).abs() <= 2.0 / n2, "N = {}: {}", r.n, r.norm_a3 / lead);
        assert!((r.norm_psi - PI.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn psi_norms_and_sweep_spread() {
    let s = -0.5;
    let rows = illposed_sweep(s, 0.5, &[8, 16, 32], GridPolicy::default(), &EpsParams::default()).unwrap();
    assert_eq!(rows.len(), 3);
    let last = rows.last().unwrap().ratio;
    for r in &rows {
        let nf = r.n as f64;
        let want = PI.sqrt() * (1.0 + nf * nf).powf(s / 2.0) * nf.powf(-s);
        assert!((r.norm_psi / want - 1.0).abs() < 1e-12);
        assert!((r.ratio / last - 1.0).abs() <= 0.2);
        assert_eq!(r.eps_n, eps_n(r.n, s, 0.5, &EpsParams::default()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn iterates_are_homogeneous_and_real(modes in coeff_list(3, 0.5), c in -2.0f64..2.0) {
        let g = grid(32);
        let phi = real_field(g, &modes);
        let cfg = SolverConfig::with_dt(0.05);
        let base = picard_iterates(&phi, 3, 0.2, &cfg).unwrap();
        let scaled = picard_iterates(&RealField::new(g, phi.samples().iter().map(|v| c * v).collect()).unwrap(), 3, 0.2, &cfg).unwrap();
        for k in 1..=3 {
            let ck = c.powi(k as i32);
            for (a, b) in base.a(k).states().iter().zip(scaled.a(k).states()) {
                prop_assert!(a.is_real(1e-10));
                let scale = a.l2_norm().max(1e-300) * ck.abs();
                prop_assert!(b.sub(&a.scale_real(ck)).unwrap().l2_norm() <= 1e-10 * scale.max(1e-12));
            }
        }
    }
}
