mod common;

use std::f64::consts::PI;

use bo_core::evolution::{dilate, dilate_field, evolve, SolverConfig};
use bo_core::gauge::{
    check_highmode_inversion, check_inversion, check_negative_mode_identity, invert_gauge, make_gauge,
    make_gauge_with, residual_f_eq, residual_series, residual_w_eq, residual_w_eq2, DEFAULT_OVERSAMPLE,
};
use bo_core::{Error, Grid, Lebesgue, RealField, SpectralField};
use common::{coeff_list, cos_n, max_diff, real_field};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid(m: usize) -> Grid {
    Grid::new(1.0, m).unwrap()
}

fn worst(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max)
}

#[test]
fn zero_field_has_trivial_gauge() {
    let b = make_gauge(&RealField::zeros(grid(32))).unwrap();
    assert_eq!(b.f_spectral().l2_norm(), 0.0);
    assert_eq!(b.big_w().l2_norm(), 0.0);
    assert_eq!(b.w().l2_norm(), 0.0);
    assert_eq!(invert_gauge(&b).unwrap().max_abs(), 0.0);
    let u = evolve(&RealField::zeros(grid(32)), 0.1, &SolverConfig::with_dt(0.01)).unwrap();
    for r in residual_series(&u).unwrap() {
        assert_eq!((r.residual_f, r.residual_w, r.residual_w2), (0.0, 0.0, 0.0));
    }
}

#[test]
fn small_data_taylor_expansion() {
    let g = grid(64);
    let eps = 1e-6;
    let b = make_gauge(&cos_n(g, 1.0, eps)).unwrap();
    let first = SpectralField::plane_wave(g, 1, Complex64::new(0.0, -eps / 4.0)).unwrap();
    let err = b.w().sub(&first).unwrap().l2_norm();
    assert!(err <= 10.0 * eps * eps, "{err:e}");
}

#[test]
fn rejects_mean() {
    let u = cos_n(grid(32), 1.0, 1.0).add_constant(0.1);
    assert!(matches!(make_gauge(&u), Err(Error::MeanNotZero(_))));
    assert!(matches!(check_negative_mode_identity(&u), Err(Error::MeanNotZero(_))));
}

#[test]
fn algebraic_identities_on_examples() {
    let g = grid(128);
    for eps in [1e-3, 1e-1, 1.0] {
        let u = RealField::from_fn(g, |x| eps * (x.cos() + 0.3 * (2.0 * x).sin())).unwrap();
        assert!(check_negative_mode_identity(&u).unwrap() <= 1e-10);
        assert!(check_inversion(&u).unwrap() <= 1e-10);
    }
    let u = RealField::from_fn(g, |x| x.cos() + (3.0 * x).cos()).unwrap();
    assert!(check_highmode_inversion(&u).unwrap() <= 1e-10);
    assert_eq!(check_highmode_inversion(&RealField::zeros(g)).unwrap(), 0.0);
}

#[test]
fn equation_residuals_on_a_smooth_run() {
    let g = grid(64);
    let u = evolve(&cos_n(g, 1.0, 0.1), 1.0, &SolverConfig::with_dt(2e-3)).unwrap();
    assert!(worst(&residual_f_eq(&u).unwrap()) <= 1e-6);
    assert!(worst(&residual_w_eq(&u).unwrap()) <= 1e-6);
    assert!(worst(&residual_w_eq2(&u).unwrap()) <= 1e-6);
}

#[test]
fn equation_residuals_are_fourth_order() {
    let g = grid(64);
    let run = |dt: f64| evolve(&cos_n(g, 1.0, 0.1), 1.0, &SolverConfig::with_dt(dt)).unwrap();
    let coarse = run(0.04);
    let fine = run(0.02);
    for (name, f) in [
        ("F", residual_f_eq as fn(&_) -> _),
        ("w", residual_w_eq),
        ("w2", residual_w_eq2),
    ] {
        let a = worst(&f(&coarse).unwrap());
        let b = worst(&f(&fine).unwrap());
        assert!(a / b >= 12.0, "{name}: {a:e} -> {b:e}");
    }
}

#[test]
fn linear_regime_residual_is_quadratic_in_amplitude() {
    let g = grid(32);
    let cfg = SolverConfig::with_dt(0.01);
    let r = |eps: f64| worst(&residual_f_eq(&evolve(&cos_n(g, 1.0, eps), 0.5, &cfg).unwrap()).unwrap());
    assert!(r(1e-6) <= 1e-12, "{:e}", r(1e-6));
}

#[test]
fn dilation_covariance_of_w() {
    let g = grid(64);
    let u = evolve(&cos_n(g, 2.0, 0.2), 0.1, &SolverConfig::with_dt(0.01)).unwrap();
    let d = dilate(&u, 2.0).unwrap();
    for (s, sd) in u.states().iter().zip(d.states()) {
        let w = make_gauge_with(s, DEFAULT_OVERSAMPLE).unwrap();
        let wd = make_gauge_with(sd, DEFAULT_OVERSAMPLE).unwrap();
        let scale = w.w().coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (a, b) in w.w().coeffs().iter().zip(wd.w().coeffs()) {
            assert!((a - b).norm() <= 1e-12 * scale);
        }
    }
    // single snapshot, physical form: w_β(x) = β⁻¹ w(x/β)
    let s = real_field(g, &[(0.1, 0.05), (0.0, 0.2)]).to_spectral();
    let beta = 3.0;
    let wb = make_gauge_with(&dilate_field(&s, beta).unwrap(), 2).unwrap().w().to_physical_complex();
    let w = make_gauge_with(&s, 2).unwrap().w().to_physical_complex();
    for (a, b) in wb.iter().zip(&w) {
        assert!((a - b / beta).norm() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gauge_round_trip(modes in coeff_list(12, 0.2)) {
        let u = real_field(grid(256), &modes);
        prop_assert!(check_inversion(&u).unwrap() <= 1e-10);
        prop_assert!(check_negative_mode_identity(&u).unwrap() <= 1e-10);
        let back = invert_gauge(&make_gauge(&u).unwrap()).unwrap();
        prop_assert!(max_diff(back.samples(), u.samples()) <= 1e-10);
        prop_assert!(make_gauge(&u).unwrap().chain_rule_defect().unwrap() <= 1e-10);
    }

    #[test]
    fn phase_is_lipschitz_in_l2(a in coeff_list(8, 0.5), b in coeff_list(8, 0.5), lambda in 1.0f64..3.0) {
        let g = Grid::new(lambda, 64).unwrap();
        let u1 = real_field(g, &a);
        let u2 = real_field(g, &b);
        let f1 = u1.to_spectral().antiderivative().unwrap().to_physical().unwrap();
        let f2 = u2.to_spectral().antiderivative().unwrap().to_physical().unwrap();
        let phase_gap = f1
            .samples()
            .iter()
            .zip(f2.samples())
            .map(|(x, y)| (Complex64::from_polar(1.0, -x / 2.0) - Complex64::from_polar(1.0, -y / 2.0)).norm())
            .fold(0.0, f64::max);
        let diff = u1.to_spectral().sub(&u2.to_spectral()).unwrap();
        let prim = diff.antiderivative().unwrap().to_physical().unwrap().lebesgue_norm(Lebesgue::LInf);
        let l2 = diff.l2_norm();
        prop_assert!(phase_gap <= 0.5 * prim + 1e-14);
        // ‖∂ₓ⁻¹v‖_{L∞} ≤ (πλ/6)^{1/2} ‖v‖_{L²} for mean-zero v
        prop_assert!(prim <= (PI * lambda / 6.0).sqrt() * l2 + 1e-14);
    }
}
