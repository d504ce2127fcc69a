//! Power-series expansion of the flow map, `u = Σ_{k≥1} ε^k A_k(φ)` for
//! data `εφ`, with
//!
//! ```text
//! A₁(t) = V(t)φ,
//! A_k(t) = ½ Σ_{k₁+k₂=k} ∫₀ᵗ V(t−t′) ∂ₓ(A_{k₁}A_{k₂})(t′) dt′,
//! ```
//!
//! plus trigonometric closed forms for `φ = cos Nx` and the third-iterate
//! growth experiment.
//!
//! The recursion is integrated by Gauss–Legendre collocation. On each panel
//! `[t_n, t_n + h]` the iterates are written in the interaction picture
//! based at `t_n`; orders are advanced one after another, the node values of
//! the lower orders feeding the forcing of the next. Panels are chosen so
//! that `h·ω_max ≤ max_phase_step`, where `ω_max = 2(K·B)²` bounds the
//! oscillation of the pulled-back forcing for data of band `B`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::quadrature::GaussLegendre;
use crate::evolution::{evolve, SolverConfig, Trajectory};
use crate::fft::PaddedTransform;
use crate::grid::Grid;
use crate::spectral::{band_cutoff, RealField, SpectralField};

/// Largest admissible expansion order.
pub const MAX_ITERATE_ORDER: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `A_1 … A_K` of one datum on a shared time lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateTable {
    phi: RealField,
    iterates: Vec<Trajectory>,
}

impl IterateTable {
    pub fn phi(&self) -> &RealField {
        &self.phi
    }

    pub fn order(&self) -> usize {
        self.iterates.len()
    }

    /// `A_k` for `1 ≤ k ≤ K`.
    pub fn a(&self, k: usize) -> &Trajectory {
        assert!(k >= 1 && k <= self.iterates.len(), "iterate order out of range");
        &self.iterates[k - 1]
    }

    pub fn iterates(&self) -> &[Trajectory] {
        &self.iterates
    }

    /// `Σ_{k ≤ upto} ε^k A_k`.
    pub fn partial_sum(&self, eps: f64, upto: usize) -> Result<Trajectory> {
        let upto = upto.min(self.order());
        let base = self.a(1);
        base.map_states(|i, _| {
            let mut acc = SpectralField::zeros(*base.grid());
            let mut p = 1.0;
            for k in 1..=upto {
                p *= eps;
                acc = acc.add(&self.a(k).state(i).scale_real(p)).expect("same grid");
            }
            acc
        })
    }
}

struct PanelPhases {
    node: Vec<Vec<Complex64>>,
    back: Vec<Vec<Complex64>>,
    full: Vec<Complex64>,
}

impl PanelPhases {
    fn new(grid: &Grid, rule: &GaussLegendre, h: f64) -> Self {
        let phase = |tau: f64| -> Vec<Complex64> {
            (0..grid.n_modes())
                .map(|k| {
                    let xi = grid.xi(k);
                    Complex64::from_polar(1.0, -xi * xi.abs() * tau)
                })
                .collect()
        };
        PanelPhases {
            node: rule.nodes.iter().map(|&c| phase(c * h)).collect(),
            back: rule.nodes.iter().map(|&c| phase(-c * h)).collect(),
            full: phase(h),
        }
    }
}

/// Number of collocation panels per output step.
fn substeps(h_out: f64, band: f64, k_max: usize, max_phase: f64) -> usize {
    let omega = 2.0 * (k_max as f64 * band).powi(2);
    ((h_out * omega / max_phase) - 1e-9).ceil().max(1.0) as usize
}

/// Computes `A_1 … A_K` of `phi` on `[0, t_final]`, sampled with the same
/// lattice rule as [`evolve`].
pub fn picard_iterates(phi: &RealField, k_max: usize, t_final: f64, cfg: &SolverConfig) -> Result<IterateTable> {
    cfg.validate()?;
    if k_max == 0 || k_max > MAX_ITERATE_ORDER {
        return Err(Error::InvalidParameter(format!(
            "iterate order must lie in 1..={MAX_ITERATE_ORDER}, got {k_max}"
        )));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!("final time must be >= 0, got {t_final}")));
    }
    let spec = phi.to_spectral();
    spec.ensure_mean_zero()?;

    let grid = *phi.grid();
    let m = grid.n_modes();
    let dx = grid.dx();
    let steps = if t_final > 0.0 {
        ((t_final / cfg.dt) - 1e-9).ceil().max(1.0) as usize
    } else {
        0
    };
    let h_out = if steps > 0 { t_final / steps as f64 } else { cfg.dt };
    let scale = spec.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let band = spec.band_limit(1e-14 * scale) as f64 / grid.lambda();
    let sub = substeps(h_out, band, k_max, cfg.max_phase_step);
    let h = h_out / sub as f64;

    let rule = GaussLegendre::new(cfg.quadrature_order);
    let nq = rule.order();
    let phases = PanelPhases::new(&grid, &rule, h);
    let cutoff = band_cutoff(m, cfg.dealias_fraction);
    let half_ik: Vec<Complex64> = (0..m)
        .map(|k| {
            if grid.wavenumber(k).unsigned_abs() as usize <= cutoff && k != m / 2 {
                Complex64::new(0.0, 0.5 * grid.xi(k))
            } else {
                ZERO
            }
        })
        .collect();

    let mut padded = PaddedTransform::new(m, 2);
    let p = padded.fine_len();

    // Raw coefficients (field coefficient / dx) throughout.
    let mut a: Vec<Vec<Complex64>> = vec![vec![ZERO; m]; k_max];
    a[0] = spec.coeffs().iter().map(|c| c / dx).collect();
    let mut fine: Vec<Vec<Vec<Complex64>>> = vec![vec![vec![ZERO; p]; nq]; k_max];
    let mut pulled: Vec<Vec<Complex64>> = vec![vec![ZERO; m]; nq];
    let mut node_val = vec![ZERO; m];
    let mut prod = vec![ZERO; p];
    let mut raw = vec![ZERO; m];

    let snapshot = |a: &[Vec<Complex64>], k: usize| -> SpectralField {
        SpectralField::from_raw(grid, a[k].iter().map(|c| c * dx).collect())
    };
    let mut out: Vec<Vec<SpectralField>> = (0..k_max).map(|k| vec![snapshot(&a, k)]).collect();

    for _ in 0..steps {
        for _ in 0..sub {
            for k in 0..k_max {
                let needs_nodes = k + 1 < k_max;
                if k == 0 {
                    if needs_nodes {
                        for l in 0..nq {
                            for j in 0..m {
                                node_val[j] = phases.node[l][j] * a[0][j];
                            }
                            padded.to_fine(&node_val, &mut fine[0][l]);
                        }
                    }
                    for j in 0..m {
                        a[0][j] *= phases.full[j];
                    }
                    continue;
                }
                for l in 0..nq {
                    prod.iter_mut().for_each(|v| *v = ZERO);
                    for i in 0..k {
                        let (fi, fj) = (&fine[i][l], &fine[k - 1 - i][l]);
                        for ((v, x), y) in prod.iter_mut().zip(fi).zip(fj) {
                            *v += x * y;
                        }
                    }
                    padded.from_fine(&mut prod, &mut raw);
                    for j in 0..m {
                        pulled[l][j] = phases.back[l][j] * half_ik[j] * raw[j];
                    }
                }
                if needs_nodes {
                    for mi in 0..nq {
                        for j in 0..m {
                            let mut acc = a[k][j];
                            for l in 0..nq {
                                acc += pulled[l][j] * (h * rule.partial[mi][l]);
                            }
                            node_val[j] = phases.node[mi][j] * acc;
                        }
                        padded.to_fine(&node_val, &mut fine[k][mi]);
                    }
                }
                for j in 0..m {
                    let mut acc = a[k][j];
                    for l in 0..nq {
                        acc += pulled[l][j] * (h * rule.weights[l]);
                    }
                    a[k][j] = phases.full[j] * acc;
                }
            }
        }
        for (k, o) in out.iter_mut().enumerate() {
            o.push(snapshot(&a, k));
        }
    }

    let iterates = out
        .into_iter()
        .map(|states| Ok(Trajectory::new(grid, 0.0, h_out, states)?.with_meta(SolverConfig { dt: h_out, ..*cfg })))
        .collect::<Result<Vec<_>>>()?;
    Ok(IterateTable {
        phi: phi.clone(),
        iterates,
    })
}

/// `A_k(t, cos Nx)` for `k ≤ 3` in closed form, sampled on `grid`.
/// `cos Nx` is periodic on the grid only when `Nλ` is an integer.
pub fn closed_form_a(k: usize, n: u32, t: f64, grid: Grid) -> Result<RealField> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    let nf = n as f64;
    let n2t = nf * nf * t;
    let f: Box<dyn Fn(f64) -> f64> = match k {
        1 => Box::new(move |x: f64| (nf * x - n2t).cos()),
        2 => Box::new(move |x: f64| {
            ((2.0 * nf * x - 2.0 * n2t).cos() - (2.0 * nf * x - 4.0 * n2t).cos()) / (4.0 * nf)
        }),
        3 => Box::new(move |x: f64| {
            let c = 1.0 / (nf * nf);
            -(t / 8.0) * (nf * x - n2t).sin()
                + c / 16.0 * ((nf * x - 3.0 * n2t).cos() - (nf * x - n2t).cos())
                + c / 16.0 * ((3.0 * nf * x - 3.0 * n2t).cos() - (3.0 * nf * x - 9.0 * n2t).cos())
                - 3.0 * c / 32.0
                    * ((3.0 * nf * x - 5.0 * n2t).cos() - (3.0 * nf * x - 9.0 * n2t).cos())
        }),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "closed forms exist for k <= 3, got {k}"
            )))
        }
    };
    RealField::from_fn(grid, f)
}

/// One row of the series-versus-solver comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub error: f64,
}

/// `‖evolve(εφ)(t) − Σ_{k≤K} ε^k A_k(φ)(t)‖_{H^s}` on the solver lattice.
pub fn series_vs_solver(
    phi: &RealField,
    eps: f64,
    k_max: usize,
    t_final: f64,
    s: f64,
    cfg: &SolverConfig,
) -> Result<Vec<SeriesRow>> {
    let table = picard_iterates(phi, k_max, t_final, cfg)?;
    let u = evolve(&phi.scale(eps), t_final, cfg)?;
    let series = table.partial_sum(eps, k_max)?;
    u.states()
        .iter()
        .zip(series.states())
        .enumerate()
        .map(|(i, (a, b))| {
            Ok(SeriesRow {
                t: u.time(i),
                error: a.sub(b)?.sobolev_norm(s),
            })
        })
        .collect()
}

/// Least-squares slope of `log error` against `log ε`.
pub fn fitted_order(eps: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// How the sweep picks its grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GridPolicy {
    /// One grid with `M = next_pow2(factor · N_max)` for every `N`.
    Scaled { factor: usize },
    /// A fixed number of samples; `N` must satisfy `4N ≤ M`.
    Fixed { n_modes: usize },
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy::Scaled { factor: 8 }
    }
}

impl GridPolicy {
    pub fn grid_for(&self, n_max: u32) -> Result<Grid> {
        let m = match *self {
            GridPolicy::Scaled { factor } => (factor.max(4) * n_max as usize).next_power_of_two(),
            GridPolicy::Fixed { n_modes } => n_modes,
        };
        let g = Grid::new(1.0, m)?;
        if 4 * n_max as usize > m {
            return Err(Error::Resolution(format!("N = {n_max} needs M >= {}, got {m}", 4 * n_max)));
        }
        Ok(g)
    }
}

/// Constants in `ε_N = min(ε₀/2, t/(4C_K), (t N^s/(4C))^{1/K})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsParams {
    pub eps0: f64,
    pub c_k: f64,
    pub c: f64,
    pub k: u32,
}

impl Default for EpsParams {
    fn default() -> Self {
        EpsParams {
            eps0: 0.1,
            c_k: 1.0,
            c: 1.0,
            k: 4,
        }
    }
}

pub fn eps_n(n: u32, s: f64, t: f64, p: &EpsParams) -> f64 {
    let a = p.eps0 / 2.0;
    let b = t / (4.0 * p.c_k);
    let c = (t * (n as f64).powf(s) / (4.0 * p.c)).powf(1.0 / p.k.max(1) as f64);
    a.min(b).min(c)
}

/// `A₃(t, cos Nx)` for one `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThirdIterate {
    pub n: u32,
    pub t: f64,
    pub a3: SpectralField,
}

/// Solver settings for the sweep: exact products (no band truncation, since
/// `3N` exceeds the 2/3 band on the policy grid), a single output step and
/// six-point panels of phase 1.
pub fn sweep_config(t: f64) -> SolverConfig {
    SolverConfig {
        dt: t,
        dealias_fraction: 1.0,
        quadrature_order: 6,
        max_phase_step: 1.0,
        ..SolverConfig::default()
    }
}

/// `A₃(t, cos Nx)` for every `N`, computed in parallel.
pub fn third_iterates(t: f64, n_list: &[u32], policy: GridPolicy, cfg: &SolverConfig) -> Result<Vec<ThirdIterate>> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("sweep time must be > 0, got {t}")));
    }
    let n_max = *n_list
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidParameter("empty N list".into()))?;
    if n_list.contains(&0) {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    let grid = policy.grid_for(n_max)?;
    let cutoff = band_cutoff(grid.n_modes(), cfg.dealias_fraction);
    if 3 * n_max as usize > cutoff {
        return Err(Error::Resolution(format!(
            "mode 3N = {} above the product band {cutoff}",
            3 * n_max
        )));
    }
    n_list
        .par_iter()
        .map(|&n| {
            let phi = RealField::from_fn(grid, |x| (n as f64 * x).cos())?;
            let table = picard_iterates(&phi, 3, t, cfg)?;
            let a3 = table.a(3).last().clone();
            Ok(ThirdIterate { n, t, a3 })
        })
        .collect()
}

/// One row of the ill-posedness sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u32,
    pub norm_psi: f64,
    pub norm_a3: f64,
    pub ratio: f64,
    pub eps_n: f64,
}

/// `r_N = ‖A₃(t, Ψ_N)‖_{H^s} / (t N^{−2s} ‖Ψ_N‖³_{H^s})` with `Ψ_N = N^{−s} cos Nx`,
/// using `A₃(t, Ψ_N) = N^{−3s} A₃(t, cos Nx)`.
pub fn sweep_rows(third: &[ThirdIterate], s: f64, eps: &EpsParams) -> Vec<SweepRow> {
    third
        .iter()
        .map(|it| {
            let nf = it.n as f64;
            let grid = *it.a3.grid();
            let psi = SpectralField::plane_wave(grid, it.n as i64, Complex64::new(0.5 * nf.powf(-s), 0.0))
                .and_then(|p| p.add(&p.conj()))
                .expect("N resolved by the sweep grid");
            let norm_psi = psi.sobolev_norm(s);
            let norm_a3 = nf.powf(-3.0 * s) * it.a3.sobolev_norm(s);
            SweepRow {
                n: it.n,
                norm_psi,
                norm_a3,
                ratio: norm_a3 / (it.t * nf.powf(-2.0 * s) * norm_psi.powi(3)),
                eps_n: eps_n(it.n, s, it.t, eps),
            }
        })
        .collect()
}

/// Third-iterate growth table for one regularity index `s < 0`.
pub fn illposed_sweep(s: f64, t: f64, n_list: &[u32], policy: GridPolicy, eps: &EpsParams) -> Result<Vec<SweepRow>> {
    if !(s < 0.0) {
        return Err(Error::InvalidParameter(format!("the sweep needs s < 0, got {s}")));
    }
    let third = third_iterates(t, n_list, policy, &sweep_config(t))?;
    Ok(sweep_rows(&third, s, eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(1.0, 32).unwrap()
    }

    #[test]
    fn closed_forms_vanish_at_zero_time() {
        for k in [2, 3] {
            for n in [1, 4] {
                assert!(closed_form_a(k, n, 0.0, grid()).unwrap().max_abs() < 1e-15);
            }
        }
        assert!(closed_form_a(4, 1, 0.5, grid()).is_err());
    }

    #[test]
    fn order_guard_and_mean() {
        let phi = RealField::from_fn(grid(), f64::cos).unwrap();
        let cfg = SolverConfig::with_dt(0.1);
        assert!(picard_iterates(&phi, 0, 1.0, &cfg).is_err());
        assert!(picard_iterates(&phi, 13, 1.0, &cfg).is_err());
        let shifted = phi.add_constant(0.5);
        assert!(matches!(picard_iterates(&shifted, 2, 1.0, &cfg), Err(Error::MeanNotZero(_))));
    }

    #[test]
    fn first_two_iterates_of_cosine() {
        let g = grid();
        let phi = RealField::from_fn(g, |x| (2.0 * x).cos()).unwrap();
        let table = picard_iterates(&phi, 2, 0.5, &SolverConfig::with_dt(0.05)).unwrap();
        for k in 1..=2 {
            let a = table.a(k);
            for i in 0..a.len() {
                let exact = closed_form_a(k, 2, a.time(i), g).unwrap().to_spectral();
                assert!(a.state(i).sub(&exact).unwrap().l2_norm() < 1e-9);
            }
        }
    }

    #[test]
    fn eps_n_picks_the_minimum() {
        let p = EpsParams::default();
        assert_eq!(eps_n(1, -0.5, 1.0, &p), 0.05);
        let small = eps_n(1 << 20, -2.0, 0.5, &p);
        assert!((small - (0.5 * (2f64.powi(20)).powf(-2.0) / 4.0).powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn grid_policy() {
        assert_eq!(GridPolicy::default().grid_for(64).unwrap().n_modes(), 512);
        assert!(GridPolicy::Fixed { n_modes: 64 }.grid_for(32).is_err());
    }
}
