//! Windowed surrogates for the Bourgain-type space-time norms.
//!
//! A trajectory on `[0, T]` is multiplied by a fixed taper and transformed in
//! `(t, x)`; every norm is a weighted sum over the resulting `(τ, ξ)`
//! lattice with `σ = τ + ξ|ξ|`. This stands in for the restriction norm
//! (an infimum over extensions of the field off `[0, T]`) and bounds it from
//! above up to the taper. Littlewood–Paley blocks are sharp:
//! `Δ₀` keeps `|ξ| ≤ 2`, `Δⱼ` keeps `2ʲ < |ξ| ≤ 2ʲ⁺¹`.

mod spectrum;
mod strichartz;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::bracket;
use crate::spectral::SpectralField;

pub use spectrum::{st_transform, SpaceTimeSpectrum, TaperSpec, MIN_TIME_SAMPLES};
pub use strichartz::{random_field, strichartz_ratio, RandomFieldSpec, StrichartzSummary};

/// Norm families understood by [`bourgain_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NormFamily {
    /// `X^{b,s}`: `‖⟨σ⟩^b⟨ξ⟩^s û‖_{L²_{τ,ξ}}`.
    X,
    /// `Ẋ^{b,s}`: `‖|σ|^b|ξ|^s û‖_{L²_{τ,ξ}}`.
    Xdot,
    /// `Z^{b,s}`: `‖⟨σ⟩^b⟨ξ⟩^s û‖_{L²_ξ L¹_τ}`.
    Z,
    /// `A^b`: `‖⟨σ⟩^b û‖_{L¹_{τ,ξ}}`.
    A,
    /// `Y^s = X^{1/2,s} + Z^{0,s}`.
    Y,
    /// `L⁴_{t,x}`.
    L4,
    /// `(Σₖ ‖Δₖu‖²_{L⁴})^{1/2}`.
    L4Tilde,
    /// `Z^{0,0} + X^{7/8,−1}(Q₃u) + L̃⁴`.
    N,
    /// `Y^s + X^{1,−1}(Q₁w)`.
    Ms,
}

impl NormFamily {
    pub const ALL: [NormFamily; 9] = [
        NormFamily::X,
        NormFamily::Xdot,
        NormFamily::Z,
        NormFamily::A,
        NormFamily::Y,
        NormFamily::L4,
        NormFamily::L4Tilde,
        NormFamily::N,
        NormFamily::Ms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NormFamily::X => "X",
            NormFamily::Xdot => "Xdot",
            NormFamily::Z => "Z",
            NormFamily::A => "A",
            NormFamily::Y => "Y",
            NormFamily::L4 => "L4",
            NormFamily::L4Tilde => "L4tilde",
            NormFamily::N => "N",
            NormFamily::Ms => "Ms",
        }
    }

    pub fn uses_b(self) -> bool {
        matches!(self, NormFamily::X | NormFamily::Xdot | NormFamily::Z | NormFamily::A)
    }

    pub fn uses_s(self) -> bool {
        matches!(
            self,
            NormFamily::X | NormFamily::Xdot | NormFamily::Z | NormFamily::Y | NormFamily::Ms
        )
    }
}

impl fmt::Display for NormFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NormFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown norm family '{s}'")))
    }
}

/// Range accepted for `b` and `s`.
pub const PARAM_RANGE: (f64, f64) = (-2.0, 2.0);

fn check_param(family: NormFamily, name: &str, value: Option<f64>, used: bool) -> Result<f64> {
    match (value, used) {
        (Some(v), true) => {
            if !(PARAM_RANGE.0..=PARAM_RANGE.1).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} outside [{}, {}]",
                    PARAM_RANGE.0, PARAM_RANGE.1
                )));
            }
            Ok(v)
        }
        (None, true) => Err(Error::InvalidParameter(format!("{family} needs {name}"))),
        (Some(_), false) => Err(Error::InvalidParameter(format!("{family} takes no {name}"))),
        (None, false) => Ok(0.0),
    }
}

/// Evaluates one norm family. `b` and `s` must be given exactly when the
/// family depends on them.
pub fn bourgain_norm(
    spec: &SpaceTimeSpectrum,
    family: NormFamily,
    b: Option<f64>,
    s: Option<f64>,
) -> Result<f64> {
    let b = check_param(family, "b", b, family.uses_b())?;
    let s = check_param(family, "s", s, family.uses_s())?;
    Ok(match family {
        NormFamily::X => x_norm(spec, b, s),
        NormFamily::Xdot => xdot_norm(spec, b, s),
        NormFamily::Z => z_norm(spec, b, s),
        NormFamily::A => a_norm(spec, b),
        NormFamily::Y => x_norm(spec, 0.5, s) + z_norm(spec, 0.0, s),
        NormFamily::L4 => spec.l4_norm(),
        NormFamily::L4Tilde => l4_tilde_norm(spec),
        NormFamily::N => {
            let q3 = spec.restrict(|xi| xi.abs() > 3.0);
            z_norm(spec, 0.0, 0.0) + x_norm(&q3, 7.0 / 8.0, -1.0) + l4_tilde_norm(spec)
        }
        NormFamily::Ms => {
            let q1 = spec.restrict(|xi| xi.abs() > 1.0);
            x_norm(spec, 0.5, s) + z_norm(spec, 0.0, s) + x_norm(&q1, 1.0, -1.0)
        }
    })
}

fn l2_weighted(spec: &SpaceTimeSpectrum, f: impl Fn(f64, f64) -> f64) -> f64 {
    let m = spec.grid().n_modes();
    let mut sum = 0.0;
    for i in 0..spec.n_tau() {
        for k in 0..m {
            let c = spec.at(i, k);
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            sum += spec.symmetric_weight(i, k, &f) * c.norm_sqr();
        }
    }
    (spec.cell_weight() * sum).sqrt()
}

fn x_norm(spec: &SpaceTimeSpectrum, b: f64, s: f64) -> f64 {
    l2_weighted(spec, |tau, xi| {
        bracket(tau + xi * xi.abs()).powf(2.0 * b) * bracket(xi).powf(2.0 * s)
    })
}

/// `|y|^p` with the convention that `y = 0` contributes nothing unless `p = 0`.
fn homogeneous(y: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if y == 0.0 {
        0.0
    } else {
        y.abs().powf(p)
    }
}

fn xdot_norm(spec: &SpaceTimeSpectrum, b: f64, s: f64) -> f64 {
    l2_weighted(spec, |tau, xi| {
        homogeneous(tau + xi * xi.abs(), 2.0 * b) * homogeneous(xi, 2.0 * s)
    })
}

fn z_norm(spec: &SpaceTimeSpectrum, b: f64, s: f64) -> f64 {
    let m = spec.grid().n_modes();
    let tau_w = spec.cell_weight() / spec.grid().xi_weight();
    let mut sum = 0.0;
    for k in 0..m {
        let col: f64 = (0..spec.n_tau())
            .map(|i| {
                let w = spec.symmetric_weight(i, k, &|tau, xi| bracket(tau + xi * xi.abs()).powf(b));
                w * spec.at(i, k).norm()
            })
            .sum();
        sum += bracket(spec.grid().xi(k)).powf(2.0 * s) * (tau_w * col).powi(2);
    }
    (spec.grid().xi_weight() * sum).sqrt()
}

fn a_norm(spec: &SpaceTimeSpectrum, b: f64) -> f64 {
    let m = spec.grid().n_modes();
    let mut sum = 0.0;
    for i in 0..spec.n_tau() {
        for k in 0..m {
            let w = spec.symmetric_weight(i, k, &|tau, xi| bracket(tau + xi * xi.abs()).powf(b));
            sum += w * spec.at(i, k).norm();
        }
    }
    spec.cell_weight() * sum
}

fn l4_tilde_norm(spec: &SpaceTimeSpectrum) -> f64 {
    let top = max_block(spec.grid().max_xi());
    (0..=top)
        .map(|j| spec.lp_block(j).l4_norm().powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Index of the highest Littlewood–Paley block that can hold `|ξ| ≤ xi_max`.
pub fn max_block(xi_max: f64) -> u32 {
    let mut j = 0;
    while 2f64.powi(j as i32 + 1) < xi_max {
        j += 1;
    }
    j
}

/// Whether `ξ` belongs to the sharp block `Δⱼ`.
pub fn in_block(xi: f64, j: u32) -> bool {
    let a = xi.abs();
    let upper = 2f64.powi(j as i32 + 1);
    if j == 0 {
        a <= upper
    } else {
        a > upper / 2.0 && a <= upper
    }
}

/// Sharp Littlewood–Paley projection.
pub trait LpBlock: Sized {
    fn lp_block(&self, j: u32) -> Self;
}

impl LpBlock for SpectralField {
    fn lp_block(&self, j: u32) -> Self {
        self.multiply(|xi| {
            if in_block(xi, j) {
                num_complex::Complex64::new(1.0, 0.0)
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            }
        })
    }
}

impl LpBlock for SpaceTimeSpectrum {
    fn lp_block(&self, j: u32) -> Self {
        self.restrict(|xi| in_block(xi, j))
    }
}

pub fn lp_block<T: LpBlock>(g: &T, j: u32) -> T {
    g.lp_block(j)
}

/// Values of all families at one `(b, s)`, tagged as windowed surrogates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub b: f64,
    pub s: f64,
    pub taper: TaperSpec,
    pub t_window: [f64; 2],
    pub values: BTreeMap<String, f64>,
    pub note: String,
}

/// Note attached to every report.
pub const SURROGATE_NOTE: &str = "windowed surrogate: norms of the tapered field on the sampled \
     window, an upper bound for the restriction norm up to the taper; sharp Littlewood-Paley blocks";

impl NormReport {
    /// `X^{b,s}`, `Ẋ^{b,s}`, `Z^{b,s}`, `A^b`, `Y^s`, `L⁴`, `L̃⁴`, `N`, `M^s`.
    pub fn compute(spec: &SpaceTimeSpectrum, b: f64, s: f64) -> Result<Self> {
        let mut values = BTreeMap::new();
        for family in NormFamily::ALL {
            let v = bourgain_norm(
                spec,
                family,
                family.uses_b().then_some(b),
                family.uses_s().then_some(s),
            )?;
            values.insert(family.name().to_string(), v);
        }
        let t0 = spec.t0();
        Ok(NormReport {
            b,
            s,
            taper: spec.taper(),
            t_window: [t0, t0 + (spec.n_t() - 1) as f64 * spec.dt()],
            values,
            note: SURROGATE_NOTE.to_string(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }
}
