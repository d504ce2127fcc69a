//! Experiment configuration files (TOML).
//!
//! Top-level keys are `experiment`, `seed` and `output_dir`. Each experiment
//! reads its own section, plus `[grid]` and `[solver]` where they apply. An
//! unknown key, or a section the experiment does not read, is an error.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bo_core::evolution::SolverConfig;
use bo_core::norms::{RandomFieldSpec, TaperSpec, PARAM_RANGE};
use bo_core::picard::{EpsParams, GridPolicy, MAX_ITERATE_ORDER};
use bo_core::Grid;
use serde::Deserialize;

use crate::error::CliError;
use crate::trig::{self, TrigSum};

/// Environment variable that overrides the directory relative output paths
/// are resolved against.
pub const OUTPUT_ROOT_ENV: &str = "BO_OUTPUT_ROOT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Evolve,
    GaugeCheck,
    Norms,
    Strichartz,
    Picard,
    Illposed,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Evolve,
        ExperimentKind::GaugeCheck,
        ExperimentKind::Norms,
        ExperimentKind::Strichartz,
        ExperimentKind::Picard,
        ExperimentKind::Illposed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Evolve => "evolve",
            ExperimentKind::GaugeCheck => "gauge-check",
            ExperimentKind::Norms => "norms",
            ExperimentKind::Strichartz => "strichartz",
            ExperimentKind::Picard => "picard",
            ExperimentKind::Illposed => "illposed",
        }
    }

    /// Name of the experiment's own section.
    pub fn section(self) -> &'static str {
        match self {
            ExperimentKind::GaugeCheck => "gauge",
            k => k.name(),
        }
    }

    fn uses_grid(self) -> bool {
        self != ExperimentKind::Illposed
    }

    fn uses_solver(self) -> bool {
        !matches!(self, ExperimentKind::Illposed | ExperimentKind::Strichartz)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                CliError::Config(format!("unknown experiment '{s}', expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: ExperimentKind,
    #[serde(default)]
    seed: u64,
    output_dir: Option<PathBuf>,
    grid: Option<GridSection>,
    solver: Option<SolverSection>,
    evolve: Option<EvolveSection>,
    gauge: Option<EvolveSection>,
    norms: Option<NormsSection>,
    strichartz: Option<StrichartzSection>,
    picard: Option<PicardSection>,
    illposed: Option<IllposedSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    #[serde(default = "one")]
    lambda: f64,
    #[serde(rename = "M")]
    n_modes: usize,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverSection {
    dt: Option<f64>,
    dealias_fraction: Option<f64>,
    quadrature_order: Option<usize>,
    blowup_threshold: Option<f64>,
    max_phase_step: Option<f64>,
}

/// `[evolve]` and `[gauge]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvolveSection {
    u0: String,
    #[serde(rename = "T")]
    t_final: f64,
    #[serde(default = "one_usize")]
    save_every: usize,
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NormsSection {
    u0: String,
    #[serde(rename = "T")]
    t_final: f64,
    b: f64,
    s: f64,
    #[serde(default)]
    taper: TaperSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrichartzSection {
    n_t: usize,
    samples: usize,
    #[serde(default = "one", rename = "T")]
    t_window: f64,
    band: Option<usize>,
    #[serde(default = "two")]
    modulation: usize,
    #[serde(default)]
    taper: TaperSpec,
}

fn two() -> usize {
    2
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PicardSection {
    phi: String,
    #[serde(rename = "K")]
    k_max: usize,
    #[serde(rename = "T")]
    t_final: f64,
    #[serde(default)]
    s: f64,
    eps: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IllposedSection {
    s: f64,
    t: f64,
    #[serde(rename = "N_list")]
    n_list: Vec<u32>,
    grid_factor: Option<usize>,
    grid_modes: Option<usize>,
    eps0: Option<f64>,
    c_k: Option<f64>,
    c: Option<f64>,
    k: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveParams {
    pub u0: TrigSum,
    pub t_final: f64,
    pub save_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormsParams {
    pub u0: TrigSum,
    pub t_final: f64,
    pub b: f64,
    pub s: f64,
    pub taper: TaperSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrichartzParams {
    pub spec: RandomFieldSpec,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardParams {
    pub phi: TrigSum,
    pub k_max: usize,
    pub t_final: f64,
    pub s: f64,
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IllposedParams {
    pub s: f64,
    pub t: f64,
    pub n_list: Vec<u32>,
    pub policy: GridPolicy,
    pub eps: EpsParams,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Evolve(EvolveParams),
    GaugeCheck(EvolveParams),
    Norms(NormsParams),
    Strichartz(StrichartzParams),
    Picard(PicardParams),
    Illposed(IllposedParams),
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    /// As written in the file (or the default `bo-output/<kind>`).
    pub output_dir: PathBuf,
    pub grid: Option<Grid>,
    pub solver: SolverConfig,
    pub params: Params,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn need<T>(section: Option<T>, name: &str, kind: ExperimentKind) -> Result<T, CliError> {
    section.ok_or_else(|| bad(format!("experiment '{kind}' needs a [{name}] section")))
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("{key} must be a positive number, got {v}")))
    }
}

fn in_param_range(key: &str, v: f64) -> Result<f64, CliError> {
    let (lo, hi) = PARAM_RANGE;
    if (lo..=hi).contains(&v) {
        Ok(v)
    } else {
        Err(bad(format!("{key} = {v} outside [{lo}, {hi}]")))
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        let kind = raw.experiment;

        let present = [
            ("evolve", raw.evolve.is_some()),
            ("gauge", raw.gauge.is_some()),
            ("norms", raw.norms.is_some()),
            ("strichartz", raw.strichartz.is_some()),
            ("picard", raw.picard.is_some()),
            ("illposed", raw.illposed.is_some()),
            ("grid", raw.grid.is_some() && !kind.uses_grid()),
            ("solver", raw.solver.is_some() && !kind.uses_solver()),
        ];
        for (name, is_set) in present {
            if is_set && name != kind.section() {
                return Err(bad(format!("section [{name}] is not used by experiment '{kind}'")));
            }
        }

        let grid = if kind.uses_grid() {
            let g = need(raw.grid, "grid", kind)?;
            Some(Grid::new(g.lambda, g.n_modes).map_err(|e| bad(format!("[grid]: {e}")))?)
        } else {
            None
        };

        let s = raw.solver.unwrap_or_default();
        let d = SolverConfig::default();
        let solver = SolverConfig {
            dt: s.dt.unwrap_or(d.dt),
            dealias_fraction: s.dealias_fraction.unwrap_or(d.dealias_fraction),
            quadrature_order: s.quadrature_order.unwrap_or(d.quadrature_order),
            blowup_threshold: s.blowup_threshold.unwrap_or(d.blowup_threshold),
            max_phase_step: s.max_phase_step.unwrap_or(d.max_phase_step),
        };
        solver.validate().map_err(|e| bad(format!("[solver]: {e}")))?;

        let params = match kind {
            ExperimentKind::Evolve => Params::Evolve(evolve_params(need(raw.evolve, "evolve", kind)?, grid)?),
            ExperimentKind::GaugeCheck => {
                let p = evolve_params(need(raw.gauge, "gauge", kind)?, grid)?;
                if has_mean(&p.u0) {
                    return Err(bad("gauge.u0 must have zero mean (no constant term)"));
                }
                Params::GaugeCheck(p)
            }
            ExperimentKind::Norms => {
                let n = need(raw.norms, "norms", kind)?;
                let u0 = trig::parse(&n.u0)?;
                u0.sample(grid.expect("grid present"))?;
                Params::Norms(NormsParams {
                    u0,
                    t_final: positive("norms.T", n.t_final)?,
                    b: in_param_range("norms.b", n.b)?,
                    s: in_param_range("norms.s", n.s)?,
                    taper: n.taper,
                })
            }
            ExperimentKind::Strichartz => {
                let st = need(raw.strichartz, "strichartz", kind)?;
                let g = grid.expect("grid present");
                if st.samples == 0 {
                    return Err(bad("strichartz.samples must be >= 1"));
                }
                let spec = RandomFieldSpec {
                    lambda: g.lambda(),
                    n_modes: g.n_modes(),
                    n_t: st.n_t,
                    t_window: positive("strichartz.T", st.t_window)?,
                    band: st.band,
                    modulation: st.modulation,
                    taper: st.taper,
                };
                if st.n_t < bo_core::norms::MIN_TIME_SAMPLES {
                    return Err(bad(format!(
                        "strichartz.n_t must be >= {}, got {}",
                        bo_core::norms::MIN_TIME_SAMPLES,
                        st.n_t
                    )));
                }
                let band = spec.effective_band();
                if band == 0 || band >= g.n_modes() / 2 {
                    return Err(bad(format!("strichartz.band = {band} not in 1..{}", g.n_modes() / 2)));
                }
                Params::Strichartz(StrichartzParams {
                    spec,
                    samples: st.samples,
                })
            }
            ExperimentKind::Picard => {
                let p = need(raw.picard, "picard", kind)?;
                let phi = trig::parse(&p.phi)?;
                phi.sample(grid.expect("grid present"))?;
                if has_mean(&phi) {
                    return Err(bad("picard.phi must have zero mean (no constant term)"));
                }
                if p.k_max == 0 || p.k_max > MAX_ITERATE_ORDER {
                    return Err(bad(format!("picard.K must lie in 1..={MAX_ITERATE_ORDER}, got {}", p.k_max)));
                }
                if p.eps.is_empty() {
                    return Err(bad("picard.eps must not be empty"));
                }
                for e in &p.eps {
                    positive("picard.eps", *e)?;
                }
                Params::Picard(PicardParams {
                    phi,
                    k_max: p.k_max,
                    t_final: positive("picard.T", p.t_final)?,
                    s: in_param_range("picard.s", p.s)?,
                    eps: p.eps,
                })
            }
            ExperimentKind::Illposed => {
                let p = need(raw.illposed, "illposed", kind)?;
                if !(p.s < 0.0 && p.s >= PARAM_RANGE.0) {
                    return Err(bad(format!("illposed.s must lie in [{}, 0), got {}", PARAM_RANGE.0, p.s)));
                }
                if p.n_list.is_empty() || p.n_list.contains(&0) {
                    return Err(bad("illposed.N_list must be a non-empty list of positive integers"));
                }
                let policy = match (p.grid_factor, p.grid_modes) {
                    (Some(_), Some(_)) => {
                        return Err(bad("illposed: set at most one of grid_factor and grid_modes"))
                    }
                    (Some(factor), None) => GridPolicy::Scaled { factor },
                    (None, Some(n_modes)) => GridPolicy::Fixed { n_modes },
                    (None, None) => GridPolicy::default(),
                };
                let n_max = *p.n_list.iter().max().expect("non-empty");
                policy.grid_for(n_max).map_err(|e| bad(format!("illposed: {e}")))?;
                let d = EpsParams::default();
                let eps = EpsParams {
                    eps0: positive("illposed.eps0", p.eps0.unwrap_or(d.eps0))?,
                    c_k: positive("illposed.c_k", p.c_k.unwrap_or(d.c_k))?,
                    c: positive("illposed.c", p.c.unwrap_or(d.c))?,
                    k: p.k.unwrap_or(d.k).max(1),
                };
                Params::Illposed(IllposedParams {
                    s: p.s,
                    t: positive("illposed.t", p.t)?,
                    n_list: p.n_list,
                    policy,
                    eps,
                })
            }
        };

        Ok(ExperimentConfig {
            kind,
            seed: raw.seed,
            output_dir: raw
                .output_dir
                .unwrap_or_else(|| PathBuf::from("bo-output").join(kind.name())),
            grid,
            solver,
            params,
        })
    }

    /// Output directory after applying the root override.
    pub fn resolved_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_ROOT_ENV) {
            Some(root) if !root.is_empty() => Path::new(&root).join(&self.output_dir),
            _ => self.output_dir.clone(),
        }
    }
}

fn has_mean(f: &TrigSum) -> bool {
    f.terms.iter().any(|t| t.wave == trig::Wave::Const && t.amplitude != 0.0)
}

fn evolve_params(e: EvolveSection, grid: Option<Grid>) -> Result<EvolveParams, CliError> {
    let u0 = trig::parse(&e.u0)?;
    u0.sample(grid.expect("grid present"))?;
    if e.save_every == 0 {
        return Err(bad("save_every must be >= 1"));
    }
    Ok(EvolveParams {
        u0,
        t_final: positive("T", e.t_final)?,
        save_every: e.save_every,
    })
}
