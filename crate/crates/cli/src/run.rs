//! Execution of one experiment and emission of its artifacts.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use bo_core::evolution::{
    evolve, monitor_series, reconstruct, reduce_mean, residual_bo, SolverConfig, Trajectory,
};
use bo_core::gauge::{check_highmode_inversion, check_inversion, check_negative_mode_identity, residual_series};
use bo_core::io;
use bo_core::norms::{
    bourgain_norm, lp_block, max_block, st_transform, strichartz_ratio, NormFamily, NormReport,
};
use bo_core::picard::{fitted_order, illposed_sweep, picard_iterates};
use bo_core::{Grid, RealField};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{
    EvolveParams, ExperimentConfig, IllposedParams, NormsParams, Params, PicardParams, StrichartzParams,
};
use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Files written by a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub outputs: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Versions {
    #[serde(rename = "bo-cli")]
    cli: &'static str,
    #[serde(rename = "bo-core")]
    core: &'static str,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    config_path: String,
    config_sha256: String,
    seed: u64,
    versions: Versions,
    wall_time_s: f64,
    status: &'static str,
    exit_code: i32,
    error: Option<String>,
    outputs: &'a [String],
}

struct Emitter {
    dir: PathBuf,
    outputs: Vec<String>,
}

impl Emitter {
    fn emit(
        &mut self,
        name: &str,
        write: impl FnOnce(&mut BufWriter<File>) -> bo_core::Result<()>,
    ) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut w = BufWriter::new(file);
        write(&mut w)?;
        w.flush().map_err(|e| CliError::io(&path, e))?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn emit_text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        self.emit(name, |w| Ok(w.write_all(text.as_bytes())?))
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn to_json(value: &impl Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Core(bo_core::Error::Format(e.to_string())))
}

/// Reads, validates and executes the configuration at `config_path`.
///
/// Once the output directory exists a manifest is written whatever the
/// outcome; configuration errors found before that point leave no files.
pub fn run(config_path: &Path) -> Result<RunOutcome, CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let cfg = ExperimentConfig::parse(&text)?;
    let dir = cfg.resolved_output_dir();
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;

    let start = Instant::now();
    let mut em = Emitter {
        dir: dir.clone(),
        outputs: Vec::new(),
    };
    let result = execute(&cfg, &mut em);
    let manifest = Manifest {
        experiment: cfg.kind.name(),
        config_path: config_path.display().to_string(),
        config_sha256: sha256_hex(text.as_bytes()),
        seed: cfg.seed,
        versions: Versions {
            cli: env!("CARGO_PKG_VERSION"),
            core: bo_core::VERSION,
        },
        wall_time_s: start.elapsed().as_secs_f64(),
        status: if result.is_ok() { "ok" } else { "failed" },
        exit_code: result.as_ref().map_or_else(|e| e.exit_code(), |_| 0),
        error: result.as_ref().err().map(|e| e.to_string()),
        outputs: &em.outputs,
    };
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, to_json(&manifest)? + "\n").map_err(|e| CliError::io(&path, e))?;
    result?;
    Ok(RunOutcome {
        output_dir: dir,
        outputs: em.outputs,
    })
}

fn execute(cfg: &ExperimentConfig, em: &mut Emitter) -> Result<(), CliError> {
    match &cfg.params {
        Params::Evolve(p) => run_evolve(cfg.grid.expect("validated"), &cfg.solver, p, em),
        Params::GaugeCheck(p) => run_gauge(cfg.grid.expect("validated"), &cfg.solver, p, em),
        Params::Norms(p) => run_norms(cfg.grid.expect("validated"), &cfg.solver, p, em),
        Params::Strichartz(p) => run_strichartz(cfg.seed, p, em),
        Params::Picard(p) => run_picard(cfg.grid.expect("validated"), &cfg.solver, p, em),
        Params::Illposed(p) => run_illposed(p, em),
    }
}

/// Solves from data with any mean by evolving the mean-zero part and shifting back.
fn solve(u0: &RealField, t_final: f64, solver: &SolverConfig) -> Result<Trajectory, CliError> {
    let (v0, m) = reduce_mean(u0);
    let v = evolve(&v0, t_final, solver)?;
    Ok(reconstruct(&v, m)?)
}

fn every_nth(traj: &Trajectory, n: usize) -> Result<Trajectory, CliError> {
    if n == 1 {
        return Ok(traj.clone());
    }
    let states = traj.states().iter().step_by(n).cloned().collect();
    Ok(Trajectory::new(*traj.grid(), traj.t0(), traj.dt() * n as f64, states)?)
}

fn run_evolve(grid: Grid, solver: &SolverConfig, p: &EvolveParams, em: &mut Emitter) -> Result<(), CliError> {
    let u = solve(&p.u0.sample(grid)?, p.t_final, solver)?;
    let saved = every_nth(&u, p.save_every)?;
    em.emit("trajectory.csv", |w| io::write_trajectory_csv(w, &saved))?;
    em.emit("monitors.csv", |w| io::write_monitor_csv(w, &monitor_series(&u)))?;
    em.emit("final_state.bin", |w| io::write_spectral_field(w, u.last()))
}

fn run_gauge(grid: Grid, solver: &SolverConfig, p: &EvolveParams, em: &mut Emitter) -> Result<(), CliError> {
    let u = evolve(&p.u0.sample(grid)?, p.t_final, solver)?;
    let rows = residual_series(&u)?;
    let bo = residual_bo(&u)?;
    let saved = every_nth(&u, p.save_every)?;
    let mut identities = Vec::with_capacity(saved.len());
    for (i, s) in saved.physical().iter().enumerate() {
        identities.push(vec![
            saved.time(i),
            bo[i * p.save_every],
            check_inversion(s)?,
            check_negative_mode_identity(s)?,
            check_highmode_inversion(s)?,
        ]);
    }
    em.emit("gauge_residuals.csv", |w| io::write_gauge_residual_csv(w, &rows))?;
    em.emit("identities.csv", |w| {
        io::write_table_csv(
            w,
            &["t", "residual_bo", "inversion", "negative_modes", "high_modes"],
            &identities,
        )
    })
}

fn run_norms(grid: Grid, solver: &SolverConfig, p: &NormsParams, em: &mut Emitter) -> Result<(), CliError> {
    let u = solve(&p.u0.sample(grid)?, p.t_final, solver)?;
    let spec = st_transform(&u, p.taper)?;
    let report = NormReport::compute(&spec, p.b, p.s)?;
    let mut csv = String::from("family,value\n");
    for family in NormFamily::ALL {
        csv.push_str(&format!("{},{}\n", family.name(), io::fmt_f64(report.values[family.name()])));
    }
    let blocks = (0..=max_block(grid.max_xi()))
        .map(|j| {
            let x = bourgain_norm(&lp_block(&spec, j), NormFamily::X, Some(p.b), Some(p.s))?;
            Ok(format!("{j},{}\n", io::fmt_f64(x)))
        })
        .collect::<bo_core::Result<String>>()?;
    em.emit_text("norms.csv", &csv)?;
    em.emit_text("lp_blocks.csv", &format!("j,X\n{blocks}"))?;
    em.emit_text("norms.json", &(report.to_json()? + "\n"))
}

fn run_strichartz(seed: u64, p: &StrichartzParams, em: &mut Emitter) -> Result<(), CliError> {
    let summary = strichartz_ratio(&p.spec, p.samples, seed)?;
    em.emit("ratios.csv", |w| io::write_ratio_csv(w, &summary.ratios))?;
    em.emit_text("summary.json", &(to_json(&summary)? + "\n"))
}

fn run_picard(grid: Grid, solver: &SolverConfig, p: &PicardParams, em: &mut Emitter) -> Result<(), CliError> {
    let phi = p.phi.sample(grid)?;
    let table = picard_iterates(&phi, p.k_max, p.t_final, solver)?;
    let mut csv = String::from("K,eps,t,error\n");
    let mut max_err = vec![Vec::with_capacity(p.eps.len()); p.k_max];
    for &eps in &p.eps {
        let u = evolve(&phi.scale(eps), p.t_final, solver)?;
        for k in 1..=p.k_max {
            let series = table.partial_sum(eps, k)?;
            let mut worst = 0.0f64;
            for (i, (a, b)) in u.states().iter().zip(series.states()).enumerate() {
                let err = a.sub(b)?.sobolev_norm(p.s);
                worst = worst.max(err);
                csv.push_str(&format!("{k},{},{},{}\n", io::fmt_f64(eps), io::fmt_f64(u.time(i)), io::fmt_f64(err)));
            }
            max_err[k - 1].push(worst);
        }
    }
    em.emit_text("series.csv", &csv)?;
    if p.eps.len() >= 2 {
        let mut orders = String::from("K,order\n");
        for (k, errs) in max_err.iter().enumerate() {
            orders.push_str(&format!("{},{}\n", k + 1, io::fmt_f64(fitted_order(&p.eps, errs))));
        }
        em.emit_text("orders.csv", &orders)?;
    }
    Ok(())
}

fn run_illposed(p: &IllposedParams, em: &mut Emitter) -> Result<(), CliError> {
    let rows = illposed_sweep(p.s, p.t, &p.n_list, p.policy, &p.eps)?;
    em.emit("illposed.csv", |w| io::write_sweep_csv(w, &rows))
}
