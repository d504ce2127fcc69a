use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bo(args: &[&str], root: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bo"))
        .args(args)
        .env("BO_OUTPUT_ROOT", root)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

const EVOLVE: &str = r#"
experiment = "evolve"
output_dir = "ev"
[grid]
M = 32
[solver]
dt = 0.01
[evolve]
u0 = "0.1*cos(x) + 0.2"
T = 0.2
save_every = 5
"#;

#[test]
fn evolve_writes_trajectory_monitors_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "ev.toml", EVOLVE);
    let out = bo(&["run", &cfg], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("ev");
    let traj = fs::read_to_string(dir.join("trajectory.csv")).unwrap();
    assert_eq!(traj.lines().next(), Some("t,x,u"));
    assert_eq!(traj.lines().count(), 1 + 5 * 32);
    let mon = fs::read_to_string(dir.join("monitors.csv")).unwrap();
    assert_eq!(mon.lines().count(), 1 + 21);
    assert!(dir.join("final_state.bin").exists());
    let m = manifest(&dir);
    assert_eq!(m["status"], "ok");
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["experiment"], "evolve");
    assert_eq!(m["config_sha256"].as_str().unwrap().len(), 64);
    assert!(m["outputs"].as_array().unwrap().len() >= 3);
}

#[test]
fn illposed_sweep_has_one_row_per_wavenumber() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "ill.toml",
        "experiment = \"illposed\"\noutput_dir = \"ill\"\n[illposed]\ns = -0.5\nt = 0.5\nN_list = [8, 16, 32]\n",
    );
    let out = bo(&["run", &cfg], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(tmp.path().join("ill/illposed.csv")).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "N,norm_psi,norm_A3,ratio,eps_N");
    assert_eq!(lines.len(), 4);
    for (line, n) in lines[1..].iter().zip(["8", "16", "32"]) {
        assert!(line.starts_with(&format!("{n},")));
    }
}

#[test]
fn malformed_key_exits_with_code_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", &EVOLVE.replace("save_every", "save_evry"));
    let out = bo(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("save_evry"));

    let cfg = write_config(tmp.path(), "foreign.toml", &format!("{EVOLVE}[picard]\nK = 2\n"));
    let out = bo(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[picard]"));

    let out = bo(&["run", "/nonexistent/config.toml"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn blowup_exits_with_code_three_and_keeps_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let text = EVOLVE.replace("dt = 0.01", "dt = 0.01\nblowup_threshold = 0.05");
    let cfg = write_config(tmp.path(), "blow.toml", &text);
    let out = bo(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(3));
    let m = manifest(&tmp.path().join("ev"));
    assert_eq!(m["status"], "failed");
    assert_eq!(m["exit_code"], 3);
    assert!(!m["error"].as_str().unwrap().is_empty());
}

#[test]
fn describe_documents_kinds() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bo(&["describe", "evolve"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[evolve]") && text.contains("monitors.csv"));
    let out = bo(&["describe", "illposed"], tmp.path());
    assert!(String::from_utf8_lossy(&out.stdout).contains("illposed.csv"));
    assert_eq!(bo(&["describe", "bogus"], tmp.path()).status.code(), Some(2));
}

#[test]
fn absolute_output_dir_ignores_root() {
    let tmp = tempfile::tempdir().unwrap();
    let target = tmp.path().join("abs");
    let text = EVOLVE.replace("output_dir = \"ev\"", &format!("output_dir = {:?}", target.to_string_lossy()));
    let cfg = write_config(tmp.path(), "abs.toml", &text);
    let elsewhere = tempfile::tempdir().unwrap();
    assert!(bo(&["run", &cfg], elsewhere.path()).status.success());
    assert!(target.join("manifest.json").exists());
    assert!(fs::read_dir(elsewhere.path()).unwrap().next().is_none());
}
