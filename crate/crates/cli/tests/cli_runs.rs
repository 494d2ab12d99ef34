use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qentangle");

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("QENTANGLE_OUT_DIR", dir).output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn csv_column(text: &str, column: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == column).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_owned()).collect()
}

#[test]
fn identical_configs_give_identical_files() {
    let cases: &[&[&str]] = &[
        &["measure", "--state", "random", "--n", "4", "--region", "0,1", "--seed", "3"],
        &["scan-area", "--model", "ising", "--n", "6", "--t", "0.8", "--bound-check"],
        &["scan-transition", "--n", "6", "--grid", "0.5..1.5:3", "--quantity", "pair"],
        &["chsh", "--rounds", "5000", "--seed", "11", "--format", "json"],
        &["distill", "--theta", "0.3", "--mode", "sampled", "--seed", "2"],
        &["mps-solve", "--n", "6", "--bond-dim", "4", "--seed", "5"],
        &["swap-purity", "--state", "random", "--region", "0", "--shots", "500", "--seed", "9"],
    ];
    for args in cases {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        assert!(run_in(a.path(), args).status.success(), "{args:?}");
        assert!(run_in(b.path(), args).status.success(), "{args:?}");
        let ext = if args.contains(&"json") { "json" } else { "csv" };
        let name = format!("{}.{ext}", args[0]);
        assert_eq!(read(a.path(), &name), read(b.path(), &name), "{args:?}");
        let manifest = format!("{name}.manifest.json");
        assert_eq!(read(a.path(), &manifest), read(b.path(), &manifest), "{args:?}");
    }
}

#[test]
fn manifest_echoes_resolved_defaults_and_version() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["chsh"]).status.success());
    let m: serde_json::Value = serde_json::from_str(&read(dir.path(), "chsh.csv.manifest.json")).unwrap();
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["config"]["seed"], 0);
    assert_eq!(m["config"]["format"], "csv");
    assert_eq!(m["config"]["strategy"], "quantum");
    assert_eq!(m["status"], "ok");
}

#[test]
fn quantum_chsh_wins_near_cos_squared() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["chsh", "--strategy", "quantum", "--rounds", "100000", "--seed", "7", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "chsh.json")).unwrap();
    let p = v[0]["win_probability"].as_f64().unwrap();
    assert!((p - 0.8536).abs() < 0.005, "{p}");
}

#[test]
fn dimer_block_entropies_stay_below_two() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["scan-area", "--model", "mg", "--n", "12", "--blocks", "1..6"]).status.success());
    let values = csv_column(&read(dir.path(), "scan-area.csv"), "value");
    assert_eq!(values.len(), 6);
    assert!(values.iter().all(|v| v.parse::<f64>().unwrap() <= 2.0 + 1e-12));
}

#[test]
fn thermal_bound_check_passes_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["scan-area", "--model", "ising", "--b", "1.0", "--t", "1.0", "--bound-check"]).status.success());
    let pass = csv_column(&read(dir.path(), "scan-area.csv"), "pass");
    assert!(!pass.is_empty());
    assert!(pass.iter().all(|p| p == "true"));
}

#[test]
fn csv_numbers_reparse_exactly() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["scan-transition", "--n", "6", "--grid", "0.2..1.8:5"]).status.success());
    for cell in csv_column(&read(dir.path(), "scan-transition.csv"), "fidelity").iter().filter(|c| !c.is_empty()) {
        let x: f64 = cell.parse().unwrap();
        assert_eq!(&format!("{x:.14e}"), cell);
    }
}

#[test]
fn negative_temperature_is_a_config_error_naming_t() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["scan-area", "--t", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("`t`") && err.contains("T > 0"), "{err}");
}

#[test]
fn unknown_keys_are_rejected_from_flags_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["chsh", "--colour", "red"]);
    assert_eq!(out.status.code(), Some(2));
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "rounds = 10\ncolour = red\n").unwrap();
    let out = run_in(dir.path(), &["chsh", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("`colour`"));
}

#[test]
fn file_values_yield_to_flags_and_duplicates_warn() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "rounds = 100\nseed = 1\nseed = 2\n").unwrap();
    let out = run_in(dir.path(), &["chsh", "--config", cfg.to_str().unwrap(), "--rounds", "200"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("warning: key `seed`"));
    let m: serde_json::Value = serde_json::from_str(&read(dir.path(), "chsh.csv.manifest.json")).unwrap();
    assert_eq!(m["config"]["seed"], 2);
    assert_eq!(m["config"]["rounds"], 200);
}

#[test]
fn oversized_state_is_a_capacity_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["measure", "--state", "ghz", "--n", "30"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn explicit_out_path_wins_over_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nested").join("game.csv");
    let out = run_in(dir.path(), &["chsh", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(target.exists());
    assert!(dir.path().join("nested").join("game.csv.manifest.json").exists());
    assert!(!dir.path().join("chsh.csv").exists());
}
