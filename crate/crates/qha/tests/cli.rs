//! End-to-end behaviour of the `qha` binary: exit codes, diagnostics,
//! deterministic output and the per-object commands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use qha::formats::{parse_operator, write_operator, write_phase_function, write_signal};
use qha_core::{GroupParams, OperatorMatrix, PhaseFunction, Signal};
use serde_json::Value;
use tempfile::TempDir;

fn qha(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qha"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn even_modulus_in_the_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(&dir, "suite.cfg", "seed = 1\nN_list = 3, 4\n");
    let out = qha(dir.path(), &["verify", "--config", p(&config)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("config line 2"), "{err}");
    assert!(err.contains("N = 4 is not supported"), "{err}");
}

#[test]
fn verify_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(&dir, "suite.cfg", "N_list = 3, 5\nensemble_size = 3\nseed = 9\n");
    let run = |out: &str| qha(dir.path(), &["verify", "--config", p(&config), "--json", "--out", out]);
    let (a, b) = (run("a"), run("b"));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let file_a = std::fs::read(dir.path().join("a/verify.json")).unwrap();
    assert_eq!(file_a, std::fs::read(dir.path().join("b/verify.json")).unwrap());
    let report = json(&a);
    assert_eq!(report["seed"], 9);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "moyal/N=5"));
    assert!(checks.iter().all(|c| c["status"] != "fail"));

    let other = qha(dir.path(), &["verify", "--config", p(&config), "--json", "--seed", "10", "--out", "c"]);
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn table_output_summarizes_the_thresholded_checks() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(&dir, "suite.cfg", "N_list = 3\nensemble_size = 2\n");
    let out = qha(dir.path(), &["verify", "--config", p(&config), "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    let table = stdout(&out);
    assert!(table.lines().next().unwrap().starts_with("check"));
    assert!(table.contains("thresholded checks passed"));
}

#[test]
fn empty_symbol_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = GroupParams::new(3).unwrap();
    let symbol = write(&dir, "empty.fun", "");
    let phi = write(&dir, "phi.sig", &write_signal(&Signal::basis(g, 0)));
    let out = qha(dir.path(), &["localize", "--symbol", p(&symbol), "--windows", p(&phi), p(&phi)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));
}

#[test]
fn basis_windows_have_a_thin_ambiguity_support() {
    let dir = tempfile::tempdir().unwrap();
    let g = GroupParams::new(5).unwrap();
    let e0 = write(&dir, "e0.sig", &write_signal(&Signal::basis(g, 0)));
    let out = qha(dir.path(), &["regularity", "--windows", p(&e0), p(&e0), "--json", "--out", "r"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["zero_set"].as_array().unwrap().len(), 20);
    assert_eq!(report["translate_rank"], 5);
    assert_eq!(report["regular"], false);
    assert_eq!(report["ambiguity_zero_sets_agree"], true);
    let heatmap = std::fs::read_to_string(dir.path().join("r/ambiguity_heatmap.csv")).unwrap();
    assert!(heatmap.starts_with("x,omega,value\n"));
    assert_eq!(heatmap.lines().count(), 26);
}

#[test]
fn random_windows_are_regular() {
    let dir = tempfile::tempdir().unwrap();
    let out = qha(dir.path(), &["regularity", "--random-windows", "7", "--seed", "1", "--json", "--out", "r"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["regular"], true);
    assert_eq!(report["translate_rank"], 49);
    assert_eq!(report["zero_set"].as_array().unwrap().len(), 0);

    let even = qha(dir.path(), &["regularity", "--random-windows", "6"]);
    assert_eq!(even.status.code(), Some(2));
}

#[test]
fn zero_operator_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(&dir, "zero.mat", &write_operator(&OperatorMatrix::zeros(GroupParams::new(5).unwrap())));
    let out = qha(dir.path(), &["regularity", "--operator", p(&zero), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["degenerate"], true);
    assert_eq!(report["translate_rank"], 0);
}

#[test]
fn constant_symbol_localizes_to_the_window_inner_product() {
    let dir = tempfile::tempdir().unwrap();
    let g = GroupParams::new(5).unwrap();
    let phi1 = Signal::from_fn(g, |t| Complex64::new(1.0, t as f64));
    let phi2 = Signal::from_fn(g, |t| Complex64::new(0.5 - t as f64, 0.25));
    let symbol = write(&dir, "one.fun", &write_phase_function(&PhaseFunction::constant(g, Complex64::new(1.0, 0.0))));
    let w1 = write(&dir, "phi1.sig", &write_signal(&phi1));
    let w2 = write(&dir, "phi2.sig", &write_signal(&phi2));
    let out = qha(
        dir.path(),
        &["localize", "--symbol", p(&symbol), "--windows", p(&w1), p(&w2), "--json", "--out", "loc"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let a = parse_operator(&std::fs::read_to_string(dir.path().join("loc/localization.mat")).unwrap()).unwrap();
    let expect = OperatorMatrix::identity(g).scale(phi2.inner(&phi1).unwrap());
    assert!(a.max_abs_diff(&expect).unwrap() < 1e-12 * expect.max_abs());
    let report = json(&out);
    assert_eq!(report["schatten"]["norms"].as_array().unwrap().len(), 3);
    assert!(dir.path().join("loc/localization_schatten.json").exists());
}

#[test]
fn spectrum_and_berezin_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = GroupParams::new(3).unwrap();
    let id = write(&dir, "id.mat", &write_operator(&OperatorMatrix::identity(g)));
    let out = qha(dir.path(), &["spectrum", "--operator", p(&id), "--json", "--out", "s"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["zero_set"].as_array().unwrap().len(), 8);
    assert!(dir.path().join("s/fourier_wigner.fun").exists());
    assert!(dir.path().join("s/fourier_wigner_heatmap.csv").exists());

    let e = write(&dir, "e.sig", &write_signal(&Signal::basis(g, 1)));
    let out = qha(dir.path(), &["berezin", "--operator", p(&id), "--windows", p(&e), p(&e), "--p", "2", "--out", "b"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.path().join("b/berezin.fun").exists());
}

#[test]
fn missing_input_files_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = qha(dir.path(), &["spectrum", "--operator", "nope.mat"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nope.mat"));
}
