use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use su_interferometry::analysis::{exponent_estimate, g_factor_su11, g_factor_su2, su2_scaling_points};
use su_interferometry::table::format_num;
use su_interferometry::verify::{check_ids, SU2_SWEEP_N_MAX};
use su_interferometry::HalfInt;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_su-interferometry"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn su2_sweep_at_unit_eta() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.cfg", "group = SU2\nj = 1\nm0 = 0\neta = 1\n");
    let o = run(&["sweep", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (h, rows) = csv(&String::from_utf8(o.stdout).unwrap());
    let col = h.iter().position(|c| c == "delta_phi_sq").unwrap();
    assert_eq!(rows[0][col], "0.5");
}

#[test]
fn su11_sweep_with_ground_state_weight() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "b.cfg", "group = SU11\nk = 1/2\nl = 0\neta = 0.5\nsinh2beta = 1\n");
    let out = dir.path().join("b.csv");
    let o = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (h, rows) = csv(&std::fs::read_to_string(&out).unwrap());
    let col = h.iter().position(|c| c == "delta_phi_sq").unwrap();
    assert_eq!(rows[0][col], "1");
    let m = read_json(&dir.path().join("b.csv.manifest.json"));
    assert_eq!(m["command"], "sweep");
    assert_eq!(m["config"].as_array().unwrap().len(), 5);
    assert!(m["timestamp"].as_str().unwrap().ends_with('Z'));
}

#[test]
fn sweep_output_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.cfg",
        "group = SU11\nk = 1/2, 1\nl = 1:40:1\neta = 0.1:0.9:0.2\nbeta = 0.5, 1.5\nquantity = G, delta_phi_sq, n_bar, E\n",
    );
    let one = bin().args(["sweep", "--config", &cfg]).env("SU_INTERFEROMETRY_THREADS", "1").output().unwrap();
    let many = bin().args(["sweep", "--config", &cfg]).env("SU_INTERFEROMETRY_THREADS", "4").output().unwrap();
    assert_eq!(code(&one), 0, "{}", stderr(&one));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(String::from_utf8(one.stdout).unwrap().lines().count(), 1 + 2 * 40 * 5 * 2);
}

#[test]
fn invalid_weight_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "d.cfg", "group = SU2\nj = 1\nm0 = 2\neta = 0.5\n");
    let o = run(&["sweep", "--config", &cfg]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("`m0`"), "{}", stderr(&o));
}

#[test]
fn malformed_config_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.cfg", "group = SU2\n# comment\n\neta = 0.1:oops:0.1\n");
    let o = run(&["sweep", "--config", &cfg]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("e.cfg:4:"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["figure", "fig5"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["verify", "--check", "nope"])), 2);
    assert_eq!(code(&run(&["verify", "--tolerance", "-1"])), 2);
    let o = bin().args(["verify", "--list"]).env("SU_INTERFEROMETRY_THREADS", "0").output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn unwritable_output_path_fails() {
    let o = run(&["figure", "fig2", "--out", "/nonexistent-dir/fig2.csv"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("cannot write"));
}

#[test]
fn unattainable_tolerance_reports_locations() {
    let dir = tempfile::tempdir().unwrap();
    let man = dir.path().join("m.json");
    let o = run(&["verify", "--check", "limits", "--tolerance", "1e-20", "--out", man.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let m = read_json(&man);
    assert_eq!(m["passed"], false);
    let c = &m["checks"][0];
    assert_eq!(c["id"], "limits");
    assert_eq!(c["passed"], false);
    assert!(!c["max_deviation"]["location"].as_str().unwrap().is_empty());
}

#[test]
fn empty_config_applies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.cfg", "");
    let o = run(&["verify", "--check", "limits", "--check", "quasi-intelligent", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ids: Vec<&str> = m["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["limits", "quasi-intelligent"]);
    assert!(m["checks"][0]["max_deviation"]["observed"].is_number());
}

#[test]
fn per_check_tolerance_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t.cfg", "tolerance.quasi-intelligent = 1e-30\n");
    let o = run(&["verify", "--check", "quasi-intelligent", "--check", "limits", "--config", &cfg]);
    assert_eq!(code(&o), 1);
    let m: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(m["checks"][0]["passed"], false);
    assert_eq!(m["checks"][1]["passed"], true);
}

#[test]
fn default_verify_lists_every_check_once() {
    let dir = tempfile::tempdir().unwrap();
    let man = dir.path().join("all.json");
    let o = run(&["verify", "--out", man.to_str().unwrap()]);
    let m = read_json(&man);
    let ids: Vec<&str> = m["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, check_ids().collect::<Vec<_>>());
    let all_passed = m["passed"].as_bool().unwrap();
    assert_eq!(code(&o), if all_passed { 0 } else { 1 });
    for c in m["checks"].as_array().unwrap() {
        assert!(c["max_deviation"].is_object(), "{}", c["id"]);
    }
}

fn figure(preset: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let o = run(&["figure", preset]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    csv(&String::from_utf8(o.stdout).unwrap())
}

#[test]
fn fig2_matches_library_values() {
    let (h, rows) = figure("fig2");
    assert_eq!(h, ["eta", "j", "m0", "G"]);
    assert_eq!(rows.len(), 16 * 50);
    for r in &rows {
        let eta: f64 = r[0].parse().unwrap();
        let m0 = HalfInt::from_f64(r[2].parse().unwrap()).unwrap();
        let g = g_factor_su2(HalfInt::from_int(15), m0, eta).unwrap().value;
        assert_eq!(r[3], format_num(g));
        if m0 == HalfInt::from_int(15) {
            assert_eq!(r[3], "1");
        }
    }
    assert!(rows.iter().any(|r| r[0] == "0.5" && r[2] == "15" && r[3] == "1"));
}

#[test]
fn fig6_matches_library_values() {
    let (h, rows) = figure("fig6");
    assert_eq!(h, ["eta", "k", "l", "G"]);
    for r in &rows {
        let eta: f64 = r[0].parse().unwrap();
        let l: usize = r[2].parse().unwrap();
        assert_eq!(r[3], format_num(g_factor_su11(HalfInt::HALF, l, eta).unwrap().value));
        if l == 0 {
            assert_eq!(r[3], "1");
        }
    }
}

#[test]
fn fig4_matches_library_exponents() {
    let (h, rows) = figure("fig4");
    assert_eq!(h[..4], ["eta", "m0", "n_max", "E"]);
    for r in &rows {
        let eta: f64 = r[0].parse().unwrap();
        let e = exponent_estimate(&su2_scaling_points(eta, SU2_SWEEP_N_MAX).unwrap()).unwrap();
        assert_eq!(r[3], format_num(e.e));
    }
}

#[test]
fn scaling_presets_have_the_stated_grids() {
    let (h3, rows3) = figure("fig3");
    assert_eq!(h3, ["eta", "m0", "N", "ln_N", "ln_delta_phi"]);
    assert_eq!(rows3.len(), 5 * SU2_SWEEP_N_MAX / 2);
    let (h7, rows7) = figure("fig7");
    assert_eq!(h7[..4], ["eta", "k", "sinh2beta", "l"]);
    assert_eq!(rows7.len(), 5 * 150);
    assert!(rows7.iter().all(|r| r[1] == "0.5" && r[2] == "1"));
    assert_eq!(rows7.last().unwrap()[3], "150");
    let (_, rows8) = figure("fig8");
    assert!(rows8.iter().all(|r| r[3] == "150"));
}

#[test]
fn preset_can_come_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.cfg", "preset = fig6\n");
    let o = run(&["figure", "--config", &cfg]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(o.stdout, run(&["figure", "fig6"]).stdout);
    assert_eq!(code(&run(&["figure"])), 2);
}
