//! End-to-end tests of the opradius binary: subcommand output, JSON
//! schemas, CSV shape, and the exit code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const J2: &str = r#"{"rows": 2, "cols": 2, "data": [[0,0],[1,0],[0,0],[0,0]]}"#;
const H2: &str = r#"{"rows": 2, "cols": 2, "data": [[2,0],[1,0],[1,0],[2,0]]}"#;
const D14: &str = r#"{"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[4,0]]}"#;
const I2: &str = r#"{"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1,0]]}"#;
const ZERO2: &str = r#"{"rows": 2, "cols": 2, "data": [[0,0],[0,0],[0,0],[0,0]]}"#;
const N3: &str = r#"{"rows": 3, "cols": 3, "data": [[1,0],[0,0],[0,0],[0,0],[0,1],[0,0],[0,0],[0,0],[-2,0]]}"#;
const G2: &str = r#"{"rows": 2, "cols": 2, "data": [[0.3,0.1],[1.2,-0.4],[0.9,0.2],[-0.5,0.7]]}"#;
const SHIFT_GRID: &str = r#"{"grid": [2, 2], "blocks": [[{"rows":1,"cols":1,"data":[[0,0]]}, {"rows":1,"cols":1,"data":[[1,0]]}],[{"rows":1,"cols":1,"data":[[0,0]]}, {"rows":1,"cols":1,"data":[[0,0]]}]]}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opradius"))
}

fn write_fixture(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

#[test]
fn compute_fixture_values() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let d14 = write_fixture(&dir, "D14.json", D14);

    let out = run(&["compute", j2.to_str().unwrap(), "w"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("w = 0.500000"), "{}", stdout(&out));

    let out = run(&["compute", d14.to_str().unwrap(), "ell"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("ell = 1.000000"), "{}", stdout(&out));

    let out = run(&["compute", j2.to_str().unwrap(), "r", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["value"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn compute_aluthge_of_shift_is_zero_matrix() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let out = run(&["compute", j2.to_str().unwrap(), "aluthge"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"], 2);
    assert_eq!(v["cols"], 2);
    for entry in v["data"].as_array().unwrap() {
        for part in entry.as_array().unwrap() {
            assert!(part.as_f64().unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn compute_rejects_malformed_json() {
    let dir = TempDir::new().unwrap();
    let bad = write_fixture(&dir, "bad.json", "{\"rows\": 2");
    let out = run(&["compute", bad.to_str().unwrap(), "w"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("malformed"));

    let missing = dir.path().join("absent.json");
    let out = run(&["compute", missing.to_str().unwrap(), "w"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bounds_classical_catalog_on_shift() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let out = run(&["bounds", j2.to_str().unwrap(), "--set", "classical", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 5);
    let ids: Vec<&str> = rows.iter().map(|r| r["bound_id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["eq1.1", "eq1.2", "eq1.3", "eq1.4", "eq1.5"]);
    assert!(rows.iter().all(|r| r["holds"].as_bool().unwrap()));

    let table = run(&["bounds", j2.to_str().unwrap(), "--set", "classical"]);
    assert_eq!(stdout(&table).lines().count(), 6, "header plus five rows");
}

#[test]
fn bounds_product_row_matches_fixture() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let i2 = write_fixture(&dir, "I2.json", I2);
    let out = run(&[
        "bounds",
        j2.to_str().unwrap(),
        "--set",
        "product",
        "--s",
        i2.to_str().unwrap(),
        "--alpha",
        "0.5",
        "--p",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&out)).unwrap();
    let eq41 = rows.iter().find(|r| r["bound_id"] == "eq4.1").unwrap();
    assert!((eq41["rhs_terms"][0].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn bounds_zero_matrix_has_nonnegative_slacks() {
    let dir = TempDir::new().unwrap();
    let zero = write_fixture(&dir, "zero.json", ZERO2);
    let out = run(&["bounds", zero.to_str().unwrap(), "--set", "all", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(rows.len() >= 8);
    for r in &rows {
        assert!(r["slack"].as_f64().unwrap() >= -1e-12, "{r}");
    }
}

#[test]
fn bounds_noncommuting_pair_exits_with_hypothesis_code() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let g2 = write_fixture(&dir, "G2.json", G2);
    let out = run(&[
        "bounds",
        j2.to_str().unwrap(),
        "--set",
        "product",
        "--s",
        g2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("commutation hypothesis violated"));
}

#[test]
fn block_bounds_pilot_and_closed_forms() {
    let dir = TempDir::new().unwrap();
    let grid = write_fixture(&dir, "shift_grid.json", SHIFT_GRID);

    let out = run(&["block-bounds", grid.to_str().unwrap(), "aok"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("w(A)  = 0.500000"));
    assert!(text.contains("bound = 0.500000"));
    assert!(text.contains("slack = 0.000000"));

    let out = run(&["block-bounds", grid.to_str().unwrap(), "cor8", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let eval = &v["evaluation"];
    assert_eq!(eval["variant"], "as_printed");
    assert!((eval["rhs_terms"][0].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert!((eval["slack"].as_f64().unwrap() + 0.25).abs() < 1e-9);
    assert_eq!(eval["holds"], false);
    assert!((v["comparison"]["hou_du"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn block_bounds_fg_pilot_on_block_diagonal() {
    let dir = TempDir::new().unwrap();
    let h2_diag = format!(
        r#"{{"grid": [2, 2], "blocks": [[{H2}, {ZERO2}],[{ZERO2}, {H2}]]}}"#
    );
    let grid = write_fixture(&dir, "h2_diag.json", &h2_diag);
    let out = run(&["block-bounds", grid.to_str().unwrap(), "eq4.4", "--alpha", "0.5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("w(A)  = 3.000000"));
    assert!(text.contains("bound = 3.000000"));
}

#[test]
fn verify_classical_bound_is_clean() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--bound",
        "eq1.1",
        "--ensemble",
        "ginibre",
        "--dim",
        "3",
        "--trials",
        "100",
        "--seed",
        "42",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("eq1.1: 0 violations in 100 trials"));
    let reports: Vec<Value> =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["violations"], 0);
}

#[test]
fn verify_scaling_misprint_produces_counterexamples() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--bound",
        "eq1.5",
        "--variant",
        "as_printed",
        "--ensemble",
        "ginibre",
        "--dim",
        "2",
        "--scale",
        "3",
        "--trials",
        "100",
        "--seed",
        "7",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let reports: Vec<Value> =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(reports[0]["violations"].as_u64().unwrap() > 0);
    assert!(!reports[0]["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn verify_trivial_single_trial() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--bound",
        "eq1.1",
        "--trials",
        "1",
        "--dim",
        "1",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn verify_unknown_bound_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&["verify", "--bound", "eq9.9", "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown bound identifier"));
}

#[test]
fn verify_reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    for path in [&r1, &r2] {
        let out = run(&[
            "verify",
            "--bound",
            "eq1.2",
            "--dim",
            "3",
            "--trials",
            "50",
            "--seed",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(std::fs::read(&r1).unwrap(), std::fs::read(&r2).unwrap());
}

#[test]
fn sweep_mixed_schwarz_on_shift_basis_vectors() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let e2 = write_fixture(&dir, "e2.json", "[[0,0],[1,0]]");
    let e1 = write_fixture(&dir, "e1.json", "[[1,0],[0,0]]");
    let out = run(&[
        "sweep",
        "eq2.2",
        "alpha",
        "--from",
        "0",
        "--to",
        "1",
        "--steps",
        "11",
        "--matrix",
        j2.to_str().unwrap(),
        "--x",
        e2.to_str().unwrap(),
        "--y",
        e1.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,value,slack"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    assert!((rows[0][0] - 0.0).abs() < 1e-15 && (rows[10][0] - 1.0).abs() < 1e-15);
    for row in &rows {
        assert!(row[1] >= 1.0 - 1e-12, "rhs {} at alpha {}", row[1], row[0]);
    }
}

#[test]
fn sweep_single_step_emits_one_row_at_from() {
    let dir = TempDir::new().unwrap();
    let h2 = write_fixture(&dir, "H2.json", H2);
    let out = run(&[
        "sweep",
        "eq3.1",
        "p",
        "--from",
        "2.5",
        "--to",
        "9",
        "--steps",
        "1",
        "--matrix",
        h2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("2.5,"));
}

#[test]
fn sweep_product_bound_over_drawn_pair() {
    let out = run(&[
        "sweep",
        "eq4.1",
        "p",
        "--from",
        "2",
        "--to",
        "6",
        "--steps",
        "5",
        "--ensemble",
        "commuting_pair",
        "--dim",
        "3",
        "--seed",
        "9",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    for line in text.lines().skip(1) {
        let slack: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(slack >= -1e-8, "{line}");
    }
}

#[test]
fn sweep_rejects_foreign_parameter() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let out = run(&[
        "sweep",
        "eq1.1",
        "alpha",
        "--from",
        "0",
        "--to",
        "1",
        "--matrix",
        j2.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("does not accept parameter alpha"));
}

#[test]
fn range_of_shift_traces_the_half_disc_boundary() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let out = run(&["range", j2.to_str().unwrap(), "360"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(!text.contains('\r'), "LF line endings only");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im"));
    let mut count = 0;
    let mut max_mod = 0.0_f64;
    for line in lines {
        let mut parts = line.split(',');
        let re: f64 = parts.next().unwrap().parse().unwrap();
        let im: f64 = parts.next().unwrap().parse().unwrap();
        max_mod = max_mod.max(re.hypot(im));
        count += 1;
    }
    assert_eq!(count, 360);
    assert!((max_mod - 0.5).abs() <= 1e-8, "max modulus {max_mod}");
}

#[test]
fn range_of_hermitian_matrix_is_a_real_interval() {
    let dir = TempDir::new().unwrap();
    let h2 = write_fixture(&dir, "H2.json", H2);
    let out = run(&["range", h2.to_str().unwrap(), "100"]);
    assert_eq!(code(&out), 0);
    for line in stdout(&out).lines().skip(1) {
        let mut parts = line.split(',');
        let re: f64 = parts.next().unwrap().parse().unwrap();
        let im: f64 = parts.next().unwrap().parse().unwrap();
        assert!(im.abs() <= 1e-10, "{line}");
        assert!((1.0 - 1e-9..=3.0 + 1e-9).contains(&re), "{line}");
    }
}

#[test]
fn range_of_normal_matrix_stays_in_spectral_hull() {
    let dir = TempDir::new().unwrap();
    let n3 = write_fixture(&dir, "N3.json", N3);
    let out = run(&["range", n3.to_str().unwrap(), "360"]);
    assert_eq!(code(&out), 0);
    // counterclockwise hull of the eigenvalues 1, i, -2
    let hull = [(1.0, 0.0), (0.0, 1.0), (-2.0, 0.0)];
    for line in stdout(&out).lines().skip(1) {
        let mut parts = line.split(',');
        let re: f64 = parts.next().unwrap().parse().unwrap();
        let im: f64 = parts.next().unwrap().parse().unwrap();
        for k in 0..3 {
            let (ax, ay) = hull[k];
            let (bx, by) = hull[(k + 1) % 3];
            let cross = (bx - ax) * (im - ay) - (by - ay) * (re - ax);
            assert!(cross >= -1e-8, "point ({re}, {im}) outside edge {k}");
        }
    }
}

#[test]
fn range_needs_at_least_three_points() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let out = run(&["range", j2.to_str().unwrap(), "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn json_outputs_roundtrip_byte_identically() {
    let dir = TempDir::new().unwrap();
    let j2 = write_fixture(&dir, "J2.json", J2);
    let out = run_in(
        dir.path(),
        &["bounds", j2.to_str().unwrap(), "--set", "all", "--format", "json", "--out", "rows.json"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("rows.json")).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    let reserialized = format!("{}\n", serde_json::to_string_pretty(&value).unwrap());
    assert_eq!(text, reserialized);
}
