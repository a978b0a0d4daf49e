use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bv_relax::geometry::{PiecewiseConstantCircle, Point2};
use bv_relax::scene::{n_uple_scene, straight_jump_scene};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bv-relax"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn triple_scene(dir: &TempDir) -> PathBuf {
    let g = PiecewiseConstantCircle::uniform(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)])
        .unwrap();
    let s = n_uple_scene(&g, Point2::ORIGIN, 1.0);
    write(dir, "triple.json", &s.to_json_string().unwrap())
}

/// Single-row CSV as column → value.
fn csv_row(path: &Path) -> HashMap<String, String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().clone();
    let row = r.records().next().unwrap().unwrap();
    header.iter().map(String::from).zip(row.iter().map(String::from)).collect()
}

/// Rows of a `quantity,computed,reference,difference` table.
fn compare_rows(path: &Path) -> HashMap<String, (f64, f64)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].to_string(), (rec[1].parse().unwrap(), rec[2].parse().unwrap()))
        })
        .collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn area_of_the_triple_point() {
    let dir = TempDir::new().unwrap();
    let scene = triple_scene(&dir);
    let csv = dir.path().join("area.csv");
    let o = run(&["area", "--scene", s(&scene), "--csv", s(&csv)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let expect = std::f64::consts::PI + 2.0 + 2f64.sqrt() + 0.5;
    let row = csv_row(&csv);
    for col in ["total_lower", "total_upper"] {
        let v: f64 = row[col].parse().unwrap();
        assert!((v / expect - 1.0).abs() < 0.01, "{col} = {v}");
    }
    let summary = String::from_utf8(o.stdout).unwrap();
    assert!(summary.contains("7.05"), "{summary}");
}

#[test]
fn area_without_junctions_leaves_junction_columns_empty() {
    let dir = TempDir::new().unwrap();
    let scene = straight_jump_scene(0.0, 1.0, Point2::new(1.0, 0.0), Point2::new(0.0, 0.0));
    let path = write(&dir, "jump.json", &scene.to_json_string().unwrap());
    let csv = dir.path().join("area.csv");
    let o = run(&["area", "--scene", s(&path), "--csv", s(&csv)]);
    assert_eq!(code(&o), 0);
    let row = csv_row(&csv);
    assert_eq!(row["junction_lower"], "");
    assert_eq!(row["junction_upper"], "");
    let jump: f64 = row["jump"].parse().unwrap();
    assert!((jump - 1.0).abs() < 1e-9, "{jump}");
}

#[test]
fn csv_is_written_to_stdout_without_a_path() {
    let dir = TempDir::new().unwrap();
    let lp = write(&dir, "tri.json", r#"{"vertices": [[0, 0], [1, 0], [0, 1]]}"#);
    let o = run(&["plateau", "--loop", s(&lp)]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.lines().any(|l| l == "lower,upper,method"), "{out}");
}

#[test]
fn identical_runs_give_identical_csv() {
    let dir = TempDir::new().unwrap();
    let scene = triple_scene(&dir);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = run(&["area", "--scene", s(&scene), "--seed", "7", "--csv", s(out)]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn plateau_of_a_triangle() {
    let dir = TempDir::new().unwrap();
    let lp = write(&dir, "tri.json", r#"{"vertices": [[0, 0], [1, 0], [0, 1]]}"#);
    let csv = dir.path().join("p.csv");
    let svg = dir.path().join("p.svg");
    let o = run(&["plateau", "--loop", s(&lp), "--csv", s(&csv), "--svg", s(&svg)]);
    assert_eq!(code(&o), 0);
    let row = csv_row(&csv);
    let (lo, hi): (f64, f64) = (row["lower"].parse().unwrap(), row["upper"].parse().unwrap());
    assert!((lo - 0.5).abs() < 1e-6 && (hi - 0.5).abs() < 1e-9, "{lo} {hi}");
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn relaxed_tvj_of_circle_data() {
    let dir = TempDir::new().unwrap();
    let lp = write(&dir, "g.json", r#"{"values": [[0, 0], [1, 0], [0, 1]]}"#);
    let csv = dir.path().join("t.csv");
    let o = run(&["tvj", "--loop", s(&lp), "--r", "3", "--csv", s(&csv)]);
    assert_eq!(code(&o), 0);
    let upper: f64 = csv_row(&csv)["upper"].parse().unwrap();
    assert!((upper - 0.5).abs() < 1e-9);
}

#[test]
fn malformed_input_exits_with_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\n  \"schema\": \"bv-relax/1\",\n  \"domain\": [1, \n}");
    let o = run(&["area", "--scene", s(&bad)]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line"), "{err}");
    let lp = write(&dir, "lp.json", "{\"vertices\": [[0, 0], [1, ]]}");
    assert_eq!(code(&run(&["plateau", "--loop", s(&lp)])), 2);
}

#[test]
fn missing_file_exits_with_1() {
    assert_eq!(code(&run(&["area", "--scene", "/nonexistent/scene.json"])), 1);
}

#[test]
fn non_positive_tolerance_exits_with_2() {
    let dir = TempDir::new().unwrap();
    let scene = triple_scene(&dir);
    assert_eq!(code(&run(&["area", "--scene", s(&scene), "--tol", "0"])), 2);
}

#[test]
fn unknown_example_exits_with_4() {
    assert_eq!(code(&run(&["example", "quadruple"])), 4);
}

#[test]
fn butterfly_example() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("b.csv");
    let o = run(&["example", "butterfly", "--csv", s(&csv)]);
    assert_eq!(code(&o), 0);
    let rows = compare_rows(&csv);
    assert_eq!(rows["lower"].0, 0.0);
    let (upper, reference) = rows["upper"];
    assert_eq!(reference, 1.0);
    assert!((upper / reference - 1.0).abs() < 0.02, "{upper}");
}

#[test]
fn infinite_triple_example() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("i.csv");
    let o = run(&["example", "infinite-triple", "--levels", "10", "--csv", s(&csv)]);
    assert_eq!(code(&o), 0);
    let rows = compare_rows(&csv);
    assert_eq!(rows["tvj_lower"], (5.0, 5.0));
    assert_eq!(rows["l1_upper"].1, std::f64::consts::PI + 6.0);
    // the truncation misses the cuts beyond level 10
    let (tv, limit) = rows["tv_partial"];
    assert!((limit - tv - 2f64.sqrt() / 1024.0).abs() < 1e-9, "{tv} {limit}");
}

#[test]
fn triple_example_scales_with_the_radius() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("t.csv");
    let o = run(&["example", "triple", "--r", "2", "--csv", s(&csv)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = compare_rows(&csv);
    let expect = 4.0 * std::f64::consts::PI + 2.0 * (2.0 + 2f64.sqrt()) + 0.5;
    let (computed, reference) = rows["total_upper"];
    assert!((reference - expect).abs() < 1e-12);
    assert!((computed - expect).abs() < 1e-6 * expect, "{computed}");
}

#[test]
fn recovery_check_of_a_straight_jump() {
    let dir = TempDir::new().unwrap();
    let scene = straight_jump_scene(0.0, 1.0, Point2::new(1.0, 0.0), Point2::new(0.0, 0.0));
    let path = write(&dir, "jump.json", &scene.to_json_string().unwrap());
    let csv = dir.path().join("r.csv");
    let o = run(&["recovery-check", "--scene", s(&path), "--csv", s(&csv)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["parameter", "l1_gap", "tv_gap", "area_gap"]);
    let last = r.records().last().unwrap().unwrap();
    assert!(last[3].parse::<f64>().unwrap() <= 5e-3);
}
