use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use parabola_core::indep::MisReport;

fn parabola(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parabola"))
        .args(args)
        .env_clear()
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn info_reports_counts() {
    let o = parabola(&["info", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=9 m=12 loops=3"));
    let o = parabola(&["info", "--p", "17"]);
    assert!(stdout(&o).contains("n=289 m=2448"));
}

#[test]
fn invalid_primes_exit_2() {
    for bad in ["2", "15", "91", "1", "abc"] {
        let o = parabola(&["info", "--p", bad]);
        assert_eq!(o.status.code(), Some(2), "p = {bad}");
    }
    assert_eq!(parabola(&["check", "--p", "15"]).status.code(), Some(2));
    assert_eq!(parabola(&["bogus"]).status.code(), Some(2));
}

#[test]
fn check_exit_codes_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = parabola(&["check", "--p", "13", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["p"], 13);
    assert_eq!(cert["max_codegree"], 1);
    assert_eq!(cert["c4_count"], 0);
    assert_eq!(cert["grid_independent"], true);
    assert!(cert.get("elapsed_ms").is_some());

    let o = parabola(&["check", "--p", "1009"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("grid of 1764 vertices is independent"));
    let o = parabola(&["check", "--p", "17", "--grid-only"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn env_overrides_flags() {
    let o = Command::new(env!("CARGO_BIN_EXE_parabola"))
        .args(["info"])
        .env_clear()
        .env("PARABOLA_P", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=25 m=60"));
}

#[test]
fn export_dimacs_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("g.dimacs");
    assert!(parabola(&["export", "--p", "3", "--out", path_str(&d)]).status.success());
    let text = fs::read_to_string(&d).unwrap();
    assert!(text.starts_with("p edge 9 12\n"));
    assert!(text.lines().any(|l| l == "e 1 5"));
    assert_eq!(text.lines().count(), 13);

    let c = dir.path().join("g.csv");
    assert!(parabola(&["export", "--p", "5", "--format", "csv", "--out", path_str(&c)]).status.success());
    let text = fs::read_to_string(&c).unwrap();
    assert_eq!(text.lines().count(), 1 + 60);
}

#[test]
fn mis_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = parabola(&["mis", "--p", "7", "--method", "exact", "--out", path_str(&w)]);
    assert!(o.status.success());
    let report: MisReport = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(report.size, 14);
    assert!(report.optimal);
    assert!(parabola(&["mis", "--verify", path_str(&w)]).status.success());

    let mut tampered = report.clone();
    tampered.witness[1] = tampered.witness[0];
    tampered.witness[0] = parabola_core::Point([0, 0]);
    tampered.witness[1] = parabola_core::Point([1, 1]);
    fs::write(&w, serde_json::to_string(&tampered).unwrap()).unwrap();
    assert_eq!(parabola(&["mis", "--verify", path_str(&w)]).status.code(), Some(1));

    let o = parabola(&["mis", "--p", "7", "--method", "oracle"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn grid_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let j = dir.path().join("grid.json");
    let o = parabola(&["grid", "--p", "257", "--out", path_str(&j)]);
    assert!(o.status.success());
    let g: serde_json::Value = serde_json::from_str(&fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(g["size"], 256);
    assert_eq!(g["vertices"].as_array().unwrap().len(), 256);
    let c = dir.path().join("grid.csv");
    assert!(parabola(&["grid", "--p", "101", "--format", "csv", "--out", path_str(&c)]).status.success());
    assert_eq!(fs::read_to_string(&c).unwrap().lines().count(), 51);
}

#[test]
fn spectrum_csv_header() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("spec.csv");
    let o = parabola(&["spectrum", "--pmin", "3", "--pmax", "7", "--out", path_str(&s)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&s).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("p,lambda_min,lambda_max,normalized_gap,hoffman_regular,hoffman_dmin,sum_check,sum_sq_check")
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn scan_rows_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("scan.csv");
    let o = parabola(&["scan", "--pmin", "3", "--pmax", "31", "--exact", "--spectral", "--out", path_str(&s)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&s).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("p,n,m,loop_count,max_codegree,c4_count,grid_size,greedy_size,exact_alpha,alpha_optimal,lambda_min,hoffman_regular,elapsed_ms")
    );
    let ps: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ps, ["3", "5", "7", "11", "13", "17", "19", "23", "29", "31"]);
    assert!(text.contains("\n3,9,12,3,1,0,0,4,4,true,"));

    let s = dir.path().join("growth.csv");
    let o = parabola(&["scan", "--pmin", "17", "--pmax", "257", "--fit", "grid", "--out", path_str(&s)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&s).unwrap();
    assert!(text.lines().any(|l| l.starts_with("101,10201,") && l.split(',').nth(6) == Some("50")));
    assert!(text.lines().any(|l| l.starts_with("257,") && l.split(',').nth(6) == Some("256")));
    assert!(text.lines().last().unwrap().starts_with("fit_exponent="));
}

#[test]
fn scan_usage_errors_leave_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("bad.csv");
    assert_eq!(parabola(&["scan", "--pmin", "31", "--pmax", "3", "--out", path_str(&s)]).status.code(), Some(2));
    assert!(!s.exists());
    let missing = dir.path().join("no/such/dir/out.csv");
    assert_eq!(parabola(&["scan", "--pmin", "3", "--pmax", "7", "--out", path_str(&missing)]).status.code(), Some(2));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}
