//! End-to-end tests of the binary: exit codes, determinism, batch isolation.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-defect"))
}

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const QUADRIC_PRISM: &str = r#"{
  "name": "quadric prism",
  "dim": 4,
  "points": [
    [0,0,0,0],[1,0,0,0],[0,0,1,0],[0,1,1,0],[0,2,1,0],
    [0,0,0,1],[1,0,0,1],[0,0,1,1],[0,1,1,1],[0,2,1,1]
  ]
}"#;

const CUBIC_SCROLL: &str = r#"{
  "name": "cubic scroll",
  "dim": 2,
  "points": [[0,0],[1,0],[2,0],[0,1],[1,1]]
}"#;

const SQUARE_PYRAMID: &str = r#"{
  "name": "square pyramid",
  "dim": 3,
  "points": [[0,0,0],[1,0,0],[0,1,0],[1,1,0],[0,0,1]]
}"#;

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

#[test]
fn analyze_trivial_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p.json", QUADRIC_PRISM);
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: trivial"), "{text}");
    assert!(text.contains("dual defect: 1"), "{text}");
}

#[test]
fn analyze_nontrivial_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.json", CUBIC_SCROLL);
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: nontrivial"), "{text}");
}

#[test]
fn analyze_non_simple_exits_two_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "pyr.json", SQUARE_PYRAMID);
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("hypotheses-unmet"), "{text}");
    assert!(text.contains("oracle 1"), "{text}");
}

#[test]
fn analyze_bad_input_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.json", r#"{"name": "x", "dim": 2, "points": [[0,0],[1]]}"#);
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("row 1"), "{err}");
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p.json", QUADRIC_PRISM);
    let a = run(&["analyze", path.to_str().unwrap(), "--json", "--seed", "5"]);
    let b = run(&["analyze", path.to_str().unwrap(), "--json", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.json", CUBIC_SCROLL);
    let out = run(&["analyze", path.to_str().unwrap(), "--json"]);
    let report: toric_defect_cli::ReportDocument =
        serde_json::from_slice(&out.stdout).expect("report parses back");
    assert_eq!(report.verdict, "nontrivial");
    assert_eq!(report.defect.combinatorial, Some(0));
    let again = serde_json::to_string(&report).unwrap();
    let reparsed: toric_defect_cli::ReportDocument = serde_json::from_str(&again).unwrap();
    assert_eq!(report, reparsed);
}

#[test]
fn no_oracle_flag_suppresses_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p.json", QUADRIC_PRISM);
    let out = run(&["analyze", path.to_str().unwrap(), "--json", "--no-oracle"]);
    let report: toric_defect_cli::ReportDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.defect.oracle, None);
    assert_eq!(report.defect.combinatorial, Some(1));
}

#[test]
fn max_dim_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p.json", QUADRIC_PRISM);
    let out = run(&["analyze", path.to_str().unwrap(), "--max-dim", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn hull_points_flag_saturates() {
    let dir = tempfile::tempdir().unwrap();
    // vertices only; saturation must find all 10 points
    let vertices_only = r#"{
      "name": "prism vertices",
      "dim": 4,
      "points": [
        [0,0,0,0],[1,0,0,0],[0,0,1,0],[0,2,1,0],
        [0,0,0,1],[1,0,0,1],[0,0,1,1],[0,2,1,1]
      ]
    }"#;
    let path = write(dir.path(), "v.json", vertices_only);
    let out = run(&["analyze", path.to_str().unwrap(), "--json", "--hull-points"]);
    let report: toric_defect_cli::ReportDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.analyzed_points, 10);
    assert_eq!(report.verdict, "trivial");
}

#[test]
fn oversized_boxes_are_refused_not_scanned() {
    let dir = tempfile::tempdir().unwrap();
    let huge = r#"{"name": "huge", "dim": 1, "points": [[0], ["18014398509481985"]]}"#;
    let path = write(dir.path(), "huge.json", huge);
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bounding box"), "{err}");
}

#[test]
fn batch_isolates_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a_good.json", CUBIC_SCROLL);
    write(dir.path(), "b_bad.json", "{nonsense");
    write(dir.path(), "c_good.json", QUADRIC_PRISM);
    let out = run(&["batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("a_good.json"), "{table}");
    assert!(table.contains("error"), "{table}");
    assert!(table.contains("nontrivial"), "{table}");
    assert!(table.contains("trivial"), "{table}");
}

#[test]
fn batch_empty_directory_is_fine() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["batch", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.starts_with("file"));
}

#[test]
fn batch_reproduces_defect_catalog() {
    // the shipped sample inputs cover the low-dimensional catalog
    let fixtures = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let out = run(&["batch", fixtures.to_str().unwrap(), "--no-oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    let expect = [
        ("standard_line.json", "1"),
        ("standard_plane.json", "2"),
        ("standard_space.json", "3"),
        ("cone_over_conic.json", "1"),
        ("unit_square.json", "0"),
        ("unit_cube.json", "0"),
        ("triangle_prism.json", "1"),
        ("join_of_conics.json", "1"),
        ("conic_cone_line_vertex.json", "2"),
        ("quadric_prism.json", "1"),
        ("cubic_scroll.json", "0"),
    ];
    for (file, defect) in expect {
        let line = table
            .lines()
            .find(|l| l.starts_with(file))
            .unwrap_or_else(|| panic!("{file} missing from table:\n{table}"));
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols[1], defect, "defect column for {file}: {line}");
    }
}

#[test]
fn batch_rows_sorted_by_filename() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "zz.json", CUBIC_SCROLL);
    write(dir.path(), "aa.json", QUADRIC_PRISM);
    let out = run(&["batch", dir.path().to_str().unwrap(), "--jobs", "2"]);
    let table = String::from_utf8(out.stdout).unwrap();
    let aa = table.find("aa.json").unwrap();
    let zz = table.find("zz.json").unwrap();
    assert!(aa < zz, "{table}");
}
