use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use diffpump::ingest::{write_mps, MpsModel, RowSense};
use diffpump_cli::report::{Aggregates, SuiteReport, CSV_COLUMNS};
use serde_json::Value;
use tempfile::TempDir;

fn bundled() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/bundled")
}

fn diffpump(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffpump"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_model(dir: &Path, name: &str, rows: &[(RowSense, Vec<f64>, f64)]) -> PathBuf {
    let n = rows[0].1.len();
    let model = MpsModel::from_dense(name, vec![1.0; n], rows, &vec![true; n]);
    let path = dir.join(format!("{name}.mps"));
    std::fs::write(&path, write_mps(&model)).unwrap();
    path
}

/// `x0 + x1 = 1, x0 - x1 = 0`: the relaxation sits at (0.5, 0.5) and no binary point is feasible.
fn no_integer_point(dir: &Path) -> PathBuf {
    write_model(
        dir,
        "half",
        &[
            (RowSense::E, vec![1.0, 1.0], 1.0),
            (RowSense::E, vec![1.0, -1.0], 0.0),
        ],
    )
}

fn lp_infeasible(dir: &Path) -> PathBuf {
    write_model(dir, "over", &[(RowSense::G, vec![1.0, 1.0], 3.0)])
}

fn cover(name: &str) -> String {
    bundled().join(name).display().to_string()
}

fn copy_bundled(dir: &Path, names: &[&str]) {
    for name in names {
        std::fs::copy(bundled().join(name), dir.join(name)).unwrap();
    }
}

#[test]
fn run_json_row_has_status() {
    let o = diffpump(&[
        "run",
        "--instance",
        &cover("cover00.mps"),
        "--preset",
        "FP",
        "--seed",
        "7",
        "--out",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let row: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(row["status"], "Found");
    assert_eq!(row["preset"], "FP");
    assert_eq!(row["seed"], 7);
}

#[test]
fn unknown_preset_lists_valid_ones() {
    let o = diffpump(&[
        "run",
        "--instance",
        &cover("cover00.mps"),
        "--preset",
        "NOPE",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    for name in ["FP", "DP1", "DP2", "DP3", "DP4"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn bad_flag_value_names_the_flag() {
    let o = diffpump(&["run", "--instance", &cover("cover00.mps"), "--eta", "fast"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--eta"));
}

#[test]
fn overrides_without_preset_match_dp2() {
    let o = diffpump(&[
        "run",
        "--instance",
        &cover("cover00.mps"),
        "--eta",
        "0.8",
        "--gamma",
        "0.1",
        "--p",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let row: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(row["eta"], 0.8);
    assert_eq!(row["gamma"], 0.1);
    assert_eq!(row["p"], 2.0);
    assert_eq!(row["beta"], 1.0);
    assert_eq!(row["lambda"], 0.0);
    assert_eq!(row["alpha"], 0.0);
}

#[test]
fn run_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let half = no_integer_point(tmp.path()).display().to_string();
    let o = diffpump(&["run", "--instance", &half, "--max-iters", "5"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .contains("IterationLimit"));

    let over = lp_infeasible(tmp.path()).display().to_string();
    assert_eq!(
        diffpump(&["run", "--instance", &over]).status.code(),
        Some(3)
    );

    let missing = tmp.path().join("missing.mps").display().to_string();
    assert_eq!(
        diffpump(&["run", "--instance", &missing]).status.code(),
        Some(1)
    );
    assert_eq!(diffpump(&["run"]).status.code(), Some(1));
    assert_eq!(diffpump(&["--help"]).status.code(), Some(0));
}

#[test]
fn run_csv_row_round_trips() {
    let o = diffpump(&["run", "--instance", &cover("knap00.mps"), "--preset", "DP3"]);
    assert_eq!(o.status.code(), Some(0));
    let report = SuiteReport::parse_csv(&stdout(&o)).unwrap();
    assert_eq!(report.rows.len(), 1);
    assert_eq!(report.rows[0].preset, "DP3");
    assert_eq!(report.rows[0].instance, "knap00.mps");
}

#[test]
fn trace_writes_one_json_line_per_iteration() {
    let tmp = TempDir::new().unwrap();
    let trace = tmp.path().join("trace.jsonl");
    let o = diffpump(&[
        "run",
        "--instance",
        &cover("split01.mps"),
        "--preset",
        "FP",
        "--trace",
        trace.to_str().unwrap(),
        "--out",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let row: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let text = std::fs::read_to_string(&trace).unwrap();
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len() as u64, row["iterations"].as_u64().unwrap());
    for (k, rec) in lines.iter().enumerate() {
        assert_eq!(rec["k"].as_u64(), Some(k as u64));
        assert!(rec["x_hat"].is_array() && rec["theta"].is_array());
    }
}

#[test]
fn suite_counts_fails_and_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    copy_bundled(tmp.path(), &["cover00.mps", "knap00.mps"]);
    no_integer_point(tmp.path());
    let dir = tmp.path().to_str().unwrap();
    let args = [
        "suite",
        "--dir",
        dir,
        "--max-iters",
        "20",
        "--seed",
        "3",
        "--omit-timing",
    ];
    let first = diffpump(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let second = diffpump(&args);
    assert_eq!(first.stdout, second.stdout);

    let report = SuiteReport::parse_csv(&stdout(&first)).unwrap();
    let names: Vec<_> = report.rows.iter().map(|r| r.instance.as_str()).collect();
    assert_eq!(names, ["cover00.mps", "half.mps", "knap00.mps"]);
    assert_eq!(report.aggregates.fails, 1);
    assert_eq!(report.aggregates.iteration_limit, 1);
    assert_eq!(report.aggregates, Aggregates::from_rows(&report.rows));
}

#[test]
fn suite_records_parse_errors_without_counting_them() {
    let tmp = TempDir::new().unwrap();
    copy_bundled(tmp.path(), &["cover00.mps"]);
    std::fs::write(tmp.path().join("broken.mps"), "ROWS\n Q bogus\n").unwrap();
    let out = tmp.path().join("report.json");
    let o = diffpump(&[
        "suite",
        "--dir",
        tmp.path().to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: SuiteReport =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.rows[0].status, "ParseError");
    assert_eq!(report.aggregates.parse_errors, 1);
    assert_eq!(report.aggregates.fails, 0);
    assert_eq!(
        report.aggregates.total_iterations,
        report.rows[1].iterations
    );
}

#[test]
fn parallel_suite_matches_serial() {
    let dir = bundled().display().to_string();
    let serial = diffpump(&["suite", "--dir", &dir, "--preset", "DP2", "--omit-timing"]);
    let parallel = diffpump(&[
        "suite",
        "--dir",
        &dir,
        "--preset",
        "DP2",
        "--omit-timing",
        "--jobs",
        "4",
    ]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn timing_is_reported_by_default() {
    let o = diffpump(&[
        "suite",
        "--dir",
        &bundled().display().to_string(),
        "--out",
        "json",
    ]);
    let report: SuiteReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.rows.iter().all(|r| r.wall_ms >= 0.0));
    assert_eq!(report.rows.len(), 20);
}

#[test]
fn suite_on_empty_directory_fails() {
    let tmp = TempDir::new().unwrap();
    let o = diffpump(&["suite", "--dir", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no .mps"));
}

fn grid(spec_text: &str, extra: &[&str]) -> (Output, TempDir) {
    let tmp = TempDir::new().unwrap();
    let spec = tmp.path().join("grid.txt");
    std::fs::write(&spec, spec_text).unwrap();
    let dir = tmp.path().join("suite");
    std::fs::create_dir(&dir).unwrap();
    copy_bundled(&dir, &["cover01.mps", "knap01.mps", "split01.mps"]);
    let mut args = vec![
        "grid",
        "--spec",
        spec.to_str().unwrap(),
        "--dir",
        dir.to_str().unwrap(),
        "--omit-timing",
    ];
    args.extend_from_slice(extra);
    (diffpump(&args), tmp)
}

#[test]
fn grid_summary_has_one_row_per_point() {
    let (o, _tmp) = grid("eta = 1\ngamma = 0.95, 1\n", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].ends_with(",*"));
    assert!(!rows[1].ends_with(",*"));
}

#[test]
fn grid_rows_record_p() {
    let out = TempDir::new().unwrap();
    let rows_csv = out.path().join("rows.csv");
    let (o, _tmp) = grid("p = 1, 2\n", &["--out", rows_csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&rows_csv).unwrap();
    let report = SuiteReport::parse_csv(&text).unwrap();
    assert_eq!(report.rows.len(), 6);
    let ps: Vec<f64> = report.rows.iter().map(|r| r.p).collect();
    assert_eq!(ps, [1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
    assert_eq!(report.aggregates, Aggregates::from_rows(&report.rows));
}

#[test]
fn invalid_grid_reports_line() {
    let (o, _tmp) = grid("eta = 1\n# fine\ngamma = 0.5, abc\n", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn csv_header_is_fixed() {
    let o = diffpump(&[
        "suite",
        "--dir",
        &bundled().display().to_string(),
        "--omit-timing",
    ]);
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
    let report = SuiteReport::parse_csv(&text).unwrap();
    assert_eq!(report.to_csv_string(), text);
}
