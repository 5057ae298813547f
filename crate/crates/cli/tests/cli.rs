use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_ripbound");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("RIPBOUND_THREADS")
        .output()
        .expect("spawn ripbound")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn records(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

fn field(rec: &csv::StringRecord, i: usize) -> f64 {
    rec[i].parse().unwrap()
}

#[test]
fn bounds_rows_and_overrides() {
    let text = stdout(&["bounds", "--n", "200", "--N", "1000", "--s", "10", "--eps", "0.05", "--format", "csv"]);
    let rows = records(&text);
    let kinds: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(kinds, ["lower_plus", "lower_minus", "upper_new", "upper_classical"]);
    assert!((field(&rows[0], 1) - 0.317_466_082_434).abs() < 1e-11);
    assert!((field(&rows[1], 1) - 0.165_603_735_626).abs() < 1e-11);
    assert!((field(&rows[2], 1) - 0.735_418_432_277).abs() < 1e-11);

    let derived = records(&stdout(&["bounds", "--n", "200", "--N", "1000", "--s", "10", "--format", "csv"]));
    assert!((field(&derived[0], 2) - 0.151_742_712_938_515).abs() < 1e-14);
    assert!((field(&derived[2], 2) - 0.230_180_741_300_137).abs() < 1e-14);
}

#[test]
fn sparsity_one_is_flagged_not_fatal() {
    let rows = records(&stdout(&["bounds", "--n", "200", "--N", "1000", "--s", "1", "--format", "csv"]));
    for row in &rows[..2] {
        assert_eq!(&row[1], "");
        assert_eq!(&row[6], "false");
        assert!(row[8].contains("s must be >= 2"));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bounds", "--n", "0", "--N", "1000", "--s", "10"]).status.code(), Some(2));
    assert_eq!(run(&["quantile", "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["mc", "--n", "20", "--N", "50", "--s", "3"]).status.code(), Some(2), "seed is mandatory");
    assert_eq!(
        run(&["minmeas", "--N", "1000", "--s", "10", "--algorithm", "nope"]).status.code(),
        Some(2)
    );
    let capped = run(&["exact", "--n", "8", "--N", "40", "--s", "10", "--seed", "1"]);
    assert_eq!(capped.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("847660528"));
    let unwritable = run(&["curve", "--points", "3", "--out", "/nonexistent/dir/curve.csv"]);
    assert_eq!(unwritable.status.code(), Some(3));

    let bad_threads = Command::new(BIN)
        .args(["quantile", "--alpha", "0.5"])
        .env("RIPBOUND_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn single_curve_point_matches_bounds() {
    let curve = records(&stdout(&["curve", "--sparsity", "0.01", "--points", "1", "--rate-min", "5"]));
    assert_eq!(curve.len(), 1);
    let row = &curve[0];
    assert_eq!(&row[2], "200");
    let bounds = records(&stdout(&["bounds", "--n", "200", "--N", "1000", "--s", "10", "--format", "csv"]));
    let lower = field(&bounds[0], 1).max(field(&bounds[1], 1));
    assert_eq!(field(row, 5), lower);
    assert_eq!(field(row, 6), field(&bounds[2], 1));
    assert_eq!(field(row, 7), field(&bounds[3], 1));
}

#[test]
fn near_square_rates_are_flagged() {
    let rows = records(&stdout(&[
        "curve", "--rate-min", "1.01", "--rate-max", "1.2", "--points", "5", "--sparsity", "0.25", "0.1",
    ]));
    assert_eq!(rows.len(), 10);
    for row in &rows[..5] {
        assert!(row[8].contains("upper_new_out_of_regime") && row[8].contains("lower_out_of_regime"));
        assert!(!row[5].is_empty(), "lower bound is still computed");
    }
    assert!(rows[5..].iter().all(|r| r[8].is_empty()));
}

#[test]
fn curve_files_manifests_and_panels() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("c.csv");
    let svg_path = dir.path().join("c.svg");
    let args = [
        "curve",
        "--points",
        "10",
        "--out",
        csv_path.to_str().unwrap(),
        "--svg",
        svg_path.to_str().unwrap(),
        "--svg-panels",
    ];
    stdout(&args);
    let first = fs::read(&csv_path).unwrap();
    let manifest = fs::read_to_string(dir.path().join("c.csv.manifest")).unwrap();
    assert!(manifest.contains("command=curve"));
    assert!(manifest.contains("param.points=10"));
    assert!(manifest.contains("timestamp="));
    assert!(dir.path().join("c.svg.manifest").exists());

    for level in ["0.1", "0.01", "0.001"] {
        let panel = fs::read_to_string(dir.path().join(format!("c_s{level}.svg"))).unwrap();
        let doc = roxmltree::Document::parse(&panel).unwrap();
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), 3);
    }

    stdout(&args);
    assert_eq!(fs::read(&csv_path).unwrap(), first);
    let strip = |m: String| m.lines().filter(|l| !l.starts_with("timestamp=")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(fs::read_to_string(dir.path().join("c.csv.manifest")).unwrap()), strip(manifest));
}

#[test]
fn stochastic_commands_repeat_exactly() {
    let mc = ["mc", "--n", "30", "--N", "90", "--s", "4", "--trials", "50", "--seed", "7", "--format", "csv"];
    assert_eq!(stdout(&mc), stdout(&mc));
    let os = ["orderstats", "--n", "500", "--k", "20", "--trials", "40", "--seed", "2", "--format", "csv"];
    assert_eq!(stdout(&os), stdout(&os));
    assert_ne!(
        stdout(&os),
        stdout(&["orderstats", "--n", "500", "--k", "20", "--trials", "40", "--seed", "3", "--format", "csv"])
    );
}

#[test]
fn chi2_commands() {
    assert!(stdout(&["quantile", "--alpha", "0.01"]).contains("6.634897"));
    let rows = records(&stdout(&["cte", "--alpha", "0.01", "--format", "csv"]));
    assert!((field(&rows[0], 2) - 8.449_165_962_104_145).abs() < 1e-12);
    let rows = records(&stdout(&["cte", "--t", "1", "--format", "csv"]));
    assert!((field(&rows[0], 1) - 0.317_310_507_862_914_1).abs() < 1e-15);
}

#[test]
fn exact_reports_support_count() {
    let text = stdout(&["exact", "--n", "8", "--N", "12", "--s", "2", "--seed", "3", "--format", "csv"]);
    let rows = records(&text);
    let get = |key: &str| rows.iter().find(|r| &r[0] == key).unwrap()[1].to_string();
    assert_eq!(get("supports_checked"), "66");
    let plus: f64 = get("delta_plus").parse().unwrap();
    let minus: f64 = get("delta_minus").parse().unwrap();
    let delta_s: f64 = get("delta_s").parse().unwrap();
    assert_eq!(delta_s, plus.max(minus));
}

#[test]
fn minmeas_uses_algorithm_thresholds() {
    let rows = records(&stdout(&["minmeas", "--N", "1000", "--s", "10", "--algorithm", "l1", "--format", "csv"]));
    let row = &rows[0];
    assert_eq!(&row[0], "l1");
    assert_eq!(&row[3], "10");
    assert!((field(row, 4) - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(&row[5], "true");
    let (sufficient, necessary): (usize, usize) = (row[8].parse().unwrap(), row[9].parse().unwrap());
    assert!(necessary <= sufficient);

    let rows = records(&stdout(&["minmeas", "--N", "1000", "--s", "10", "--algorithm", "iht", "--format", "csv"]));
    assert_eq!(&rows[0][3], "30");

    // Order 13 s = 260 leaves the lower-bound regime; reported, not fatal.
    let rows = records(&stdout(&["minmeas", "--N", "1000", "--s", "20", "--algorithm", "omp_13s", "--format", "csv"]));
    assert_eq!(&rows[0][9], "");
    assert!(rows[0][10].contains("necessary"));
}

#[test]
fn mc_writes_per_trial_rows() {
    let dir = tempfile::tempdir().unwrap();
    let trials = dir.path().join("t.csv");
    let out = dir.path().join("s.csv");
    stdout(&[
        "mc",
        "--n",
        "30",
        "--N",
        "90",
        "--s",
        "4",
        "--trials",
        "25",
        "--seed",
        "1",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
        "--trials-out",
        trials.to_str().unwrap(),
    ]);
    assert_eq!(records(&fs::read_to_string(&trials).unwrap()).len(), 25);
    assert!(dir.path().join("t.csv.manifest").exists());
    let manifest = fs::read_to_string(dir.path().join("s.csv.manifest")).unwrap();
    assert!(manifest.contains("seed=1"));
    assert!(manifest.contains("normal_sampler="));
}
