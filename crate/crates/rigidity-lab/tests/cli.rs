//! End-to-end checks of the command-line surface: exit codes, batch format
//! round trips, determinism, and figure emission.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rigidity-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn usage_errors_exit_2() {
    // m >= n
    let out = run(&["sample", "--n", "4", "--m", "4", "--trials", "1", "--seed", "1", "--out", "/tmp/x.batch"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    // unknown flag (clap)
    let out = run(&["sample", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // experiment without batch or trials
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "experiment", "counting", "--n", "8", "--m", "4",
        "--region", "disc:1", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_failures_exit_3() {
    let out = run(&[
        "sample", "--n", "4", "--m", "2", "--trials", "1", "--seed", "1",
        "--out", "/nonexistent-dir/x.batch",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sample_writes_expected_shape_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.batch");
    let args = [
        "sample", "--n", "4", "--m", "2", "--trials", "3", "--seed", "7",
        "--out", path.to_str().unwrap(),
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4); // header + 3 records
    assert!(lines[0].starts_with("n=4 m=2 rescaled=false seed=7 trials=3"));
    for rec in &lines[1..] {
        // trial index + 2 eigenvalues as (re, im)
        assert_eq!(rec.split_whitespace().count(), 1 + 4);
    }

    // byte-identical on re-run
    let path2 = dir.path().join("s2.batch");
    let args2 = [
        "sample", "--n", "4", "--m", "2", "--trials", "3", "--seed", "7",
        "--out", path2.to_str().unwrap(),
    ];
    assert_eq!(run(&args2).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&path2).unwrap());
}

#[test]
fn exact_reports_closed_form_mass_and_normalized_pmf() {
    let out = run(&["exact", "--n", "100", "--m", "50", "--region", "annulus:4", "--pmf"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    let mut tables = text.split("k,prob");
    let exact = tables.next().unwrap();
    let line = exact.lines().nth(1).unwrap();
    let fields: Vec<&str> = line.split(',').collect();
    assert_eq!(fields[0], "annulus:4");
    let mass: f64 = fields[1].parse().unwrap();
    assert!((mass - 0.14).abs() < 1e-12);

    let pmf_text = tables.next().expect("pmf table present");
    let total: f64 = pmf_text
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-10, "pmf sums to {total}");
}

#[test]
fn exact_rejects_out_of_range_region_with_bound_in_message() {
    let out = run(&["exact", "--n", "64", "--m", "32", "--region", "disc:12"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("admissible index bound"), "stderr: {err}");
}

#[test]
fn counting_with_zero_threshold_has_unit_tail_and_batch_reuse_works() {
    let dir = tempfile::tempdir().unwrap();
    let batch_path = dir.path().join("b.batch");
    let out = run(&[
        "sample", "--n", "16", "--m", "8", "--trials", "64", "--seed", "11",
        "--out", batch_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out_dir = dir.path().join("counting");
    let out = run(&[
        "experiment", "counting", "--n", "16", "--m", "8",
        "--batch", batch_path.to_str().unwrap(),
        "--region", "1", "--t-grid", "0,1,2",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(out_dir.join("counting.csv")).unwrap();
    let first_row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first_row[1], "0"); // t = 0
    let emp_tail: f64 = first_row[2].parse().unwrap();
    assert_eq!(emp_tail, 1.0);

    assert!(out_dir.join("counting_summary.csv").exists());
}

#[test]
fn rigidity_zero_beyond_cutoff() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("rig");
    // p=3 -> l=2 is admissible at (32,16); cutoff = 2 sqrt(16+1) ≈ 8.25,
    // so s = 40 is far beyond it
    let out = run(&[
        "experiment", "rigidity", "--n", "32", "--m", "16",
        "--trials", "64", "--seed", "3",
        "--p", "3", "--s-grid", "1,2,40",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("rigidity.csv")).unwrap();
    let last: Vec<&str> = csv.lines().last().unwrap().split(',').collect();
    assert_eq!(last[1], "40"); // s
    assert_eq!(last[2].parse::<f64>().unwrap(), 0.0); // emp_freq
    assert_eq!(last[4].parse::<f64>().unwrap(), 0.0); // bound columns zeroed past cutoff
    assert_eq!(last[5].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn report_empty_dir_warns_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let in_dir = dir.path().join("in");
    let out_dir = dir.path().join("out");
    std::fs::create_dir_all(&in_dir).unwrap();
    let out = run(&[
        "report", "--in", in_dir.to_str().unwrap(), "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(out_dir.join("summary.txt").exists());
}

#[test]
fn report_renders_scatter_and_tail_figures() {
    let dir = tempfile::tempdir().unwrap();
    let in_dir = dir.path().join("in");
    std::fs::create_dir_all(&in_dir).unwrap();

    let batch_path = in_dir.join("demo.batch");
    let out = run(&[
        "sample", "--n", "16", "--m", "9", "--trials", "2", "--seed", "5",
        "--out", batch_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&[
        "experiment", "counting", "--n", "16", "--m", "9",
        "--trials", "64", "--seed", "5",
        "--region", "disc:2", "--t-grid", "0.5,1,2,4",
        "--out", in_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out_dir = dir.path().join("figs");
    let out = run(&[
        "report", "--in", in_dir.to_str().unwrap(), "--out", out_dir.to_str().unwrap(), "--svg",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let scatter = std::fs::read_to_string(out_dir.join("demo_scatter.svg")).unwrap();
    assert_eq!(scatter.matches("class=\"pt\"").count(), 9);
    assert_eq!(scatter.matches("class=\"ring\"").count(), 3);

    let has_tail_fig = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .any(|e| e.file_name().to_string_lossy().contains("tails"));
    assert!(has_tail_fig, "tail figure missing in {}", out_dir.display());

    // log-scale tail figures document the zero-frequency floor
    let tail_file = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .find(|e| e.file_name().to_string_lossy().contains("tails"))
        .unwrap();
    let tail_svg = std::fs::read_to_string(tail_file.path()).unwrap();
    assert!(tail_svg.contains("1/(2T) floor"));
}
