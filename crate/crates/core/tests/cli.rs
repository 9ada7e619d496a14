use std::process::{Command, Output};
use std::time::{Duration, Instant};

use fracspec::cli::{run_with_io, ConvergenceRow, OutputRecord, QuadRow, SolutionRow};
use fracspec::{builtin, solve};

fn fracspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("fracspec").chain(args.iter().copied());
    let code = run_with_io(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn table_row_matches_library_solution() {
    let (code, out, err) = in_process(&["table", "--example", "3", "--N", "10", "--points", "0:1:0.1"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().next(), Some("t,approx,exact,abs_error"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 11);
    let half = rows.iter().find(|r| r[0] == "0.5").expect("row t=0.5");
    let approx: f64 = half[1].parse().unwrap();
    let exact: f64 = half[2].parse().unwrap();
    let library = solve(&builtin::<f64>(3).unwrap(), 10).unwrap().eval(0.5).unwrap();
    assert_eq!(approx, library);
    assert!((exact - 0.476_843_416_269_753).abs() < 1e-15);
    assert!((exact - 0.476_843_415_9).abs() < 5e-10);
    assert_eq!(half[3].parse::<f64>().unwrap(), (approx - exact).abs());
    assert!(!out.contains('\r'));
}

#[test]
fn solve_with_zero_kernel_returns_forcing() {
    let (code, out, err) = in_process(&[
        "solve", "--alpha", "0.5", "--T", "1", "--a", "0", "--b", "1", "--f", "t^2",
    ]);
    assert_eq!(code, 0, "{err}");
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 11);
    for r in rows {
        let t: f64 = r[0].parse().unwrap();
        let y: f64 = r[1].parse().unwrap();
        assert!((y - t * t).abs() <= 1e-12, "t = {t}: {y}");
        assert_eq!(r[2], "");
        assert_eq!(r[3], "");
    }
}

#[test]
fn hyphenated_values_are_accepted() {
    let (code, _, err) = in_process(&[
        "solve", "--alpha", "0.5", "--T", "1", "--a", "-1", "--b", "1", "--f", "-t+1",
    ]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn lobatto_rule_of_degree_two() {
    let (code, out, _) = in_process(&["quad", "--family", "lgl", "--N", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("index,node,weight"));
    let rows = csv_rows(&out);
    let expected = [(-1.0, 1.0 / 3.0), (0.0, 4.0 / 3.0), (1.0, 1.0 / 3.0)];
    assert_eq!(rows.len(), 3);
    for (i, (r, (x, w))) in rows.iter().zip(expected).enumerate() {
        assert_eq!(r[0], i.to_string());
        assert!((r[1].parse::<f64>().unwrap() - x).abs() <= 1e-15);
        assert!((r[2].parse::<f64>().unwrap() - w).abs() <= 1e-15);
        // 17 significant digits
        assert_eq!(r[1].split('e').next().unwrap().trim_start_matches('-').len(), 18);
    }
}

#[test]
fn json_round_trip_preserves_values() {
    let (code, out, _) = in_process(&["solve", "--example", "1", "--N", "12", "--format", "json"]);
    assert_eq!(code, 0);
    let record: OutputRecord<SolutionRow> = serde_json::from_str(&out).unwrap();
    assert_eq!(record.metadata.command, "solve");
    assert_eq!(record.metadata.n, Some(12));
    let s = solve(&builtin::<f64>(1).unwrap(), 12).unwrap();
    for row in &record.rows {
        assert_eq!(row.approx, s.eval(row.t).unwrap());
        assert!(row.exact.is_some());
    }
    assert!(record.rows.windows(2).all(|w| w[0].t < w[1].t));

    let (_, out, _) = in_process(&["quad", "--family", "gj", "--N", "5", "--q1", "-0.5", "--format", "json"]);
    let record: OutputRecord<QuadRow> = serde_json::from_str(&out).unwrap();
    let rule = fracspec::gauss_jacobi(5, -0.5, 0.0).unwrap();
    for (row, (x, w)) in record.rows.iter().zip(rule.iter()) {
        assert_eq!((row.node, row.weight), (x, w));
    }
}

#[test]
fn payloads_are_deterministic() {
    let args = ["convergence", "--example", "2", "--N-min", "2", "--N-max", "8"];
    let a = fracspec(&args);
    let b = fracspec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let json = ["table", "--example", "1", "--format", "json"];
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["metadata"].as_object_mut().unwrap().remove("timestamp");
        v
    };
    assert_eq!(strip(fracspec(&json)), strip(fracspec(&json)));
}

#[test]
fn exit_codes() {
    assert_eq!(fracspec(&["--help"]).status.code(), Some(0));
    assert_eq!(fracspec(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fracspec(&["solve", "--example", "4"]).status.code(), Some(1));
    assert_eq!(
        fracspec(&["solve", "--example", "1", "--alpha", "0.5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        fracspec(&["solve", "--alpha", "0.5", "--T", "1"]).status.code(),
        Some(1)
    );
    let bad_expr = [
        "solve", "--alpha", "0.5", "--T", "1", "--a", "0", "--b", "1", "--f", "t +* 2",
    ];
    let out = fracspec(&bad_expr);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`f`"));
    assert!(out.stdout.is_empty());
    let bad_alpha = [
        "solve", "--alpha", "1.5", "--T", "1", "--a", "0", "--b", "1", "--f", "t",
    ];
    assert_eq!(fracspec(&bad_alpha).status.code(), Some(1));
    let no_exact = [
        "table", "--alpha", "0.5", "--T", "1", "--a", "0", "--b", "1", "--f", "t",
    ];
    assert_eq!(fracspec(&no_exact).status.code(), Some(1));
    assert_eq!(
        fracspec(&["table", "--example", "1", "--points", "0:2:0.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        fracspec(&["quad", "--family", "gj", "--N", "4", "--q1", "-1.5"])
            .status
            .code(),
        Some(1)
    );
    // A forcing that is infinite at the origin is a numerical failure.
    let pole = [
        "solve", "--alpha", "0.5", "--T", "1", "--a", "1", "--b", "1", "--f", "1/t",
    ];
    assert_eq!(fracspec(&pole).status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rule.csv");
    let path_str = path.to_str().unwrap();
    let out = fracspec(&["quad", "--family", "gl", "--N", "4", "--output", path_str]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
    let missing = dir.path().join("no/such/dir/out.csv");
    let out = fracspec(&[
        "quad",
        "--family",
        "gl",
        "--N",
        "4",
        "--output",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn convergence_study_is_fast_and_complete() {
    let start = Instant::now();
    let out = fracspec(&["convergence", "--example", "1", "--N-min", "2", "--N-max", "24"]);
    assert!(start.elapsed() < Duration::from_secs(10));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("N,l2_error,linf_error,cond_estimate"));
    let ns: Vec<usize> = csv_rows(&text).iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(ns, (2..=24).collect::<Vec<_>>());
    assert!(String::from_utf8_lossy(&out.stderr).contains("slope"));

    let (code, out, _) = in_process(&["convergence", "--example", "1", "--N-max", "6", "--format", "json"]);
    assert_eq!(code, 0);
    let record: OutputRecord<ConvergenceRow> = serde_json::from_str(&out).unwrap();
    assert_eq!(record.rows.len(), 5);
    assert!(record.metadata.slope.unwrap() < 0.0);
}
