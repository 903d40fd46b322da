//! End-to-end tests of the binary: output shapes, exit codes, file formats.

use qjoin::realization::cycle_join_matrix;
use std::path::Path;
use std::process::{Command, Output};

fn qjoin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qjoin"))
        .args(args)
        .env_remove("QJOIN_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn decide_prints_q_and_rule() {
    let out = qjoin(&["decide", "2,2", "1,1,1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("q=3"));

    let out = qjoin(&["decide", "2,2", "1,1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("q=2"));
}

#[test]
fn decide_witness_prints_a_valid_pair() {
    let out = qjoin(&["decide", "2,2", "1,1", "--witness"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("V ="));
    assert!(text.contains("W ="));
}

#[test]
fn decide_mu_prints_mass_and_range() {
    let out = qjoin(&["decide", "5", "2,1,1", "--mu"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("q=2"));
    assert!(text.contains("mu=3"));
    assert!(text.contains("iplus=[3,6]"));
}

#[test]
fn decide_json_roundtrips() {
    let out = qjoin(&["decide", "2,2", "1,1,1,1", "--json"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["q"], 2);
    assert!(value["witness"].is_object());
    assert_eq!(value["mu"], 4);
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(code(&qjoin(&["decide", "2,x", "1"])), 2);
    assert_eq!(code(&qjoin(&["decide", "0", "1"])), 2);
    assert_eq!(code(&qjoin(&["decide", "", "1"])), 2);
}

#[test]
fn realize_small_edge() {
    let out = qjoin(&["realize", "1", "1", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let mut lines = stdout(&out);
    let first = lines.lines().next().unwrap().to_string();
    let matrix: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(matrix["n"], 2);
    assert_eq!(matrix["data"].as_array().unwrap().len(), 4);
    lines = lines.lines().nth(1).unwrap().to_string();
    let report: serde_json::Value = serde_json::from_str(&lines).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn realize_writes_file_that_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    let out = qjoin(&["realize", "2,2", "1,1", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(path.exists());

    let out = qjoin(&["verify", path.to_str().unwrap(), "2,2", "1,1"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn realize_rejects_q3_with_exit_3() {
    let out = qjoin(&["realize", "2,2", "1,1,1"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("q=3"));
}

#[test]
fn realize_reports_inconclusive_with_exit_4() {
    // an unreachable residual tolerance exhausts the retry budget
    let out = qjoin(&["realize", "2,2", "1,1", "--tol", "1e-18"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("inconclusive"));

    let out = qjoin(&["realize", "2,2", "1,1", "--tol", "-1"]);
    assert_eq!(code(&out), 2);
}

fn write_matrix_file(path: &Path, n: usize, data: Vec<f64>) {
    let value = serde_json::json!({ "n": n, "data": data });
    std::fs::write(path, serde_json::to_string(&value).unwrap()).unwrap();
}

#[test]
fn verify_cycle_fixture_passes_and_perturbations_fail() {
    let dir = tempfile::tempdir().unwrap();
    let x = cycle_join_matrix();
    let path = dir.path().join("fixture.json");
    write_matrix_file(&path, x.n(), x.data().to_vec());

    let out = qjoin(&["verify", path.to_str().unwrap(), "8", "4", "--pattern", "cycles"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["pass"], true);

    // zero out one cross pair (both triangle entries): named violation, exit 1
    let mut data = x.data().to_vec();
    let n = x.n();
    data[8] = 0.0; // (0, 8)
    data[8 * n] = 0.0; // (8, 0)
    let bad = dir.path().join("perturbed.json");
    write_matrix_file(&bad, n, data);
    let out = qjoin(&["verify", bad.to_str().unwrap(), "8", "4", "--pattern", "cycles"]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["pass"], false);
    let violations = report["pattern_violations"].as_array().unwrap();
    assert!(violations
        .iter()
        .any(|v| v["i"] == 0 && v["j"] == 8 && v["expected_nonzero"] == true));
}

#[test]
fn verify_identity_fails_on_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("identity.json");
    let mut data = vec![0.0; 4];
    data[0] = 1.0;
    data[3] = 1.0;
    write_matrix_file(&path, 2, data);
    let out = qjoin(&["verify", path.to_str().unwrap(), "1", "1"]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["pattern_ok"], false);
}

#[test]
fn crosscheck_small_run() {
    let out = qjoin(&["crosscheck", "--limit", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("checked=9 disagreements=0"));
}

#[test]
fn crosscheck_default_scale_is_clean() {
    let out = qjoin(&["crosscheck", "--limit", "6"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("checked=841 disagreements=0"));
}

#[test]
fn realize_accepts_and_validates_lambda_overrides() {
    let out = qjoin(&["realize", "1", "1", "--lambda", "-1,0.5,1"]);
    assert_eq!(code(&out), 0);

    let out = qjoin(&["realize", "1", "1", "--lambda", "-1,1"]);
    assert_eq!(code(&out), 2); // witness has three rows

    let out = qjoin(&["realize", "1", "1", "--lambda", "-1,2,1"]);
    assert_eq!(code(&out), 2); // interior value outside (-1, 1)
}

#[test]
fn crosscheck_writes_csv_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("table.csv");
    let cache_path = dir.path().join("cache.jsonl");
    let out = qjoin(&[
        "crosscheck",
        "--limit",
        "3",
        "--csv",
        csv_path.to_str().unwrap(),
        "--cache",
        cache_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv_text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv_text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,n,q_formula,q_brute,mu_formula,mu_brute,agree"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 36); // six canonical tuples of total <= 3
    assert!(rows.iter().all(|row| row.ends_with("true")));
    assert!(cache_path.exists());
    assert_eq!(std::fs::read_to_string(&cache_path).unwrap().lines().count(), 36);

    // second run reuses the cache
    let out = qjoin(&[
        "crosscheck",
        "--limit",
        "3",
        "--cache",
        cache_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&cache_path).unwrap().lines().count(), 36);
}

#[test]
fn crosscheck_reads_cache_path_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache_path = dir.path().join("env-cache.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_qjoin"))
        .args(["crosscheck", "--limit", "2"])
        .env("QJOIN_CACHE", &cache_path)
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0);
    assert!(cache_path.exists());
    assert_eq!(std::fs::read_to_string(&cache_path).unwrap().lines().count(), 9);
}

#[test]
fn batch_decides_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    let output = dir.path().join("out.jsonl");
    std::fs::write(
        &input,
        concat!(
            "{\"m\": [2,2], \"n\": [1,1,1]}\n",
            "{\"m\": [2,2], \"n\": [1,1]}\n",
            "{\"m\": [2,2], \"n\": [1,1,1,1]}\n",
        ),
    )
    .unwrap();
    let out = qjoin(&[
        "batch",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&output).unwrap();
    let qs: Vec<i64> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["q"].as_i64().unwrap())
        .collect();
    assert_eq!(qs, vec![3, 2, 2]);
}

#[test]
fn batch_empty_input_gives_empty_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    let output = dir.path().join("out.jsonl");
    std::fs::write(&input, "").unwrap();
    let out = qjoin(&[
        "batch",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&output).unwrap(), "");
}

#[test]
fn batch_malformed_line_yields_error_object_and_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    let output = dir.path().join("out.jsonl");
    std::fs::write(
        &input,
        "{\"m\": [1], \"n\": [1]}\nnot json\n{\"m\": [0], \"n\": [1]}\n",
    )
    .unwrap();
    let out = qjoin(&[
        "batch",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 5);
    let text = std::fs::read_to_string(&output).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3); // one output line per input line
    assert!(serde_json::from_str::<serde_json::Value>(lines[0]).unwrap()["q"].is_number());
    assert!(serde_json::from_str::<serde_json::Value>(lines[1]).unwrap()["error"].is_string());
    assert!(serde_json::from_str::<serde_json::Value>(lines[2]).unwrap()["error"].is_string());
}

/// Parse table rows "  <label> <cell> <cell> ..." into (label, cells).
fn parse_table_rows(text: &str) -> Vec<(usize, Vec<u8>)> {
    text.lines()
        .filter(|l| !l.contains(':') && !l.contains('\\'))
        .map(|l| {
            let mut nums = l.split_whitespace().map(|t| t.parse::<usize>().unwrap());
            let label = nums.next().unwrap();
            (label, nums.map(|v| v as u8).collect())
        })
        .collect()
}

#[test]
fn discrete_table_matches_the_piecewise_rule() {
    let out = qjoin(&["table", "--example", "discrete", "--params", "s=2,a=1..4,b=1..8"]);
    assert_eq!(code(&out), 0);
    for (a, cells) in parse_table_rows(&stdout(&out)) {
        for (b_idx, &q) in cells.iter().enumerate() {
            let b = b_idx + 1;
            let expected = if b == a || b == 2 * a { 2 } else { 3 };
            assert_eq!(q, expected, "s=2 a={a} b={b}");
        }
    }

    let out = qjoin(&["table", "--example", "discrete", "--params", "s=3,a=2,b=1..10"]);
    assert_eq!(code(&out), 0);
    let rows = parse_table_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    let (_, cells) = &rows[0];
    let twos: Vec<usize> = cells
        .iter()
        .enumerate()
        .filter_map(|(i, &q)| (q == 2).then_some(i + 1))
        .collect();
    assert_eq!(twos, vec![2, 3, 4, 5, 6]); // a <= b <= s*a
}

#[test]
fn km_connected_table_matches_the_threshold() {
    let out = qjoin(&["table", "--example", "km-connected", "--params", "m=4,l=1..6"]);
    assert_eq!(code(&out), 0);
    let rows = parse_table_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    let (m, cells) = &rows[0];
    assert_eq!(*m, 4);
    for (l_idx, &q) in cells.iter().enumerate() {
        let l = l_idx + 1;
        assert_eq!(q, if l <= 4 { 2 } else { 3 }, "l={l}");
    }
}
