use std::process::Command;

use lowdisc::cli::{run_command_io, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lowdisc").chain(args.iter().copied());
    let code = run_command_io(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().skip(1).collect()
}

#[test]
fn generate_prints_van_der_corput_prefix() {
    let (code, out, _) = run(&["generate", "--seq", "vdc:b=2", "--n", "4"]);
    assert_eq!(code, EXIT_OK);
    let xs: Vec<f64> = data_rows(&out).iter().map(|l| l.parse().unwrap()).collect();
    assert_eq!(xs, [0.5, 0.25, 0.75, 0.125]);
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Usage"));
    assert_eq!(run(&["--version"]).0, EXIT_OK);
}

#[test]
fn bad_input_is_a_usage_error() {
    assert_eq!(run(&["generate", "--seq", "bogus", "--n", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&["generate", "--seq", "vdc:b=1", "--n", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&["generate", "--seq", "vdc:b=2", "--n", "0:10:x"]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify", "no_such_suite"]).0, EXIT_USAGE);
}

#[test]
fn missing_config_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("absent.json");
    let (code, _, err) = run(&["generate", "--config", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("absent.json"));
}

#[test]
fn paircorr_grid_has_one_row_per_n() {
    let (code, out, _) = run(&["paircorr", "--seq", "kronecker:phi", "--n", "1000:100000:5", "--s", "1", "--alpha", "0.8"]);
    assert_eq!(code, EXIT_OK);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 5);
    let ns: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(ns, ["1000", "3162", "10000", "31623", "100000"]);
}

#[test]
fn paircorr_several_s_values() {
    let (code, out, _) = run(&["paircorr", "--seq", "random:seed=5", "--n", "500", "--s", "0.5,1,2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(data_rows(&out).len(), 3);
}

#[test]
fn deviation_vanishes_for_golden_fibonacci() {
    let (code, out, _) = run(&["paircorr", "--seq", "kronecker:phi", "--n", "987", "--deviation", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("N,alpha,K,F,argmax_s"));
    assert_eq!(data_rows(&out).len(), 1);
}

#[test]
fn three_gap_suite_passes() {
    let (code, out, _) = run(&["verify", "three_gap", "--trials", "50", "--max-n", "2000"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["failures"], 0);
    assert!(v["passed"].as_u64().unwrap() >= 50);
}

#[test]
fn output_is_byte_reproducible() {
    for args in [
        &["verify", "three_gap", "--trials", "5", "--max-n", "300", "--seed", "9"][..],
        &["gaps", "--seq", "random:seed=2", "--n", "10,20", "--classify"][..],
        &["discrepancy", "--seq", "kronecker:sqrt2", "--n", "64,128"][..],
    ] {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn json_and_csv_carry_the_same_values() {
    let base = ["gaps", "--seq", "kronecker:phi", "--n", "5,13,20"];
    let (_, csv, _) = run(&[&base[..], &["--format", "csv"]].concat());
    let (_, json, _) = run(&[&base[..], &["--format", "json"]].concat());
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["command"], "gaps");
    let rows = v["rows"].as_array().unwrap();
    let lines = data_rows(&csv);
    assert_eq!(rows.len(), lines.len());
    for (row, line) in rows.iter().zip(lines) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(row["n"].as_u64().unwrap().to_string(), f[0]);
        assert_eq!(row["multiplicity"].as_u64().unwrap().to_string(), f[3]);
        let len: f64 = f[2].parse().unwrap();
        assert_eq!(row["length"].as_f64().unwrap(), len);
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"seq": "vdc:b=3", "n": "3"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let (code, out, _) = run(&["generate", "--config", cfg]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(data_rows(&out).len(), 3);
    assert!(data_rows(&out)[0].starts_with("3.333"));
    let (_, out, _) = run(&["generate", "--config", cfg, "--n", "5"]);
    assert_eq!(data_rows(&out).len(), 5);

    std::fs::write(dir.path().join("bad.json"), r#"{"sequence": "vdc:b=3"}"#).unwrap();
    let bad = dir.path().join("bad.json");
    assert_eq!(run(&["generate", "--config", bad.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn out_flag_writes_data_and_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pts.csv");
    let (code, out, _) = run(&["generate", "--seq", "vdc:b=2", "--n", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1);
    let (_, direct, _) = run(&["generate", "--seq", "vdc:b=2", "--n", "4"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn report_exits_nonzero_when_any_case_failed() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let (code, _, _) = run(&["verify", "three_gap", "--trials", "2", "--max-n", "50", "--out", good.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = run(&["report", good.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["failures"], 0);

    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    doc["suites"][0]["cases"][0]["status"] = "fail".into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let (code, out, _) = run(&["report", good.to_str().unwrap(), bad.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.lines().any(|l| l.contains(",fail,")));
}

#[test]
fn binary_reports_exit_status() {
    let exe = env!("CARGO_BIN_EXE_lowdisc");
    let ok = Command::new(exe).args(["generate", "--seq", "kronecker:phi", "--n", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8(ok.stdout).unwrap().lines().count(), 4);
    let bad = Command::new(exe).args(["generate", "--seq", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert!(!bad.stderr.is_empty());
}
