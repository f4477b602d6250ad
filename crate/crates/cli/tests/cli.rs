use std::process::Command;

fn sqlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sqlab"))
        .args(args)
        .output()
        .expect("spawn sqlab")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(sqlab(&["--help"]).status.code(), Some(0));
    assert_eq!(sqlab(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(sqlab(&["gauss-check", "--bogus"]).status.code(), Some(1));
    assert_eq!(sqlab(&[]).status.code(), Some(1));
    let missing = sqlab(&["sparse-decompose", "--input", "/nonexistent/f.json", "--e-len", "8"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn failed_check_exits_two_and_still_reports() {
    let out = sqlab(&["gauss-check", "--q-max", "10", "--tol=-1"]);
    assert_eq!(out.status.code(), Some(2));
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["name"], "gauss-check");
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed"));
}

#[test]
fn csv_and_json_carry_the_same_rows() {
    let json = sqlab(&["gauss-check", "--q-max", "12"]);
    let csv = sqlab(&["gauss-check", "--q-max", "12", "--format", "csv"]);
    assert_eq!(json.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let csv = String::from_utf8(csv.stdout).unwrap();
    let rows = rep["rows"].as_array().unwrap();
    // header plus one line per row
    assert_eq!(csv.lines().count(), rows.len() + 1);
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    let want: Vec<f64> = rows[0].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(first, want);
}

#[test]
fn sparse_decompose_reads_a_signal_file() {
    let dir = std::env::temp_dir().join(format!("sqlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.json");
    let mut samples = vec![0.0; 64];
    samples[10..14].fill(1.0);
    std::fs::write(&path, serde_json::json!({"offset": 0, "samples": samples}).to_string()).unwrap();
    let out = sqlab(&["sparse-decompose", "--input", path.to_str().unwrap(), "--e-len", "64"]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let col: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(col.is_object() || col.is_array());
}
