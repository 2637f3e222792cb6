//! End-to-end checks of the binary: command examples, header format and
//! exit codes.

use std::process::Command;

fn quasispec(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_quasispec"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn cf_golden_emits_fibonacci_denominators() {
    let out = quasispec(&["cf", "--alpha", "golden", "--terms", "20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let q_column: Vec<u64> = text
        .lines()
        .filter(|line| !line.starts_with('#') && !line.starts_with('n'))
        .map(|line| line.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    let expected = [1u64, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
    assert!(q_column.len() >= expected.len());
    assert_eq!(&q_column[..expected.len()], &expected);
}

#[test]
fn free_spectrum_has_measure_four() {
    let out = quasispec(&[
        "spectrum",
        "--lambda",
        "0",
        "--alpha",
        "55/89",
        "--theta-grid",
        "4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let measure_line = text
        .lines()
        .find(|line| line.starts_with("# measure:"))
        .expect("measure in summary");
    let measure: f64 = measure_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((measure - 4.0).abs() < 1e-6, "{measure}");
}

#[test]
fn outputs_carry_version_and_config_hash() {
    let out = quasispec(&["cf", "--alpha", "1/3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# quasispec v"));
    assert!(text.contains("# config-hash: "));
    assert!(text.contains("# frequency = 1/3"));
}

#[test]
fn config_errors_exit_with_status_two() {
    let out = quasispec(&["lyapunov", "--alpha", "2.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = quasispec(&["spectrum", "--lambda", "1", "--alpha", "golden"]);
    assert_eq!(out.status.code(), Some(2));
    let out = quasispec(&["cf", "--alpha", "golden", "--set", "nonsense=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_mode_is_well_formed() {
    let out = quasispec(&["cohomology", "--coupling", "0,2", "--alpha", "golden", "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["command"], "cohomology");
    assert!(doc["summary"]["residual_slope"].as_f64().unwrap() >= 0.9);
    assert!(doc["tables"]["h_coefficients"].as_array().unwrap().len() >= 3);
}
