use std::f64::consts::TAU;
use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radial-gate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

/// Exit code and the parsed single-line error report.
fn failure(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().expect("exit code");
    assert_ne!(code, 0, "{args:?} unexpectedly succeeded");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.trim_end().lines().count(), 1, "stderr: {stderr}");
    let v: Value = serde_json::from_str(stderr.trim_end()).expect("stderr is JSON");
    assert_eq!(v["error"]["code"].as_i64(), Some(code as i64));
    (code, v)
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn classify_2d_log_branch() {
    let v = json(&["classify", "--dim", "2", "--m", "0"]);
    assert_eq!(v["acceptable"], "r^0");
    assert_eq!(v["unacceptable"], "ln kr");
    assert_eq!(v["q_pattern"], "delta^(2)(r)");
    assert_eq!(v["q_derivative_order"], 0);
    assert_eq!(v["behavior"]["has_log_branch"], true);
}

#[test]
fn classify_3d_p_wave() {
    let v = json(&["classify", "--dim", "3", "--l", "1"]);
    assert_eq!(v["acceptable"], "r^1");
    assert_eq!(v["unacceptable"], "r^-2");
    assert_eq!(v["q_pattern"], "d_i delta^(3)(r)");
    assert_eq!(v["unacceptable_normalizable"], false);
    assert!(v["laplacian_anomaly"].is_null());
}

#[test]
fn classify_negative_m() {
    let v = json(&["classify", "--m", "-2"]);
    assert_eq!(v["unacceptable"], "r^-2");
    assert_eq!(v["q_derivative_order"], 2);
}

#[test]
fn irregular_potential_exits_3() {
    let (code, v) = failure(&[
        "classify",
        "--dim",
        "2",
        "--m",
        "0",
        "--potential",
        "power:c=1,k=-2",
    ]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "irregular_potential");
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        &["classify", "--bogus"][..],
        &["classify", "--dim", "3", "--m", "1"],
        &["classify", "--potential", "spline:x=1"],
        &["well", "--a", "-1"],
        &["flux", "--eps", "0"],
        &["verify-anomaly", "--case", "m2", "--eps-list", "0.01,0.02"],
        &["fig1", "--points", "0"],
        &[],
    ] {
        assert_eq!(failure(args).0, 2, "{args:?}");
    }
}

#[test]
fn help_and_version_succeed() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Exit codes:"));
    assert!(run(&["--version"]).status.success());
}

#[test]
fn unwritable_output_exits_1() {
    let (code, _) = failure(&["flux", "--out", "/nonexistent-dir/flux.json"]);
    assert_eq!(code, 1);
}

#[test]
fn invalid_thread_count_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_radial-gate"))
        .args(["flux"])
        .env("RADIAL_GATE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn well_ground_state() {
    let v = json(&["well", "--a", "1", "--m", "0", "--levels", "3"]);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    let e1 = num(&levels[0]["energy"]);
    // j₀,₁²/2
    assert!((e1 - 2.8915929814733).abs() < 1e-9, "{e1}");
    let e: Vec<f64> = levels.iter().map(|l| num(&l["energy"])).collect();
    assert!(e.windows(2).all(|w| w[0] < w[1]));
    for n in v["normalization"].as_array().unwrap() {
        assert!((num(n) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn well_csv_is_long_format() {
    let out = run(&["well", "--levels", "2", "--points", "10", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,r,re_R,im_R");
    assert_eq!(lines.len(), 1 + 2 * 10);
    let last: Vec<f64> = lines[20].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(last[0], 2.0);
    assert_eq!(last[1], 1.0);
    assert!(last[2].abs() < 1e-10, "R(a) = {}", last[2]);
}

#[test]
fn spectrum_matches_closed_form_well() {
    let v = json(&[
        "spectrum",
        "--m",
        "1",
        "--potential",
        "well:a=2",
        "--levels",
        "2",
    ]);
    let w = json(&["well", "--a", "2", "--m", "1", "--levels", "2"]);
    for (s, c) in v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .zip(w["levels"].as_array().unwrap())
    {
        let (s, c) = (num(&s["energy"]), num(&c["energy"]));
        assert!((s - c).abs() < 1e-8 * c, "{s} vs {c}");
    }
}

#[test]
fn spectrum_oscillator_both_forms() {
    for form in ["radial", "reduced"] {
        let v = json(&[
            "spectrum",
            "--potential",
            "power:c=0.5,k=2",
            "--r-max",
            "10",
            "--levels",
            "2",
            "--form",
            form,
        ]);
        let e: Vec<f64> = v["levels"]
            .as_array()
            .unwrap()
            .iter()
            .map(|l| num(&l["energy"]))
            .collect();
        assert!(
            (e[0] - 1.0).abs() < 1e-8 && (e[1] - 3.0).abs() < 1e-8,
            "{form}: {e:?}"
        );
    }
}

#[test]
fn spectrum_from_table() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# harmonic well sampled on a fine grid").unwrap();
    for i in 1..=4000 {
        let r = i as f64 * 2.5e-3;
        writeln!(f, "{r},{}", 0.5 * r * r).unwrap();
    }
    let spec = format!("table:{}", f.path().display());
    let v = json(&[
        "spectrum",
        "--potential",
        &spec,
        "--r-max",
        "10",
        "--levels",
        "1",
    ]);
    let e = num(&v["levels"][0]["energy"]);
    assert!((e - 1.0).abs() < 1e-4, "{e}");
}

#[test]
fn fig1_last_row_is_second_zero() {
    let out = run(&["fig1", "--points", "500"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,xY0sq");
    assert_eq!(lines.len(), 501);
    let last: Vec<f64> = lines[500].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((last[0] - 3.95768).abs() < 5e-5);
    assert!(last[1].abs() < 1e-20);
}

#[test]
fn flux_tends_to_two_pi() {
    let v = json(&["flux", "--alpha", "1e-9", "--eps", "0.1"]);
    assert!((num(&v["flux"]) - TAU).abs() < 1e-7);
    assert_eq!(num(&v["limit"]), TAU);
}

#[test]
fn verify_log_ratio_is_one() {
    let v = json(&["verify-anomaly", "--case", "log"]);
    assert_eq!(v["passed"], true);
    for r in v["runs"][0]["residuals"].as_array().unwrap() {
        let ratio = num(&r["measured"][0]) / num(&r["predicted"][0]);
        assert!((ratio - 1.0).abs() < 1e-6);
    }
}

#[test]
fn verify_smooth_is_anomaly_free() {
    let v = json(&["verify-anomaly", "--case", "smooth", "--m", "2"]);
    assert_eq!(v["passed"], true);
    for r in v["runs"][0]["residuals"].as_array().unwrap() {
        assert!(num(&r["measured"][0]).hypot(num(&r["measured"][1])) < 1e-6);
    }
}

#[test]
fn verify_m2_both_signs() {
    let v = json(&["verify-anomaly", "--case", "m2"]);
    let runs = v["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 2);
    for run in runs {
        for c in run["coefficients"].as_array().unwrap() {
            let want = num(&c["predicted"][0]).hypot(num(&c["predicted"][1]));
            if want > 0.0 {
                assert_eq!(c["x"].as_u64().unwrap() + c["y"].as_u64().unwrap(), 2);
                assert!(num(&c["error"]) < 1e-3);
            }
        }
    }
}

#[test]
fn verify_nonconvergent_exits_4() {
    let (code, _) = failure(&[
        "verify-anomaly",
        "--case",
        "m2",
        "--eps-list",
        "0.9,0.8,0.7",
    ]);
    assert_eq!(code, 4);
}

#[test]
fn pseudo_y0_report() {
    let v = json(&["pseudo-y0"]);
    assert!((num(&v["green_defect"]) - 4.0).abs() < 1e-8);
    assert!((num(&v["kinetic_fit"]["b"]) - 4.0 / std::f64::consts::PI).abs() < 1e-4);
    assert!(num(&v["norm_sq"]) > 0.0);
}

#[test]
fn outputs_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["well", "--levels", "2", "--points", "50"][..],
        &[
            "spectrum",
            "--potential",
            "coulomb2d:Z=1",
            "--r-max",
            "40",
            "--levels",
            "2",
            "--points",
            "40",
        ],
        &["verify-anomaly", "--case", "m1"],
        &["fig1", "--points", "100"],
    ] {
        let mut files = Vec::new();
        for (i, threads) in ["1", "4"].iter().enumerate() {
            let path = dir.path().join(format!("out{i}"));
            let status = Command::new(env!("CARGO_BIN_EXE_radial-gate"))
                .args(args)
                .arg("--out")
                .arg(&path)
                .env("RADIAL_GATE_THREADS", threads)
                .status()
                .unwrap();
            assert!(status.success(), "{args:?}");
            files.push(std::fs::read(&path).unwrap());
        }
        assert!(!files[0].is_empty());
        assert_eq!(files[0], files[1], "{args:?}");
    }
}
