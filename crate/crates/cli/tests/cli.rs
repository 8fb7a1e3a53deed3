use std::path::Path;
use std::process::{Command, Output};

fn swapchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swapchain"))
        .args(args)
        .env_remove("SWAPCHAIN_WORKERS")
        .output()
        .expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--output", p]);
    let out = swapchain(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn scan_initial_csv_contract() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = run_to(
        dir.path(),
        "initial.csv",
        &["scan-initial", "--alpha-min", "0", "--alpha-max", "pi", "--p-min", "0", "--p-max", "1", "--steps", "20"],
    );
    let text = String::from_utf8(bytes).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,p,m_rhoL,m_rhoR,nonviolating"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 400);
    let first: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(first[0], "0.0000000000000000e0");
    // 17 significant digits
    let mantissa = first[2].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
    assert!(rows.iter().all(|r| r.ends_with("true") || r.ends_with("false")));
    let last: Vec<&str> = rows[399].split(',').collect();
    assert_eq!(last[0].parse::<f64>().unwrap(), std::f64::consts::PI);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["scan-activation", "--steps", "24", "--p1", "0.01"];
    let a = run_to(dir.path(), "a.csv", &[&args[..], &["--workers", "1"]].concat());
    let b = run_to(dir.path(), "b.csv", &[&args[..], &["--workers", "4"]].concat());
    let c = run_to(dir.path(), "c.csv", &[&args[..], &["--workers", "4"]].concat());
    assert_eq!(a, b);
    assert_eq!(b, c);

    let args = ["exhaustive", "--p", "0.75", "--alpha", "0.45pi", "--p1", "0.3", "--m-parties", "3", "--format", "json"];
    let a = run_to(dir.path(), "a.json", &[&args[..], &["--workers", "1"]].concat());
    let b = run_to(dir.path(), "b.json", &[&args[..], &["--workers", "3"]].concat());
    assert_eq!(a, b);
}

#[test]
fn critical_number_columns_and_empty_cells() {
    let dir = tempfile::tempdir().unwrap();
    let text = String::from_utf8(run_to(
        dir.path(),
        "nc.csv",
        &["critical-number", "--p", "0.75", "--alphas", "0.35pi,0.45pi", "--p1-min", "0.001", "--p1-max", "0.707", "--steps", "50"],
    ))
    .unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,p1,n_c"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 100);
    // alpha = 0.35 pi lies outside the activating window
    assert!(rows[..50].iter().all(|r| r[2].is_empty()));
    assert!(rows[50..].iter().all(|r| !r[2].is_empty()));
    assert_eq!(rows[99][2], "2");
}

#[test]
fn json_has_config_and_rows() {
    let out = swapchain(&["simulate", "--p", "0.75", "--alpha", "0.45pi", "--p1", "0.3", "--k", "3", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["command"]["name"], "simulate");
    assert_eq!(v["config"]["seed"], 2024);
    assert!(v["config"].get("workers").is_none());
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let q = rows[1]["p_k_simulated"].as_f64().unwrap();
    assert!((q - 0.7141692286092137).abs() < 1e-12);
    assert_eq!(rows[1]["violates"], true);
}

#[test]
fn verify_passes_and_reports() {
    let out = swapchain(&["verify", "--samples", "50", "--seed", "11"]);
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("all-psi chain state"));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("check,evaluated,skipped,max_deviation,tolerance,failures,passed\n"));
    assert!(stdout.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn invalid_configs_fail_with_messages() {
    for args in [
        &["scan-initial", "--steps", "1"][..],
        &["scan-initial", "--alpha-min", "pi", "--alpha-max", "0"],
        &["scan-activation", "--n-list", "2,3", "--steps", "3"],
        &["critical-number", "--p", "0.75", "--alphas", "0.45pi", "--p1-min", "0.5", "--p1-max", "0.2"],
        &["critical-number", "--p", "0.5", "--window-alphas", "3"],
        &["simulate", "--p", "1.5", "--alpha", "0.4pi", "--p1", "0.3"],
        &["exhaustive", "--p", "0.7", "--alpha", "0.4pi", "--p1", "0.3", "--m-parties", "9"],
        &["simulate", "--p", "0.5", "--alpha", "0.4 pie", "--p1", "0.3"],
    ] {
        let out = swapchain(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn unwritable_path_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = swapchain(&["verify", "--samples", "5", "--output", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn workers_env_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_swapchain"))
        .args(["simulate", "--p", "0.75", "--alpha", "0.45pi", "--p1", "0.3", "--k", "2"])
        .env("SWAPCHAIN_WORKERS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_swapchain"))
        .args(["simulate", "--p", "0.75", "--alpha", "0.45pi", "--p1", "0.3"])
        .env("SWAPCHAIN_WORKERS", "many")
        .output()
        .unwrap();
    assert!(!bad.status.success());
}
