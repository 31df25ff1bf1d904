use std::process::{Command, Output};

use hybrid_eq::bench::{BenchRow, InstanceData};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybrid-eq"))
        .args(args)
        .env_remove("HYBRID_EQ_SEED")
        .output()
        .unwrap()
}

#[test]
fn generate_writes_loadable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    let out = cli(&[
        "generate",
        "--n",
        "4",
        "--seed",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let data = InstanceData::load(&path).unwrap();
    assert_eq!(data.n, 4);
    assert_eq!(data.seed, 9);
    assert_eq!(data.p.len(), 16);

    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["n", "P", "Q", "r", "u_diag", "lo", "hi", "x0", "seed"] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn seed_env_var_overrides_flag() {
    let a = Command::new(env!("CARGO_BIN_EXE_hybrid-eq"))
        .args(["generate", "--n", "3", "--seed", "1"])
        .env("HYBRID_EQ_SEED", "77")
        .output()
        .unwrap();
    let b = cli(&["generate", "--n", "3", "--seed", "77"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn run_reports_convergence() {
    let out = cli(&["run", "--n", "5", "--seed", "2", "--variant", "alg2"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["terminated"]["status"], "converged");
    assert_eq!(report["variant"], "extragradient");
}

#[test]
fn run_hitting_max_iter_exits_two() {
    let out = cli(&[
        "run",
        "--n",
        "5",
        "--seed",
        "2",
        "--variant",
        "alg2",
        "--max-iter",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_json_report() {
    let out = cli(&[
        "bench",
        "--n",
        "3",
        "--reps",
        "2",
        "--variant",
        "alg1",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<BenchRow> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(
        (
            rows[0].variant.as_str(),
            rows[0].n,
            rows[0].n_problems,
            rows[0].failures
        ),
        ("alg1", 3, 2, 0)
    );
}

#[test]
fn bench_csv_header_and_failures() {
    let out = cli(&[
        "bench",
        "--n",
        "4",
        "--reps",
        "2",
        "--variant",
        "alg3",
        "--max-iter",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("variant,n,n_problems,avg_time_s,avg_iterations,failures")
    );
    assert!(lines.next().unwrap().ends_with(",2"));
}

#[test]
fn certify_and_validate() {
    let out = cli(&["certify", "--n", "4", "--pairs", "500"]);
    assert_eq!(out.status.code(), Some(0));
    let out = cli(&["validate", "--n", "4", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"].as_array().unwrap().len() >= 5);
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(!cli(&["run", "--variant", "alg9"]).status.success());
    let out = cli(&["run", "--instance", "/nonexistent/inst.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certify_params_list() {
    let out = cli(&[
        "certify", "--n", "3", "--pairs", "200", "--params", "2,-1,0,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["params"]["beta"], -1.0);
    assert_eq!(cli(&["certify", "--params", "1,0"]).status.code(), Some(1));
}
