use std::path::Path;
use std::process::{Command, Output};

use rwgm::metric::Instance;

fn harness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rwgm-harness"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = harness(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

#[test]
fn generate_then_run_writes_trace_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "star.json");
    ok(&["generate", "--family", "star", "--n", "4", "-o", &inst]);
    let loaded: Instance = serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!(loaded.size(), 4);

    let trace = path(dir.path(), "trace.csv");
    let report = path(dir.path(), "report.json");
    ok(&[
        "run",
        "--instance",
        &inst,
        "--algorithm",
        "greedy",
        "-o",
        &trace,
        "--report",
        &report,
    ]);
    let csv = std::fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("episode,step,request_point,server_point,cost"));
    assert_eq!(lines.count(), 4);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["algorithm"], "greedy");
    assert_eq!(report["ratio"]["mean"], 7.0);
}

#[test]
fn randomized_run_reports_every_episode() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "line.json");
    ok(&["generate", "--family", "line", "--n", "6", "--seed", "3", "-o", &inst]);
    let trace = path(dir.path(), "trace.csv");
    let stdout = ok(&[
        "run",
        "--instance",
        &inst,
        "--algorithm",
        "rwgm",
        "--episodes",
        "25",
        "-o",
        &trace,
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["episodes"], 25);
    assert!(report["ratio"]["mean"].as_f64().unwrap() >= 1.0 - 1e-9);
    let rows = std::fs::read_to_string(&trace).unwrap().lines().count();
    assert_eq!(rows, 1 + 25 * 6);
}

#[test]
fn embed_dumps_a_tree_over_server_points() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "e.json");
    ok(&[
        "generate",
        "--family",
        "euclidean",
        "--n",
        "8",
        "--seed",
        "1",
        "-o",
        &inst,
    ]);
    let tree = path(dir.path(), "tree.json");
    ok(&["embed", "--instance", &inst, "--seed", "5", "--dump-tree", &tree]);
    let dump: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&tree).unwrap()).unwrap();
    let nodes = dump["nodes"].as_array().unwrap();
    let total: u64 = nodes.iter().map(|n| n["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total, 8);
    assert_eq!(nodes.iter().filter(|n| n["parent"].is_null()).count(), 1);
    for n in nodes.iter().filter(|n| n["level"] == 0) {
        assert!(n["leaf_point"].is_u64());
    }
}

#[test]
fn sweep_is_reproducible_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.csv");
    let b = path(dir.path(), "b.csv");
    let args = |o: &str| {
        ok(&[
            "sweep",
            "--family",
            "nested-uniform",
            "--sizes",
            "4,8",
            "--algorithms",
            "rwgm,greedy",
            "--episodes",
            "50",
            "--seed",
            "11",
            "-o",
            o,
        ])
    };
    args(&a);
    args(&b);
    let a = std::fs::read(&a).unwrap();
    assert_eq!(a, std::fs::read(&b).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("n,algorithm,mean_ratio,std_error,mean_cost,opt\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn failures_exit_nonzero_with_json_error() {
    let out = harness(&["run", "--instance", "/definitely/missing.json", "--algorithm", "greedy"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].is_string());

    let out = harness(&["generate", "--family", "star", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(!err["error"].as_str().unwrap().is_empty());

    // malformed metric rejected on load
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(
        &bad,
        r#"{"points":["a","b","c"],"dist":[[0,1,5],[1,0,1],[5,1,0]],"servers":[0],"requests":[1]}"#,
    )
    .unwrap();
    let out = harness(&["embed", "--instance", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("triangle"), "{err}");
}
