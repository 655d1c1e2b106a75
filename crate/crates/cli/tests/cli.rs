use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sse(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sse")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_then_analyze_hypercube() {
    let dir = tempfile::tempdir().unwrap();
    let o = sse(dir.path(), &["gen", "--family", "hypercube", "--k", "3", "--out", "q3.el"]);
    assert_eq!(o.status.code(), Some(0));
    let o = sse(dir.path(), &["analyze", "--graph", "q3.el", "--lambda", "0.3", "--out", "a.json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("dim(V_lambda) 4"), "{out}");
    let a = json(&dir.path().join("a.json"));
    assert_eq!(a["dimension"], 4);
    assert!((a["two_to_inf"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn verify_main_on_complete_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    sse(dir.path(), &["gen", "--family", "complete", "--n", "8", "--out", "k8.el"]);
    let args = ["verify", "main", "--graph", "file:k8.el", "--delta", "0.0625", "--eps", "0.18", "--pairs", "2:4,2:inf", "--seed", "7", "--out", "r.json"];
    let o = sse(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&dir.path().join("r.json"));
    assert_eq!(r["verdict"], "holds");
    assert_eq!(r["claim"], "main_theorem");
    assert_eq!(r["evidence"]["phi_delta"]["exact"], "6/7");
    assert_eq!(r["inputs"]["seed"], 7);
    for key in ["claim", "inputs", "verdict", "evidence", "tolerances", "runtime_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn round_triangle_witness() {
    let dir = tempfile::tempdir().unwrap();
    sse(dir.path(), &["gen", "--family", "clique_union", "--m", "2", "--k", "3", "--out", "cu23.el"]);
    fs::write(dir.path().join("w.json"), "[1, 1, 1, 0, 0, 0]").unwrap();
    let o = sse(dir.path(), &["round", "--graph", "cu23.el", "--witness", "w.json", "--delta", "0.5", "--eps", "0.01", "--out", "s.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("S = {0, 1, 2}, Phi = 0"), "{}", stdout(&o));
    let s = json(&dir.path().join("s.json"));
    assert_eq!(s["certified"], true);
    assert_eq!(s["mu"]["exact"], "1/2");
}

#[test]
fn norm_output_feeds_round() {
    let dir = tempfile::tempdir().unwrap();
    let o = sse(dir.path(), &["norm", "--family", "clique_union:2x3", "--lambda", "0.99", "--p", "2", "--q", "inf", "--out", "n.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = sse(dir.path(), &["round", "--family", "clique_union:2x3", "--witness", "n.json", "--delta", "1/2", "--eps", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Phi = 0"));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["phi"]["exact"], "0");
}

#[test]
fn exit_codes_follow_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let violated = sse(dir.path(), &["verify", "high", "--family", "clique_union:2x3", "--delta", "0.5", "--eps", "0.25", "--pairs", "2:inf"]);
    assert_eq!(violated.status.code(), Some(2));
    let inconclusive = sse(dir.path(), &["verify", "main", "--family", "complete:8", "--delta", "1/16", "--eps", "0.18", "--budget", "1"]);
    assert_eq!(inconclusive.status.code(), Some(3));
    let not_satisfied = sse(dir.path(), &["verify", "main", "--family", "clique_union:2x3", "--delta", "0.5", "--eps", "0.01"]);
    assert_eq!(not_satisfied.status.code(), Some(0));
    assert!(stdout(&not_satisfied).contains("hypothesis_not_satisfied"));
}

#[test]
fn usage_and_input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.el"), "3 2\n0 1\n1 1\n").unwrap();
    let cases: [&[&str]; 6] = [
        &["verify", "main", "--family", "cycle:6", "--graph", "x.el", "--delta", "0.1", "--eps", "0.1"],
        &["verify", "main", "--family", "cycle:6", "--delta", "0.1", "--eps", "0.1", "--bogus"],
        &["analyze", "--graph", "bad.el", "--lambda", "0.5"],
        &["norm", "--family", "cycle:6", "--lambda", "0.5", "--p", "1/2", "--q", "2"],
        &["verify", "main", "--family", "cycle:6", "--delta", "0.1", "--eps", "0.1", "--pairs", "4/3:2"],
        &["analyze", "--lambda", "0.5"],
    ];
    for args in cases {
        let o = sse(dir.path(), args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn identical_runs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["verify", "main", "--family", "random_regular", "--n", "12", "--d", "3", "--delta", "1/16", "--eps", "0.1", "--seed", "3", "--omit-timing"];
    for (i, out) in ["a.json", "b.json"].iter().enumerate() {
        let threads = if i == 0 { "1" } else { "2" };
        let mut args = base.to_vec();
        args.extend(["--threads", threads, "--out", out]);
        assert_eq!(sse(dir.path(), &args).status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    let b = fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn summary_numbers_appear_in_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = sse(dir.path(), &["verify", "easy", "--family", "hypercube:3", "--eps", "0.3", "--out", "e.json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&dir.path().join("e.json"));
    for line in stdout(&o).lines().skip(1) {
        let value = line.split_whitespace().nth(1).unwrap();
        if let Ok(x) = value.parse::<f64>() {
            let key = line.split_whitespace().next().unwrap();
            assert_eq!(r["evidence"][key].as_f64(), Some(x), "{line}");
        }
    }
}

#[test]
fn csv_has_one_row_per_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sse"))
        .current_dir(dir.path())
        .env("SSE_THREADS", "1")
        .args(["verify", "lemmas", "--family", "hypercube:3", "--lambda", "0.3", "--trials", "100", "--format", "csv", "--out", "l.csv"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("l.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("claim,inputs.graph"));
    assert!(lines[1].starts_with("inner_product_lemma,hypercube:3"));
    assert!(lines[2].starts_with("projector_subspace,hypercube:3"));
}

#[test]
fn single_family_sweep_includes_duality_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = sse(dir.path(), &["sweep", "--family", "cycle:8", "--restarts", "4", "--out", "s.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = json(&dir.path().join("s.json"));
    let reports = s.as_array().unwrap();
    // 3 deltas x 3 epsilons for the main verifier, plus 3 epsilons x one dual pair.
    assert_eq!(reports.len(), 12);
    assert_eq!(reports.iter().filter(|r| r["claim"] == "holder_duality").count(), 3);
}

#[test]
fn stdout_is_only_the_report_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let o = sse(dir.path(), &["verify", "easy", "--family", "cycle:6", "--eps", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["claim"], "easy_direction");
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("easy_direction on cycle:6"));
    let o = sse(dir.path(), &["gen", "--family", "cycle:4"]);
    assert!(stdout(&o).starts_with("4 2\n"));
}
