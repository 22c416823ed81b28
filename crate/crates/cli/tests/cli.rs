use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn motivate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motivate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// The {3,6,7}/10 reduction instance with b = 2.
fn sample(dir: &TempDir) -> String {
    let out = motivate(&["gen", "subset-sum", "--set", "3,6,7", "--target", "10", "--b", "2"]);
    assert_eq!(code(&out), 0);
    write(dir, "sample.json", &stdout(&out))
}

const CHAIN: &str = r#"{"vertices":["s","a","t"],
  "edges":[{"from":"s","to":"a","w":"1"},{"from":"a","to":"t","w":"1/2"},{"from":"s","to":"t","w":"4"}],
  "s":"s","t":"t","r":"3","b":"2"}"#;

#[test]
fn solve_sample_with_one_branching_vertex() {
    let dir = TempDir::new().unwrap();
    let file = sample(&dir);
    let sub = dir.path().join("sub.json");
    let dot = dir.path().join("sol.dot");
    let out = motivate(&[
        "solve",
        &file,
        "-k",
        "1",
        "--emit-subgraph",
        sub.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let sol: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(sol["branching_count"], 1);
    let edges: Vec<(String, String)> = sol["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["from"].as_str().unwrap().into(), e["to"].as_str().unwrap().into()))
        .collect();
    // Items 3 and 7 are taken through their direct c-edges.
    assert!(edges.contains(&("c1".into(), "c2".into())));
    assert!(edges.contains(&("c3".into(), "c4".into())));
    assert!(edges.contains(&("c5".into(), "t".into())));

    // The emitted subgraph is itself motivating without any further choice.
    let sub = sub.to_str().unwrap();
    assert_eq!(code(&motivate(&["simulate", sub])), 0);
    assert_eq!(code(&motivate(&["solve", sub, "-k", "0"])), 1);
    let dot_text = fs::read_to_string(&dot).unwrap();
    assert_eq!(dot_text.matches("penwidth=3").count(), edges.len());
}

#[test]
fn solve_sample_without_branching_fails() {
    let dir = TempDir::new().unwrap();
    let file = sample(&dir);
    let out = motivate(&["solve", &file, "-k", "0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out).trim(), "none");
    assert_eq!(code(&motivate(&["path", &file])), 1);
}

#[test]
fn oracle_agrees_on_sample() {
    let dir = TempDir::new().unwrap();
    let file = sample(&dir);
    assert_eq!(code(&motivate(&["oracle", &file, "-k", "0"])), 1);
    let out = motivate(&["oracle", &file, "-k", "1"]);
    assert_eq!(code(&out), 0);
    let sol: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(sol["branching_count"], 1);
}

#[test]
fn simulate_reports_witness() {
    let dir = TempDir::new().unwrap();
    let file = sample(&dir);
    let out = motivate(&["simulate", &file, "--all-traces"]);
    assert_eq!(code(&out), 1);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["motivating"], false);
    assert_eq!(report["witness"]["vertex"], "c5");
    assert_eq!(report["witness"]["perceived"], "81/80");

    assert_eq!(report["traces"].as_array().unwrap().len(), 1);
}

#[test]
fn simulate_trace_budget() {
    let dir = TempDir::new().unwrap();
    // Two tied routes give two traces.
    let file = write(
        &dir,
        "tie.json",
        r#"{"vertices":["s","a","b","t"],
           "edges":[{"from":"s","to":"a","w":"1"},{"from":"s","to":"b","w":"1"},{"from":"a","to":"t","w":"1"},{"from":"b","to":"t","w":"1"}],
           "s":"s","t":"t","r":"3","b":"2"}"#,
    );
    let out = motivate(&["simulate", &file, "--all-traces", "--budget", "2"]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["traces"].as_array().unwrap().len(), 2);
    assert_eq!(code(&motivate(&["simulate", &file, "--all-traces", "--budget", "1"])), 3);
}

#[test]
fn min_reward_and_path() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "chain.json", CHAIN);
    let out = motivate(&["min-reward", &file]);
    assert_eq!(code(&out), 0);
    // zeta(s) = min(2*1 + 1/2, 2*4) = 5/2, zeta(a) = 1.
    assert_eq!(stdout(&out).trim(), "5/2");
    let out = motivate(&["path", &file]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "length 3/2\npath s a t\n");
}

#[test]
fn usage_and_format_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let cyclic = write(
        &dir,
        "cyclic.json",
        r#"{"vertices":["s","a","t"],
           "edges":[{"from":"s","to":"a","w":"1"},{"from":"a","to":"s","w":"1"},{"from":"a","to":"t","w":"1"}],
           "s":"s","t":"t","r":"1","b":"2"}"#,
    );
    let out = motivate(&["validate", &cyclic]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycle"));

    let garbage = write(&dir, "garbage.json", "{ not json");
    assert_eq!(code(&motivate(&["validate", &garbage])), 2);
    let bad_weight = write(&dir, "bad.json", &CHAIN.replace("\"1/2\"", "\"1/0\""));
    assert_eq!(code(&motivate(&["validate", &bad_weight])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&motivate(&["validate", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&motivate(&["solve"])), 2);
    assert_eq!(code(&motivate(&["bogus"])), 2);
    assert_eq!(code(&motivate(&["solve", &cyclic, "-k", "1", "--budget", "0"])), 2);
    assert_eq!(
        code(&motivate(&["gen", "subset-sum", "--set", "3", "--target", "5", "--b", "1"])),
        2
    );
    assert_eq!(code(&motivate(&["validate", &write(&dir, "ok.json", CHAIN)])), 0);
}

#[test]
fn tiny_budgets_exit_3() {
    let dir = TempDir::new().unwrap();
    let file = sample(&dir);
    assert_eq!(code(&motivate(&["solve", &file, "-k", "1", "--budget", "5"])), 3);
    assert_eq!(code(&motivate(&["oracle", &file, "-k", "1", "--budget", "5"])), 3);
}

#[test]
fn threads_do_not_change_the_answer() {
    let dir = TempDir::new().unwrap();
    let file = sample(&dir);
    let out = motivate(&["solve", &file, "-k", "2", "--threads", "4"]);
    assert_eq!(code(&out), 0);
    let sol: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(sol["branching_count"].as_u64().unwrap() <= 2);
}

#[test]
fn dot_is_deterministic_and_matches_solution() {
    let dir = TempDir::new().unwrap();
    let file = sample(&dir);
    let a = motivate(&["export-dot", &file]);
    let b = motivate(&["export-dot", &file]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("digraph G {"));
    assert!(!text.contains("penwidth"));

    let sol = motivate(&["solve", &file, "-k", "1"]);
    let sol_file = write(&dir, "sol.json", &stdout(&sol));
    let dot_file = dir.path().join("solve.dot");
    motivate(&["solve", &file, "-k", "1", "--dot", dot_file.to_str().unwrap()]);
    let highlighted = motivate(&["export-dot", &file, "--solution", &sol_file]);
    assert_eq!(code(&highlighted), 0);
    assert_eq!(stdout(&highlighted), fs::read_to_string(&dot_file).unwrap());
}

#[test]
fn single_edge_dot() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "edge.json",
        r#"{"vertices":["s","t"],"edges":[{"from":"s","to":"t","w":"3/2"}],"s":"s","t":"t","r":"5","b":"2"}"#,
    );
    let out = motivate(&["export-dot", &file]);
    assert_eq!(
        stdout(&out),
        "digraph G {\n  rankdir=LR;\n  \"s\" [shape=doublecircle];\n  \"t\" [shape=doublecircle];\n  \"s\" -> \"t\" [label=\"3/2\"];\n}\n"
    );
}

#[test]
fn gen_random_is_reproducible_and_valid() {
    let args = ["gen", "random", "--n", "7", "--edges", "12", "--max-w", "4", "--seed", "11"];
    let a = motivate(&args);
    let b = motivate(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "r.json", &stdout(&a));
    assert_eq!(code(&motivate(&["validate", &file])), 0);
}

#[test]
fn gen_subset_sum_roundtrips() {
    let dir = TempDir::new().unwrap();
    let file = sample(&dir);
    let json: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(json["r"], "1");
    assert_eq!(json["b"], "2");
    // s, a0..a3, c1, c1*, .., c3, c3*, c4, c5, t
    assert_eq!(json["vertices"].as_array().unwrap().len(), 14);
    let out = motivate(&["gen", "subset-sum", "--set", "3,6,7", "--target", "10", "--b", "2", "--epsilon", "1/1000"]);
    assert_eq!(code(&out), 0);
    assert_ne!(stdout(&out), fs::read_to_string(&file).unwrap());
}

#[test]
fn hidden_linkage_command() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "link.json",
        r#"{"vertices":["s","a","b","t"],
           "edges":[{"from":"s","to":"a","w":1},{"from":"a","to":"t","w":1},{"from":"s","to":"b","w":3},{"from":"b","to":"t","w":0}],
           "links":[{"source":"s","sink":"t","length":3,"b":"1","r":"3"}]}"#,
    );
    let out = motivate(&["linkage", &file]);
    assert_eq!(code(&out), 0);
    let sol: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(sol["paths"][0], serde_json::json!(["s", "b", "t"]));

    let none = write(&dir, "none.json", &fs::read_to_string(&file).unwrap().replace("\"length\":3", "\"length\":5"));
    assert_eq!(code(&motivate(&["linkage", &none])), 1);
    assert!(!stdout(&motivate(&["--help"])).contains("linkage"));
}

#[test]
fn unreachable_target_has_no_answer() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "split.json",
        r#"{"vertices":["s","a","t"],"edges":[{"from":"s","to":"a","w":"1"}],"s":"s","t":"t","r":"5","b":"2"}"#,
    );
    assert_eq!(code(&motivate(&["min-reward", &file])), 1);
    assert_eq!(code(&motivate(&["simulate", &file])), 1);
    assert_eq!(code(&motivate(&["path", &file])), 1);
    assert_eq!(code(&motivate(&["solve", &file, "-k", "1"])), 1);
    assert_eq!(code(&motivate(&["oracle", &file, "-k", "1"])), 1);
}

