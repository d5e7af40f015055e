use std::path::PathBuf;
use std::process::{Command, Output};

use antparse_core::{is_goal, parse_grammar, replay, TraceRecord};
use serde_json::Value;

fn grammar_path(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "grammars", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn example() -> String {
    grammar_path("example.grammar")
}

fn antparse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antparse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn recognize_worked_example() {
    let g = example();
    let o = antparse(&["recognize", "--grammar", &g, "--input", "a b b c d e", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("accepted: 4 steps, 3 hops"), "{out}");
    assert!(out.contains("S -> a A c B e at 0: a A c B e => S"), "{out}");
}

#[test]
fn recognize_rejects_non_member() {
    let g = example();
    let o = antparse(&["recognize", "--grammar", &g, "--input", "a c e", "--iters", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not accepted within budget"));
}

#[test]
fn usage_and_load_errors_exit_2() {
    let o = antparse(&["recognize", "--input", "a c e"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--grammar"));

    let o = antparse(&["recognize", "--grammar", "no/such.grammar", "--input", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no/such.grammar"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.grammar");
    std::fs::write(&bad, "start: S\nS -> a\nA ->\n").unwrap();
    let bad = bad.to_string_lossy();
    let o = antparse(&["oracle", "--grammar", &bad, "--input", "a"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.grammar") && err.contains("line 3"), "{err}");

    let g = example();
    let o = antparse(&["recognize", "--grammar", &g, "--input", "a x c"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown symbol `x`"));

    let o = antparse(&["recognize", "--grammar", &g, "--input", "a", "--q0", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_reports() {
    let g = example();
    let o = antparse(&["oracle", "--grammar", &g, "--input", "a b c d e"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("member: 3 steps"));

    let o = antparse(&["oracle", "--grammar", &g, "--input", "a c e"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not a member"));

    let o = antparse(&["oracle", "--grammar", &g, "--input", "S", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["member"], true);
    assert_eq!(v["shortest_steps"], 0);

    let o = antparse(&["oracle", "--grammar", &g, "--input", "abbcde", "--chars", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["shortest_steps"], 4);
    assert_eq!(v["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn oracle_budget_exits_3() {
    let g = example();
    let o = antparse(&["oracle", "--grammar", &g, "--input", "a b b c d e", "--max-states", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget exceeded"));
}

#[test]
fn json_trace_replays_and_is_reproducible() {
    let g = example();
    let args = [
        "recognize", "--grammar", &g, "--input", "a b b c d e", "--seed", "7", "--iters", "80",
        "--json", "--trace",
    ];
    let first = antparse(&args);
    assert_eq!(first.status.code(), Some(0));
    let second = antparse(&args);
    assert_eq!(first.stdout, second.stdout);
    let mut parallel_args = args.to_vec();
    parallel_args.push("--parallel");
    assert_eq!(antparse(&parallel_args).stdout, first.stdout);

    let trace: TraceRecord = serde_json::from_str(&stdout(&first)).unwrap();
    assert!(trace.accepted);
    assert_eq!(trace.seed, 7);
    assert_eq!(trace.config.n_iterations, 80);
    assert_eq!(trace.iterations.as_ref().map(Vec::len), Some(80));
    let grammar = parse_grammar(&std::fs::read_to_string(&g).unwrap()).unwrap();
    let (input, derivation) = trace.decode(&grammar).unwrap();
    assert!(is_goal(&replay(&grammar, &derivation, &input).unwrap(), &grammar));
    assert_eq!(trace.steps, 4);
    assert_eq!(trace.hops, 3);
}

#[test]
fn goal_input_accepted_with_empty_derivation() {
    let g = example();
    let o = antparse(&["recognize", "--grammar", &g, "--input", "S", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["accepted"], true);
    assert_eq!(v["derivation"].as_array().unwrap().len(), 0);
}

#[test]
fn bench_streams_lines_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("inputs.txt");
    std::fs::write(&inputs, "# sweep\na b b c d e\na x e\n\na c e\n").unwrap();
    let inputs = inputs.to_string_lossy();
    let g = example();
    let args = [
        "bench", "--grammar", &g, "--inputs", &inputs, "--seeds", "4", "--iters", "60",
        "--no-timing",
    ];
    let o = antparse(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    // One skipped line, 2 inputs x 4 seeds, one summary.
    assert_eq!(lines.len(), 1 + 8 + 1);
    assert_eq!(lines[0]["input"], "a x e");
    assert!(lines[0]["error"].as_str().unwrap().contains("unknown symbol"));
    let summary = lines.last().unwrap();
    assert_eq!(summary["summary"], true);
    assert_eq!(summary["skipped"], 1);
    assert_eq!(summary["runs"], 8);
    assert_eq!(summary["soundness_violations"], 0);
    for l in &lines[1..9] {
        assert!(l.get("millis").is_none());
        if l["input"] == "a c e" {
            assert_eq!(l["accepted"], false);
            assert!(l["oracle_steps"].is_null());
        } else {
            assert_eq!(l["oracle_steps"], 4);
        }
    }
    assert_eq!(antparse(&args).stdout, o.stdout);

    // Parallel sweeps may reorder lines but not change them.
    let mut par = args.to_vec();
    par.push("--parallel");
    let p = antparse(&par);
    let mut a: Vec<String> = stdout(&o).lines().map(String::from).collect();
    let mut b: Vec<String> = stdout(&p).lines().map(String::from).collect();
    assert_eq!(a.last(), b.last());
    a.sort();
    b.sort();
    assert_eq!(a, b);
}

#[test]
fn bench_empty_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("empty.txt");
    std::fs::write(&inputs, "# nothing\n\n").unwrap();
    let g = example();
    let o = antparse(&["bench", "--grammar", &g, "--inputs", &inputs.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no inputs"));
}
