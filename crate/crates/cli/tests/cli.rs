//! End-to-end tests driving the compiled binary: exit codes, file outputs,
//! and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_eqt")
}

static DIR_SEQ: AtomicU32 = AtomicU32::new(0);

/// Fresh scratch directory per test.
fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "eqt-cli-test-{}-{}",
        std::process::id(),
        DIR_SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(bin()).args(args).env(key, value).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const CANONICAL: &str = r#"{
  "m": 2, "n": 2, "k": 2,
  "R": [[1, 0], [0, 2]],
  "C": [[1, 0], [0, 1]],
  "initial": {"row": 1, "counts": [2, 0]},
  "target": {"row": 2, "counts": [0, 2]}
}"#;

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_exact_reports_cost_and_writes_solution() {
    let dir = scratch();
    let inst = write(&dir, "inst.json", CANONICAL);
    let sol = dir.join("sol.json");
    let out = run(&["solve", "-i", path_str(&inst), "-o", path_str(&sol), "--method", "exact"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("cost 2"));
    assert!(stdout(&out).contains("path length 4"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(v["method"], "exact");
    assert_eq!(v["cost"], "2");
    assert_eq!(v["states_explored"], 6);
}

#[test]
fn solve_approx_reports_bound() {
    let dir = scratch();
    let inst = write(&dir, "inst.json", CANONICAL);
    let sol = dir.join("sol.json");
    let out = run(&["solve", "-i", path_str(&inst), "-o", path_str(&sol), "--method", "approx"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("cost 4"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(v["cost"], "4");
    assert_eq!(v["bound"], "32");
    assert_eq!(v["w_star_matrix"][0][1], "2/3");
}

#[test]
fn solve_rejects_non_equilibrium_endpoints() {
    let dir = scratch();
    let bad = CANONICAL.replace(r#""initial": {"row": 1, "counts": [2, 0]}"#,
        r#""initial": {"row": 1, "counts": [0, 2]}"#);
    let inst = write(&dir, "bad.json", &bad);
    let out = run(&["solve", "-i", path_str(&inst), "--method", "exact"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("initial"), "{}", stderr(&out));
}

#[test]
fn solve_auto_respects_state_budget() {
    let dir = scratch();
    let inst = write(&dir, "inst.json", CANONICAL);
    // 6 states fit the default budget: exact.
    let sol = dir.join("auto.json");
    let out = run(&["solve", "-i", path_str(&inst), "-o", path_str(&sol)]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&sol).unwrap().contains("\"method\": \"exact\""));
    // Starve the budget via the environment: auto falls back to approx.
    let out = run_env(
        &["solve", "-i", path_str(&inst), "-o", path_str(&sol)],
        "EQT_STATE_BUDGET",
        "1",
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(std::fs::read_to_string(&sol).unwrap().contains("\"method\": \"approx\""));
    // Forcing exact under the same starvation is a budget stop.
    let out = run(&[
        "solve", "-i", path_str(&inst), "--method", "exact", "--state-budget", "1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_missing_file_is_io_failure() {
    let out = run(&["solve", "-i", "/nonexistent/nowhere.json"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_answers_the_threshold_decision() {
    let dir = scratch();
    let inst = write(&dir, "inst.json", CANONICAL);
    let sol = dir.join("sol.json");
    assert_eq!(
        code(&run(&["solve", "-i", path_str(&inst), "-o", path_str(&sol), "--method", "exact"])),
        0
    );
    // Solution files are valid path files.
    let ok = run(&["verify", "-i", path_str(&inst), "--path", path_str(&sol), "--threshold", "2"]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    assert!(stdout(&ok).contains("cost 2"));
    let over = run(&["verify", "-i", path_str(&inst), "--path", path_str(&sol), "--threshold", "1"]);
    assert_eq!(code(&over), 2);
    // No threshold: validity alone.
    let free = run(&["verify", "-i", path_str(&inst), "--path", path_str(&sol)]);
    assert_eq!(code(&free), 0);

    // Perturb the final state's counts: the path no longer ends at the target.
    let broken = std::fs::read_to_string(&sol).unwrap().replacen(
        "\"counts\": [\n        0,\n        2\n      ]",
        "\"counts\": [\n        1,\n        1\n      ]",
        1,
    );
    assert_ne!(broken, std::fs::read_to_string(&sol).unwrap());
    let bad = write(&dir, "broken.json", &broken);
    let out = run(&["verify", "-i", path_str(&inst), "--path", path_str(&bad)]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
}

#[test]
fn cover_gadget_witness_verifies_at_zero() {
    let dir = scratch();
    let ec = write(&dir, "ec.json", r#"{"s":1,"subsets":[[1,2,3]]}"#);
    let inst = dir.join("cover.json");
    let out = run(&["gen", "exact-cover", "-i", path_str(&ec), "-o", path_str(&inst)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let sol = dir.join("sol.json");
    let out = run(&["solve", "-i", path_str(&inst), "-o", path_str(&sol), "--method", "exact"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("cost 0"));
    let out =
        run(&["verify", "-i", path_str(&inst), "--path", path_str(&sol), "--threshold", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn gen_random_is_byte_deterministic() {
    let dir = scratch();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for out_path in [&a, &b] {
        let out = run(&[
            "gen", "random", "--m", "3", "--n", "3", "--k", "4", "--seed", "1", "-o",
            path_str(out_path),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn gen_knapsack_rejects_out_of_bounds_epsilon() {
    let dir = scratch();
    let ks = write(
        &dir,
        "ks.json",
        r#"{"weights":[1],"values":[1],"W":1,"V":1,"k":1,"epsilon":"1"}"#,
    );
    let out = run(&["gen", "knapsack", "-i", path_str(&ks)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("epsilon"), "{}", stderr(&out));
}

#[test]
fn materialized_line_instance_solves_identically() {
    let dir = scratch();
    let line = dir.join("line.json");
    let out = run(&[
        "gen", "random-line", "--n", "3", "--k", "2", "--seed", "9", "-o", path_str(&line),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let sp = run(&["solve", "-i", path_str(&line)]);
    assert_eq!(code(&sp), 0);
    let sp_cost = stdout(&sp).lines().next().unwrap().to_string();

    let mat = dir.join("mat.json");
    assert_eq!(code(&run(&["materialize", "-i", path_str(&line), "-o", path_str(&mat)])), 0);
    let exact = run(&["solve", "-i", path_str(&mat), "--method", "exact"]);
    assert_eq!(code(&exact), 0);
    let exact_cost = stdout(&exact).lines().next().unwrap().to_string();
    assert_eq!(sp_cost, exact_cost);

    // materialize rejects payoff-matrix inputs.
    assert_eq!(code(&run(&["materialize", "-i", path_str(&mat)])), 1);
}

#[test]
fn bench_reports_gaps_within_bounds() {
    let dir = scratch();
    let corpus = dir.join("corpus");
    std::fs::create_dir_all(&corpus).unwrap();
    write(&corpus, "a-canonical.json", CANONICAL);
    let line = corpus.join("b-line.json");
    assert_eq!(
        code(&run(&[
            "gen", "random-line", "--n", "3", "--k", "2", "--seed", "4", "-o", path_str(&line)
        ])),
        0
    );
    for seed in 0..3 {
        let f = corpus.join(format!("c-rand{seed}.json"));
        assert_eq!(
            code(&run(&[
                "gen", "random", "--m", "2", "--n", "2", "--k", "2", "--seed",
                &seed.to_string(), "-o", path_str(&f)
            ])),
            0
        );
    }
    let csv_path = dir.join("bench.csv");
    let out = run(&["bench", "--corpus", path_str(&corpus), "-o", path_str(&csv_path), "--jobs", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "instance,method,cost,gap,bound,states_explored,wall_ms");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    // Filename order regardless of completion order.
    let names: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(rows[1].starts_with("b-line.json,single-peaked,"));
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        let (gap, bound) = (fields[3], fields[4]);
        if !gap.is_empty() {
            let g = eqt_core::parse_rat(gap).unwrap();
            let b = eqt_core::parse_rat(bound).unwrap();
            assert!(g <= b, "row {row}");
        }
    }
}

#[test]
fn bench_empty_corpus_is_header_only() {
    let dir = scratch();
    let corpus = dir.join("empty");
    std::fs::create_dir_all(&corpus).unwrap();
    let out = run(&["bench", "--corpus", path_str(&corpus)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "instance,method,cost,gap,bound,states_explored,wall_ms\n");
}

#[test]
fn lp_solve_reports_all_statuses() {
    let dir = scratch();
    let optimal = write(
        &dir,
        "opt.json",
        r#"{"objective":[1],"constraints":[{"coeffs":[1],"rel":">=","rhs":2}]}"#,
    );
    let out = run(&["lp-solve", "-i", path_str(&optimal)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"value\": \"2\""));

    let infeasible = write(
        &dir,
        "inf.json",
        r#"{"objective":[1],"constraints":[{"coeffs":[1],"rel":"<=","rhs":-1}]}"#,
    );
    let out = run(&["lp-solve", "-i", path_str(&infeasible)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"infeasible\""));

    let unbounded = write(&dir, "unb.json", r#"{"objective":[-1],"constraints":[]}"#);
    let out = run(&["lp-solve", "-i", path_str(&unbounded)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"unbounded\""));
}

#[test]
fn solve_single_peaked_requires_line_input() {
    let dir = scratch();
    let inst = write(&dir, "inst.json", CANONICAL);
    let out = run(&["solve", "-i", path_str(&inst), "--method", "single-peaked"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line instance"), "{}", stderr(&out));
}

#[test]
fn infeasible_instance_exits_two_with_solution_file() {
    // Off-diagonal -inf in both matrices blocks every move out of the
    // initial state while both endpoints stay equilibria.
    let text = r#"{
      "m": 2, "n": 2, "k": 1,
      "R": [[0, "-inf"], ["-inf", 0]],
      "C": [[1, "-inf"], ["-inf", 1]],
      "initial": {"row": 1, "counts": [1, 0]},
      "target": {"row": 2, "counts": [0, 1]}
    }"#;
    let dir = scratch();
    let inst = write(&dir, "blocked.json", text);
    let sol = dir.join("sol.json");
    let out = run(&["solve", "-i", path_str(&inst), "-o", path_str(&sol)]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stdout(&out).contains("cost inf"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(v["cost"], "inf");
    assert_eq!(v["method"], "exact");
}
