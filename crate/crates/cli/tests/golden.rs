//! End-to-end CLI checks: subcommands behave like direct library calls,
//! reports are byte-stable with --workers 1, exit codes follow the
//! success / negative-verdict / usage convention.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prgames"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("prgames-golden");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn dhj_coeff_text_report() {
    let out = run(&["dhj", "coeff", "--r", "2", "--n", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("coefficient = 1/2"));
    assert!(text.contains("verdict: computed"));
    // byte-stable across runs
    let again = run(&["dhj", "coeff", "--r", "2", "--n", "2"]);
    assert_eq!(text, String::from_utf8(again.stdout).unwrap());
}

#[test]
fn json_report_shape() {
    let out = run(&["--format", "json", "hj", "coeff", "--r", "2", "--n", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["subcommand"], "hj coeff");
    assert_eq!(v["values"]["coefficient"], "2");
    assert!(v.get("timing_ms").is_none(), "timing must be off by default");
}

#[test]
fn cert_verify_round_trip_and_negative_exit() {
    let good = write_temp(
        "good.cert",
        "cert 2\ninit 0 0\ndouble 1:0 2:0\ncollapse keep 1:0 2:0 map 1:1->0 2:1->0\n",
    );
    let out = run(&["cert", "verify", good.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("edges = 1"));

    // tampered collapse breaks an edge; exit code 1 with the step index
    let bad = write_temp(
        "bad.cert",
        "cert 2\ninit 0 0\ndouble 1:0 2:0\ncollapse keep 1:0 1:1 2:0 map 2:1->0\n",
    );
    let out = run(&["cert", "verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("invalid certificate"));
    assert!(text.contains("step"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["cert", "verify", "/nonexistent/x.cert"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cycle_verify_single_check() {
    let out = run(&["cycle", "verify", "--n", "12", "--check", "ad", "--workers", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("|E(A,D)| = 1, V = 12: SUCCESS"));
}

#[test]
fn cycle_verify_failure_dumps_counterexample() {
    let out = run(&["cycle", "verify", "--n", "8", "--check", "natural"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAILURE"));
    assert!(text.contains("mapping = "));
}

#[test]
fn sp_certification_pipeline() {
    let graph = write_temp(
        "c4.hg",
        "hypergraph 2\nside 1: 0 1\nside 2: 0 1\nedge: 0 0\nedge: 0 1\nedge: 1 0\nedge: 1 1\n",
    );
    let cert_path = std::env::temp_dir().join("prgames-golden/c4.cert");
    let out = run(&[
        "cert",
        "sp",
        graph.to_str().unwrap(),
        "-o",
        cert_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // verify the written certificate against the original graph
    let out = run(&[
        "cert",
        "verify",
        cert_path.to_str().unwrap(),
        "--expect-iso",
        graph.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("isomorphic to target"));
}

#[test]
fn game_value_from_file() {
    // free AND game: value 3/4
    let mut body = String::from("game 2\nanswers 1: 2\nanswers 2: 2\n");
    for q1 in 0..2u32 {
        for q2 in 0..2u32 {
            body.push_str(&format!("question: {q1} {q2}\n"));
            for a1 in 0..2u32 {
                for a2 in 0..2u32 {
                    if (a1 ^ a2) == (q1 & q2) {
                        body.push_str(&format!("accept {q1} {q2} {a1} {a2}\n"));
                    }
                }
            }
        }
    }
    let game = write_temp("and.game", &body);
    let out = run(&["game", "value", game.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("value = 3/4"));
}

#[test]
fn gs_report_matches_library() {
    let strings = write_temp("equi.strings", "strings 3 3\n123\n132\n213\n231\n312\n321\n");
    let out = run(&["game", "gs", strings.to_str().unwrap(), "--r", "3", "--n", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("measure = 2/9"));
    assert!(text.contains("canonical_acceptance_n1 = 2/9"));
    assert!(text.contains("line = absent"));
}

#[test]
fn hitting_verify_from_files() {
    let cert = write_temp("double.cert", "cert 2\ninit 0 0\ndouble 1:0 2:0\n");
    let target = write_temp(
        "q2.hg",
        "hypergraph 2\nside 1: 0 1\nside 2: 0 1\nedge: 0 1\nedge: 1 0\n",
    );
    let out = run(&[
        "hitting",
        "verify",
        cert.to_str().unwrap(),
        target.to_str().unwrap(),
        "--n",
        "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("failures = 0"));
    assert!(text.contains("inequality holds"));
}

#[test]
fn hypergraph_check_and_hom() {
    let graph = write_temp(
        "q3.hg",
        "hypergraph 3\nside 1: 0 1\nside 2: 0 1\nside 3: 0 1\nedge: 1 0 0\nedge: 0 1 0\nedge: 0 0 1\n",
    );
    let out = run(&["hypergraph", "check", graph.to_str().unwrap(), "--question-set"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("edges = 3"));
    assert!(text.contains("question_set = true"));

    let out = run(&[
        "hypergraph",
        "hom",
        graph.to_str().unwrap(),
        graph.to_str().unwrap(),
        "--count-only",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("count = 4"));
}

#[test]
fn cert_tree_and_normalize() {
    let star = write_temp(
        "star.hg",
        "hypergraph 2\nside 1: 0\nside 2: 0 1 2 3\nedge: 0 0\nedge: 0 1\nedge: 0 2\nedge: 0 3\n",
    );
    let cert_path = std::env::temp_dir().join("prgames-golden/star.cert");
    let out = run(&["cert", "tree", star.to_str().unwrap(), "-o", cert_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("doublings = 3"));

    let out = run(&["cert", "normalize", cert_path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("collapses = 1") || text.contains("collapses = 0"));
}

#[test]
fn game_repeat_and_good_vector_and_lift() {
    // trivial matching-pennies style game: accept iff answers agree
    let mut body = String::from("game 2\nanswers 1: 2\nanswers 2: 2\n");
    for q1 in 0..2u32 {
        for q2 in 0..2u32 {
            body.push_str(&format!("question: {q1} {q2}\n"));
            for a in 0..2u32 {
                body.push_str(&format!("accept {q1} {q2} {a} {a}\n"));
            }
        }
    }
    let game = write_temp("agree.game", &body);
    let rep_path = std::env::temp_dir().join("prgames-golden/agree2.game");
    let out = run(&[
        "game",
        "repeat",
        game.to_str().unwrap(),
        "--n",
        "2",
        "-o",
        rep_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("questions = 16"));
    let out = run(&["game", "value", rep_path.to_str().unwrap()]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("value = 1/1"));

    // the all-identity vector is good for the full winning set
    let qfile = write_temp(
        "k22.hg",
        "hypergraph 2\nside 1: 0 1\nside 2: 0 1\nedge: 0 0\nedge: 0 1\nedge: 1 0\nedge: 1 1\n",
    );
    let vectors = write_temp(
        "full.qv",
        &{
            let mut s = String::from("qvectors 2\n");
            for a in 0..4 {
                for b in 0..4 {
                    s.push_str(&format!("{a} {b}\n"));
                }
            }
            s
        },
    );
    let out = run(&["game", "good-vector", qfile.to_str().unwrap(), vectors.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("good vector found"));

    // lift the always-agree repeated strategy (answer 0 everywhere)
    let mut strat = String::from("strategy 2\n");
    for j in 1..=2 {
        for q in 0..16 {
            strat.push_str(&format!("map {j} {q} 0\n"));
        }
    }
    let sfile = write_temp("agree.strategy", &strat);
    let out = run(&[
        "game",
        "lift",
        game.to_str().unwrap(),
        sfile.to_str().unwrap(),
        "--n",
        "2",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("lifted_value = 1/1"));
}

#[test]
fn coloring_value_from_file() {
    // verifier outputs prover 1's answer: one color is reachable
    let mut body = String::from("coloring 2\nanswers 1: 2\nanswers 2: 2\n");
    for q in [["0", "1"], ["1", "0"]] {
        body.push_str(&format!("question: {} {}\n", q[0], q[1]));
        for a1 in 0..2 {
            for a2 in 0..2 {
                body.push_str(&format!("output {} {} {a1} {a2} {a1}\n", q[0], q[1]));
            }
        }
    }
    let file = write_temp("answer.coloring", &body);
    let out = run(&["coloring", "value", file.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("colors = 1"));
}

#[test]
fn bound_nonuniform_report() {
    let out = run(&["bound", "nonuniform", "--alpha", "1/2", "--n", "8", "--f", "exp2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // exp(-1) + 1/4 = 0.6178...
    assert!(text.contains("bound ~ 6.1787"));
}

#[test]
fn hitting_build_report() {
    let cert = write_temp("edge.cert", "cert 2\ninit 0 0\n");
    let target = write_temp(
        "q2b.hg",
        "hypergraph 2\nside 1: 0 1\nside 2: 0 1\nedge: 0 1\nedge: 1 0\n",
    );
    let out = run(&["hitting", "build", cert.to_str().unwrap(), target.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("min_probability = 1/2"));
    assert!(text.contains("min_probability_bound = 1/2"));
    assert!(text.contains("bound holds"));
}

#[test]
fn equi_and_line_pipeline() {
    let equi_path = std::env::temp_dir().join("prgames-golden/equi33.strings");
    let out = run(&[
        "dhj",
        "equi",
        "--r",
        "3",
        "--n",
        "3",
        "-o",
        equi_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // the equidistributed set is line-free: `dhj line` exits 1
    let out = run(&["dhj", "line", equi_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("line-free"));
}
