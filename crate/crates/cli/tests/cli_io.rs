//! Exit codes, output formats, and file round trips of the binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn reconlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reconlab"))
        .args(args)
        .env_remove("RECONLAB_CAP")
        .output()
        .expect("binary spawns")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is utf-8")
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("reconlab-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn bounds_json_carries_the_channel_count() {
    let output = reconlab(&["bounds", "--n", "3", "--q", "2", "--e", "0", "--t", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&output)).expect("valid JSON");
    assert_eq!(value["N_te"], "3");
    assert_eq!(value["ball_volume"], "4");
    assert_eq!(value["n"], 3);
}

#[test]
fn larger_counts_stay_decimal_strings() {
    let output = reconlab(&["bounds", "--n", "40", "--q", "9", "--e", "2", "--t", "5"]);
    assert_eq!(output.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&output)).expect("valid JSON");
    let n_te = value["N_te"].as_str().expect("decimal string");
    assert!(n_te.len() > 6, "expected a large count, got {n_te}");
    assert!(n_te.bytes().all(|b| b.is_ascii_digit()));
}

#[test]
fn help_exits_zero_and_unknown_flags_exit_one() {
    assert_eq!(reconlab(&["--help"]).status.code(), Some(0));
    assert_eq!(reconlab(&["bounds", "--help"]).status.code(), Some(0));
    let unknown = reconlab(&["bounds", "--n", "3", "--q", "2", "--t", "1", "--bogus"]);
    assert_eq!(unknown.status.code(), Some(1));
    let bare = reconlab(&[]);
    assert_eq!(bare.status.code(), Some(1));
}

#[test]
fn bad_parameters_exit_one_with_a_reason() {
    let cases: &[&[&str]] = &[
        &["bounds", "--n", "3", "--q", "1", "--t", "1"],
        &["bounds", "--n", "3", "--q", "2", "--e", "1", "--t", "1"],
        &[
            "ball",
            "--q",
            "3",
            "--center",
            "019",
            "--model",
            "substitution",
            "--budgets",
            "1",
        ],
        &[
            "ball",
            "--q",
            "3",
            "--center",
            "012",
            "--model",
            "tunneling",
            "--budgets",
            "1",
        ],
        &[
            "ball",
            "--q",
            "3",
            "--center",
            "012",
            "--model",
            "erasure-substitution",
            "--budgets",
            "1",
        ],
        &[
            "decode",
            "--alg",
            "majority",
            "--batch",
            "/nonexistent/batch.json",
        ],
        &["verify", "--suite", "no-such-suite"],
    ];
    for args in cases {
        let output = reconlab(args);
        assert_eq!(output.status.code(), Some(1), "{args:?}");
        assert!(
            !stderr_of(&output).trim().is_empty(),
            "{args:?} printed no reason"
        );
    }
}

#[test]
fn ball_formats_agree_on_the_word_list() {
    let args = |format: &'static str| {
        vec![
            "ball",
            "--q",
            "5",
            "--center",
            "014",
            "--model",
            "insertion",
            "--budgets",
            "1",
            "--format",
            format,
        ]
    };
    let json_run = reconlab(&args("json"));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&json_run)).expect("valid JSON");
    let json_words: Vec<String> = value["words"]
        .as_array()
        .expect("word array")
        .iter()
        .map(|w| w.as_str().expect("word string").to_string())
        .collect();
    assert_eq!(value["size"], 18);
    assert_eq!(json_words.len(), 18);

    let csv_run = reconlab(&args("csv"));
    let csv = stdout_of(&csv_run);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("word"));
    let csv_words: Vec<String> = lines.map(str::to_string).collect();
    assert_eq!(csv_words, json_words);

    let text_run = reconlab(&args("text"));
    let text = stdout_of(&text_run);
    assert!(text.contains("size = 18"));
    for word in &json_words {
        assert!(text.contains(word.as_str()));
    }
}

#[test]
fn simulate_output_feeds_decode() {
    let batch_path = temp_path("batch.json");
    let batch_file = batch_path.to_str().expect("temp path is utf-8");
    let simulate = reconlab(&[
        "simulate",
        "--q",
        "3",
        "--x",
        "012",
        "--model",
        "erasure",
        "--budgets",
        "1",
        "--n-outputs",
        "3",
        "--seed",
        "7",
        "--out",
        batch_file,
    ]);
    assert_eq!(simulate.status.code(), Some(0));

    let decode = reconlab(&["decode", "--alg", "brute", "--batch", batch_file]);
    assert_eq!(decode.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&decode)).expect("valid JSON");
    assert_eq!(value["outcome"]["status"], "unique");
    assert_eq!(value["outcome"]["candidates"][0], "012");

    let resolve = reconlab(&["decode", "--alg", "erasure", "--batch", batch_file]);
    assert_eq!(resolve.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&resolve)).expect("valid JSON");
    assert_eq!(value["outcome"]["candidates"][0], "012");

    std::fs::remove_file(&batch_path).ok();
}

#[test]
fn simulate_stdout_is_itself_a_readable_batch() {
    let simulate = reconlab(&[
        "simulate",
        "--q",
        "2",
        "--x",
        "0110",
        "--model",
        "substitution",
        "--budgets",
        "1",
        "--n-outputs",
        "4",
        "--seed",
        "3",
    ]);
    assert_eq!(simulate.status.code(), Some(0));
    let batch_path = temp_path("piped-batch.json");
    std::fs::write(&batch_path, stdout_of(&simulate)).expect("temp file writes");
    let decode = reconlab(&[
        "decode",
        "--alg",
        "brute",
        "--batch",
        batch_path.to_str().expect("temp path is utf-8"),
    ]);
    assert_eq!(decode.status.code(), Some(0));
    std::fs::remove_file(&batch_path).ok();
}

#[test]
fn code_files_round_trip_through_check() {
    let code_path = temp_path("code.txt");
    let code_file = code_path.to_str().expect("temp path is utf-8");
    let make = reconlab(&[
        "code", "make-cw", "--n", "7", "--e", "2", "--q", "2", "--out", code_file,
    ]);
    assert_eq!(make.status.code(), Some(0));
    let check = reconlab(&["code", "check", "--file", code_file]);
    assert_eq!(check.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&check)).expect("valid JSON");
    assert_eq!(value["size"], 2);
    assert_eq!(value["min_distance"], 6);
    std::fs::remove_file(&code_path).ok();
}

#[test]
fn caps_flag_and_env_bound_enumerations() {
    let args = [
        "ball",
        "--q",
        "4",
        "--center",
        "0123",
        "--model",
        "substitution",
        "--budgets",
        "2",
    ];
    let mut flagged: Vec<&str> = args.to_vec();
    flagged.extend(["--cap", "5"]);
    let by_flag = reconlab(&flagged);
    assert_eq!(by_flag.status.code(), Some(1));
    assert!(stderr_of(&by_flag).contains("cap"));

    let by_env = Command::new(env!("CARGO_BIN_EXE_reconlab"))
        .args(args)
        .env("RECONLAB_CAP", "5")
        .output()
        .expect("binary spawns");
    assert_eq!(by_env.status.code(), Some(1));
}

#[test]
fn verify_reports_are_format_stable() {
    let json_run = reconlab(&["verify", "--suite", "era-sub-exact", "--max-n", "3"]);
    assert_eq!(json_run.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&json_run)).expect("valid JSON");
    assert_eq!(value["passed"], true);
    assert_eq!(value["suites"][0]["suite"], "era-sub-exact");

    let text_run = reconlab(&[
        "verify",
        "--suite",
        "era-sub-exact",
        "--max-n",
        "3",
        "--format",
        "text",
    ]);
    assert!(stdout_of(&text_run).contains("result: all checks passed"));

    let csv_run = reconlab(&[
        "verify",
        "--suite",
        "era-sub-exact",
        "--max-n",
        "3",
        "--format",
        "csv",
    ]);
    let csv = stdout_of(&csv_run);
    assert!(csv.starts_with("suite,check,pass,detail\n"));
    assert!(csv.lines().count() > 1);
}

#[test]
fn jobs_flag_does_not_change_bytes() {
    let base = reconlab(&[
        "experiment",
        "recovery",
        "--q",
        "3",
        "--x",
        "0120",
        "--model",
        "substitution",
        "--budgets",
        "1",
        "--n-outputs",
        "3",
        "--trials",
        "800",
        "--seed",
        "11",
    ]);
    let sequential = reconlab(&[
        "experiment",
        "recovery",
        "--q",
        "3",
        "--x",
        "0120",
        "--model",
        "substitution",
        "--budgets",
        "1",
        "--n-outputs",
        "3",
        "--trials",
        "800",
        "--seed",
        "11",
        "--jobs",
        "1",
    ]);
    let pooled = reconlab(&[
        "experiment",
        "recovery",
        "--q",
        "3",
        "--x",
        "0120",
        "--model",
        "substitution",
        "--budgets",
        "1",
        "--n-outputs",
        "3",
        "--trials",
        "800",
        "--seed",
        "11",
        "--jobs",
        "3",
    ]);
    assert_eq!(base.status.code(), Some(0));
    assert_eq!(stdout_of(&base), stdout_of(&sequential));
    assert_eq!(stdout_of(&base), stdout_of(&pooled));
}
