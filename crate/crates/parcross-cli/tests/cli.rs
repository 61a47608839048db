//! End-to-end tests of the binary: exit codes, deterministic output,
//! field-path error messages, and agreement between the bundled data files
//! and what `fixtures emit` produces today.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const FIXTURES: &[&str] = &[
    "s1",
    "s2",
    "s3",
    "constant-s1-seq",
    "constant-s2-seq",
    "constant-s3-seq",
    "diag-embed-seq",
];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parcross"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn fixtures_list_names_all_bundled_files() {
    let out = run(&["fixtures", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for name in FIXTURES {
        assert!(text.lines().any(|l| l == *name), "missing {name} in list:\n{text}");
    }
}

#[test]
fn emitted_fixtures_match_the_bundled_data_files() {
    for name in FIXTURES {
        let out = run(&["fixtures", "emit", name]);
        assert_eq!(out.status.code(), Some(0), "emit {name} failed");
        let bundled = std::fs::read(data(&format!("{name}.json"))).expect("bundled file");
        assert_eq!(
            out.stdout, bundled,
            "fixtures emit {name} no longer matches tests/data/{name}.json"
        );
    }
}

#[test]
fn bundled_fixtures_validate_cleanly() {
    for name in FIXTURES {
        let path = data(&format!("{name}.json"));
        let out = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "validate {name} exited {:?}: {}",
            out.status.code(),
            stderr_of(&out)
        );
        assert!(stdout_of(&out).contains("verdict: PASS"));
    }
}

#[test]
fn crossed_on_the_half_domain_system_reports_three_scalar_blocks() {
    let path = data("s2.json");
    let out = run(&["crossed", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("[1, 1, 1]"), "missing block structure in:\n{text}");
}

#[test]
fn crossed_report_file_matches_the_golden_bytes() {
    let tmp = std::env::temp_dir().join("parcross_cli_test_s2_crossed.json");
    let out = run(&["crossed", data("s2.json").to_str().unwrap(), "--out", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(&tmp).expect("report written");
    let golden = std::fs::read(data("s2.crossed.report.json")).expect("golden report");
    assert_eq!(written, golden, "crossed report drifted from the golden bytes");
    let _ = std::fs::remove_file(&tmp);
}

#[test]
fn validate_report_file_matches_the_golden_bytes() {
    let tmp = std::env::temp_dir().join("parcross_cli_test_s1_validate.json");
    let out = run(&["validate", data("s1.json").to_str().unwrap(), "--out", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(&tmp).expect("report written");
    let golden = std::fs::read(data("s1.validate.report.json")).expect("golden report");
    assert_eq!(written, golden, "validate report drifted from the golden bytes");
    let _ = std::fs::remove_file(&tmp);
}

#[test]
fn search_that_cannot_reach_epsilon_exits_one() {
    let out = run(&[
        "rokhlin",
        "search",
        data("s2.json").to_str().unwrap(),
        "--k",
        "0",
        "--eps",
        "0.1",
        "--seed",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("verdict: FAIL"));
}

#[test]
fn exact_tower_check_exits_zero() {
    let out = run(&["rokhlin", "check", data("s1.json").to_str().unwrap(), "--eps", "1e-9"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    let input = data("s1.json");
    let args = [
        "rokhlin",
        "search",
        input.to_str().unwrap(),
        "--k",
        "0",
        "--eps",
        "1e-6",
        "--seed",
        "42",
        "--restarts",
        "2",
        "--iters",
        "60",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), second.status.code());
    assert_eq!(first.stdout, second.stdout, "same seed must reproduce the same report");
}

#[test]
fn parse_errors_name_the_offending_field() {
    let dir = std::env::temp_dir();

    let sick = |name: &str, mutate: &dyn Fn(&mut serde_json::Value)| -> PathBuf {
        let mut v: serde_json::Value =
            serde_json::from_slice(&std::fs::read(data("s1.json")).unwrap()).unwrap();
        mutate(&mut v);
        let path = dir.join(format!("parcross_cli_test_{name}.json"));
        std::fs::write(&path, serde_json::to_vec(&v).unwrap()).unwrap();
        path
    };

    let bad_table = sick("bad_table", &|v| {
        v["group"]["table"] = serde_json::json!([[0, 1], [1, 1]]);
    });
    let out = run(&["validate", bad_table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("group.table"), "stderr: {}", stderr_of(&out));

    let bad_unitary = sick("bad_unitary", &|v| {
        v["system"]["action"]["s"]["unitaries"][0] = serde_json::json!([[[1.0], [2.0]], [[0.0]]]);
    });
    let out = run(&["validate", bad_unitary.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("system.action.s.unitaries[0]"),
        "stderr: {}",
        stderr_of(&out)
    );

    let missing_element = sick("missing_element", &|v| {
        v["system"]["action"].as_object_mut().unwrap().remove("s");
    });
    let out = run(&["validate", missing_element.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("system.action") && err.contains("\"s\"") && err.contains("zero"),
        "stderr should point at the missing element and suggest the zero marker: {err}");

    for p in [bad_table, bad_unitary, missing_element] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn wrong_section_for_a_command_is_an_input_error() {
    // crossed needs a system; constant-s1-seq only has a sequence
    let out = run(&["crossed", data("constant-s1-seq.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("\"system\" section"), "stderr: {}", stderr_of(&out));

    // bratteli needs a sequence; s2 only has a system
    let out = run(&["bratteli", data("s2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("\"sequence\" section"), "stderr: {}", stderr_of(&out));
}

#[test]
fn out_of_range_stage_is_an_input_error() {
    let out = run(&[
        "limit-verify",
        data("constant-s1-seq.json").to_str().unwrap(),
        "--stage",
        "99",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("out of range"), "stderr: {}", stderr_of(&out));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["validate", "/nonexistent/nowhere.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sequence_commands_pass_on_bundled_sequences() {
    for (cmd, name) in [
        (vec!["limit-verify"], "constant-s1-seq"),
        (vec!["limit-verify"], "diag-embed-seq"),
        (vec!["globalize-limit"], "constant-s2-seq"),
        (vec!["globalize-limit"], "constant-s3-seq"),
        (vec!["trace", "sequence"], "diag-embed-seq"),
        (vec!["trace", "limit"], "constant-s1-seq"),
        (vec!["bratteli"], "constant-s3-seq"),
    ] {
        let path = data(&format!("{name}.json"));
        let mut args: Vec<&str> = cmd.clone();
        let p = path.to_str().unwrap().to_string();
        args.push(&p);
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{cmd:?} {name} exited {:?}: {}",
            out.status.code(),
            stderr_of(&out)
        );
    }
}

#[test]
fn pushforward_re_certifies_the_tower_at_the_far_stage() {
    let out = run(&[
        "rokhlin",
        "pushforward",
        data("diag-embed-seq.json").to_str().unwrap(),
        "--eps",
        "1e-8",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("defect_inflation"));
    assert!(text.contains("verdict: PASS"));
}
