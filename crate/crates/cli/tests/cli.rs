//! End-to-end tests of the `hscoh` binary: exact output contracts, exit
//! codes, error codes, and byte-identical output across worker counts.

use std::io::Write;
use std::process::{Command, Output};

fn hscoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hscoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn temp_file(contents: &str) -> std::path::PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!(
        "hscoh-cli-test-{}-{:x}.json",
        std::process::id(),
        contents.len() * 31 + contents.bytes().map(usize::from).sum::<usize>()
    ));
    let mut f = std::fs::File::create(&path).expect("temp file");
    f.write_all(contents.as_bytes()).expect("write temp file");
    path
}

#[test]
fn bound_contract_exact_output() {
    let out = hscoh(&[
        "homotopy", "bound", "--p", "2", "--gc", "1", "--tau", "1", "--eps", "1",
    ]);
    assert!(out.status.success());
    assert_eq!(out.stdout, b"{\"m\":2}\n");
}

#[test]
fn scenario_ex24_reports_dimensions() {
    let out = hscoh(&["scenario", "ex2.4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["H1_G"], 1);
    assert_eq!(v["H_H"], serde_json::json!([0, 0, 0]));
    assert_eq!(v["pass"], true);
}

#[test]
fn unknown_scenario_exits_1_with_code() {
    let out = hscoh(&["scenario", "no-such-thing"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["code"], "unknown-scenario");
}

#[test]
fn schema_violation_exits_1_with_code() {
    let path = temp_file(r#"{"group": {"degree": 3, "generators": [[1,2,0]]}, "bogus": 1}"#);
    let out = hscoh(&["finite", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["code"], "schema");
}

#[test]
fn finite_trivial_group_gives_full_invariants() {
    let path = temp_file(
        r#"{"group": {"degree": 2, "generators": [[0,1]]},
            "module": {"p": 5, "matrices": [[[1,0],[0,1]]]},
            "maxDegree": 1}"#,
    );
    let out = hscoh(&["finite", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["dims"], serde_json::json!([2, 0]));
}

#[test]
fn finite_sign_module_dimensions() {
    let path = temp_file(
        r#"{"group": {"degree": 3, "generators": [[1,2,0],[1,0,2]]},
            "module": {"p": 3, "matrices": [[[1]],[[2]]]},
            "subgroup": [[1,2,0]],
            "maxDegree": 2}"#,
    );
    let finite = hscoh(&["finite", "--file", path.to_str().unwrap()]);
    assert_eq!(finite.status.code(), Some(0));
    assert_eq!(stdout_json(&finite)["dims"], serde_json::json!([0, 1, 1]));
    let e2 = hscoh(&["e2", "--file", path.to_str().unwrap()]);
    assert_eq!(e2.status.code(), Some(0));
    assert_eq!(stdout_json(&e2)["inf_res_exact"], true);
    std::fs::remove_file(&path).ok();
}

#[test]
fn output_is_byte_identical_across_jobs() {
    for args in [
        vec!["scenario", "ex2.4"],
        vec!["scenario", "ex5.4-p2"],
        vec!["padic", "gain", "--p", "3", "--prec", "26"],
        vec!["suite", "--criterion", "1"],
    ] {
        let one = hscoh(&[&["--jobs", "1"], args.as_slice()].concat());
        let four = hscoh(&[&["--jobs", "4"], args.as_slice()].concat());
        assert_eq!(one.status.code(), four.status.code(), "exit for {args:?}");
        assert_eq!(one.stdout, four.stdout, "stdout for {args:?}");
    }
}
