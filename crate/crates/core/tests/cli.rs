//! End-to-end runs of the command-line tool.

use std::path::PathBuf;
use std::process::Command;

fn config(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn vacalc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_vacalc")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn normal_form_of_fermion_word() {
    let (code, out, _) = vacalc(&["normal-form", &config("ferm.cfg"), "a(-1)a(-2)vac"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "-1 * a(-2)a(-1)vac");
}

#[test]
fn dimension_table() {
    let (code, out, _) = vacalc(&["dim", &config("ferm.cfg"), "2a", "4..12"]);
    assert_eq!(code, 0);
    let dims: Vec<&str> = out.lines().map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(dims, ["1", "0", "1", "0", "2", "0", "2", "0", "3"]);
}

#[test]
fn embedding_of_minimal_word() {
    let (code, out, _) = vacalc(&["embed", &config("ferm.cfg"), "a(-2)a(-1)vac"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "v[2a]");
}

#[test]
fn products_and_bases() {
    let (code, out, _) = vacalc(&["product", &config("neg.cfg"), "a", "-1", "b"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "a(-1)b(-1)vac");
    let (code, out, _) = vacalc(&["basis", &config("neg.cfg"), "a+b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    let (code, out, _) = vacalc(&["normal-form", &config("a2.lattice"), "(a [0] b)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "a(0)b(-1)vac");
    let (_, out, _) = vacalc(&["normal-form", &config("a2.lattice"), "(a [1] b)"]);
    assert_eq!(out.trim(), "0");
}

#[test]
fn machine_output() {
    let (code, out, _) = vacalc(&["--format", "machine", "normal-form", &config("ferm.cfg"), "a(-1)a(-2)vac"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["terms"][0]["coeff"], "-1");
    let (code, out, _) = vacalc(&["verify", "bozfer", "--format", "machine"]);
    assert_eq!(code, 0);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["suite", "id", "expected", "computed", "pass"] {
            assert!(v.get(key).is_some(), "missing {key} in {line}");
        }
        assert_eq!(v["suite"], "bozfer");
    }
}

#[test]
fn suites_pass_and_are_deterministic() {
    let (code, first, _) = vacalc(&["dong", &config("neg.cfg"), "3"]);
    assert_eq!(code, 0);
    let (_, second, _) = vacalc(&["dong", &config("neg.cfg"), "3"]);
    assert_eq!(first, second);
    let (code, out, _) = vacalc(&["locfun", &config("free2.cfg"), "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("expected=4 computed=4"));
    let (code, _, _) = vacalc(&["verify", "presentation", "--config", &config("a2.lattice")]);
    assert_eq!(code, 0);
}

#[test]
fn exit_codes() {
    let (code, _, err) = vacalc(&["normal-form", &config("ferm.cfg"), "a(-1"]);
    assert_eq!(code, 1);
    assert!(err.contains("offset 4"));
    let (code, _, err) = vacalc(&["normal-form", &config("ferm.cfg"), "q(-1)vac"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown generator"));
    let (code, _, _) = vacalc(&["dim", &config("ferm.cfg"), "2a", "4..x"]);
    assert_eq!(code, 1);
    let (code, _, _) = vacalc(&["locfun", &config("neg.cfg"), "3"]);
    assert_eq!(code, 2);
    let (code, _, _) = vacalc(&["embed", "/nonexistent.cfg", "vac"]);
    assert_eq!(code, 2);
    let (code, _, _) = vacalc(&["dim", &config("ferm.cfg"), "-a", "0..3"]);
    assert_eq!(code, 2);
}
