//! End-to-end runs of the `ratdyn` binary: output documents, exit codes, seeds.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../systems").join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn ratdyn_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ratdyn"));
    cmd.args(args).env_remove("RATDYN_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
    }
}

fn ratdyn(args: &[&str]) -> Run {
    ratdyn_env(args, &[])
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn square_of_shift_reports_the_difference() {
    let r = ratdyn(&["square", path(&corpus("shift.system"))]);
    assert_eq!(r.code, 0);
    let doc = r.json();
    assert_eq!(doc["schema"], "ratdyn-report/1");
    assert_eq!(doc["command"]["name"], "square");
    assert_eq!(doc["result"]["witness"], "x1 - x2");
    assert_eq!(doc["result"]["new_invariant_found"], true);
    assert!(doc["timing_ms"].is_u64());
    assert_eq!(doc["budget"]["max_num_degree"], 3);
}

#[test]
fn degrees_of_identity_are_bounded() {
    let doc = ratdyn(&["degrees", "--n", "5", path(&corpus("identity.system"))]).json();
    assert_eq!(doc["result"]["degrees"], serde_json::json!([1, 1, 1, 1, 1]));
    assert_eq!(doc["result"]["growth_class"], "bounded");
}

#[test]
fn verify_exit_codes_follow_the_verdict() {
    let double = corpus("double.system");
    let r = ratdyn(&["verify", "--function", "x/y", path(&double)]);
    assert_eq!((r.code, r.json()["result"]["verdict"].clone()), (0, "invariant".into()));
    let r = ratdyn(&["verify", "--function", "x", path(&double)]);
    assert_eq!(
        (r.code, r.json()["result"]["verdict"].clone()),
        (1, "not-invariant".into())
    );
    let r = ratdyn(&[
        "verify",
        "--function",
        "x1 - x2",
        "--power",
        "2",
        path(&corpus("shift.system")),
    ]);
    assert_eq!(r.code, 0);
}

#[test]
fn randomized_verification_is_refutation_only_and_seeded() {
    let double = corpus("double.system");
    let args = ["verify", "--randomized", "--function", "x/y", path(&double)];
    let doc = ratdyn(&args).json();
    assert_eq!(doc["result"]["verdict"], "not-refuted");
    assert_eq!(doc["result"]["refutation_only"], true);
    assert_eq!(doc["result"]["samples"], 32);
    assert_eq!(doc["seed"], 1729);

    assert_eq!(ratdyn_env(&args, &[("RATDYN_SEED", "99")]).json()["seed"], 99);
    let mut flagged = vec!["--seed", "7"];
    flagged.extend(args);
    assert_eq!(ratdyn_env(&flagged, &[("RATDYN_SEED", "99")]).json()["seed"], 7);
    let bad = ratdyn_env(&args, &[("RATDYN_SEED", "soon")]);
    assert_eq!((bad.code, bad.json()["error"]["code"].clone()), (2, "usage".into()));

    let refuted = ratdyn(&["verify", "--randomized", "--function", "x", path(&double)]);
    assert_eq!(refuted.code, 1);
    assert!(refuted.json()["result"]["counterexample"].is_array());
}

#[test]
fn errors_are_json_with_exit_code_two() {
    let bad = scratch("bad_syntax.system", "var x, y;\nx -> x + ;\ny -> y;\n");
    let r = ratdyn(&["check", path(&bad)]);
    assert_eq!(r.code, 2);
    let e = &r.json()["error"];
    assert_eq!(
        (e["code"].as_str(), e["line"].as_u64(), e["column"].as_u64()),
        (Some("syntax"), Some(2), Some(9))
    );

    let undeclared = scratch("undeclared.system", "var x;\nx -> x + z;\n");
    assert_eq!(
        ratdyn(&["check", path(&undeclared)]).json()["error"]["code"],
        "undeclared-identifier"
    );
    let zero = scratch("zero.system", "var x;\nx -> x/(x - x);\n");
    assert_eq!(
        ratdyn(&["check", path(&zero)]).json()["error"]["code"],
        "division-by-zero"
    );

    let missing = ratdyn(&["check", "/nonexistent/none.system"]);
    assert_eq!(
        (missing.code, missing.json()["error"]["code"].clone()),
        (2, "io".into())
    );
    let usage = ratdyn(&["frobnicate"]);
    assert_eq!((usage.code, usage.json()["error"]["code"].clone()), (2, "usage".into()));
    let budget = ratdyn(&["invariants", "--budget", "1,2", path(&corpus("shift.system"))]);
    assert_eq!(
        (budget.code, budget.json()["error"]["code"].clone()),
        (2, "usage".into())
    );
}

#[test]
fn dominance_is_a_predicate_and_a_precondition() {
    let collapse = scratch("collapse.system", "var x, y;\nx -> x + y;\ny -> x + y;\n");
    let r = ratdyn(&["check", path(&collapse)]);
    assert_eq!(r.code, 1);
    assert_ne!(r.json()["result"]["dominance"], "dominant");
    for cmd in [
        &["invariants"][..],
        &["classify"],
        &["degrees"],
        &["iterate", "--m", "2"],
    ] {
        let mut args = cmd.to_vec();
        args.push(path(&collapse));
        let r = ratdyn(&args);
        assert_eq!(
            (r.code, r.json()["error"]["code"].clone()),
            (2, "precondition".into()),
            "{cmd:?}"
        );
    }
    assert_eq!(ratdyn(&["check", path(&corpus("henon.system"))]).code, 0);
}

#[test]
fn json_and_text_sources_share_a_fingerprint() {
    let text = scratch("swap_text.system", "var x, y;\nx -> y;\ny -> x;\n");
    let json = scratch(
        "swap_json.json",
        r#"{"name": "swap", "variables": ["x", "y"], "map": ["y", "(x^2 - x*x) + x"]}"#,
    );
    let a = ratdyn(&["check", path(&text)]).json();
    let b = ratdyn(&["check", path(&json)]).json();
    assert_eq!(a["system"]["fingerprint"], b["system"]["fingerprint"]);
    assert_eq!(b["system"]["map"], serde_json::json!(["y", "x"]));
}

#[test]
fn output_is_deterministic() {
    let shear = corpus("shear.system");
    let args = ["--no-timing", "invariants", path(&shear)];
    let (a, b) = (ratdyn(&args), ratdyn(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(a.json().get("timing_ms").is_none());
    let strip = |r: Run| {
        let mut v = r.json();
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let timed = ["invariants", path(&shear)];
    assert_eq!(strip(ratdyn(&timed)), strip(ratdyn(&timed)));
}

#[test]
fn pretty_prints_a_table() {
    let r = ratdyn(&["--pretty", "iterate", "--m", "3", path(&corpus("shift.system"))]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().next().unwrap().starts_with("command"));
    assert!(r.stdout.contains("coordinates[0]") && r.stdout.contains("x + 3"));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(ratdyn(&["--help"]).code, 0);
    assert_eq!(ratdyn(&["--version"]).code, 0);
}

#[test]
fn selftest_over_a_directory() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("selftest_dir");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("good.system"), "var x;\nx -> x + 1;\nexpect adim = 0;\n").unwrap();
    let r = ratdyn(&["selftest", "--dir", path(&dir)]);
    assert_eq!((r.code, r.json()["result"]["failed"].clone()), (0, 0.into()));
    std::fs::write(dir.join("wrong.system"), "var x;\nx -> x + 1;\nexpect adim = 1;\n").unwrap();
    let r = ratdyn(&["selftest", "--dir", path(&dir)]);
    assert_eq!((r.code, r.json()["result"]["failed"].clone()), (1, 1.into()));
}
