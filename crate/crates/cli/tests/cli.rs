use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn basesem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_basesem")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = basesem(&full);
    let code = out.status.code().expect("exit code");
    let text = String::from_utf8(out.stdout).expect("utf8");
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}"));
    (code, value)
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn assert_valid(schema: &str, value: &Value) {
    let path = schema_dir().join(format!("{schema}.schema.json"));
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&raw).unwrap_or_else(|e| panic!("{schema}: {e}"));
    let errors: Vec<String> = validator.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{schema}: {errors:#?}\n{value:#}");
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus/nd")
}

/// One invocation per subcommand, with the schema it must satisfy and the
/// expected exit status.
fn invocations(tmp: &Path) -> Vec<(&'static str, Vec<String>, i32)> {
    let cert = tmp.join("cert.json");
    let rules = tmp.join("toy.rules");
    std::fs::write(&rules, "r1: q |- p\n").unwrap();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let corpus = corpus_dir().display().to_string();
    vec![
        ("parse", s(&["parse", "forall x. x + 0 = x"]), 0),
        ("parse", s(&["parse", "S(x) * y"]), 0),
        ("weight", s(&["weight", "S(S(0))*S(S(0))"]), 0),
        ("eval", s(&["eval", "S(0) + S(S(0))"]), 0),
        ("derive", s(&["derive", "S(0) + 0 = S(0)", "--cert", &cert.display().to_string()]), 0),
        ("derive", s(&["derive", "S(0) = 0"]), 1),
        ("derive", s(&["derive", "S(0) * S(0) = S(0)", "--base", "A", "--depth", "2", "--nodes", "50"]), 2),
        ("check-derivation", s(&["check-derivation", "--cert", &cert.display().to_string()]), 0),
        ("decide-eq", s(&["decide-eq", "S(0)", "0", "--base", "A_PLUS"]), 1),
        ("decide-eq", s(&["decide-eq", "c3", "0", "--base", "A_EXT", "3"]), 0),
        ("normalize", s(&["normalize", "S(0) * S(S(0))"]), 0),
        ("support", s(&["support", "forall x. x + 0 = x"]), 0),
        ("support", s(&["support", "forall x. x = 0"]), 1),
        ("support", s(&["support", "(S(0) = 0 -> 0 = 0) -> 0 = S(0)"]), 2),
        ("omega-check", s(&["omega-check", "x + 0 = x", "--n-max", "4", "--term-size", "4"]), 0),
        ("omega-check", s(&["omega-check", "x = S(x)", "--n-max", "4", "--term-size", "4"]), 1),
        ("induction-check", s(&["induction-check", "0 + x = x", "--n-max", "4", "--term-size", "4"]), 0),
        ("induction-check", s(&["induction-check", "x = 0", "--n-max", "4", "--term-size", "4"]), 1),
        ("nd-check", s(&["nd-check", &corpus]), 0),
        ("consistency", s(&["consistency"]), 0),
        ("toy-support", s(&["toy-support", "((p -> q) -> p) -> p", "--atoms", "p,q"]), 0),
        ("toy-support", s(&["toy-support", "p", "--atoms", "p,q", "--rules", &rules.display().to_string()]), 1),
        ("soundness-demo", s(&["soundness-demo", "--atoms", "p,q"]), 0),
        ("probe-fidelity", s(&["probe-fidelity", "--base", "A", "--term-size", "3"]), 0),
    ]
}

#[test]
fn every_subcommand_validates_against_its_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let runs = invocations(tmp.path());
    let mut seen: Vec<&str> = runs.iter().map(|r| r.0).collect();
    seen.dedup();
    assert_eq!(seen.len(), 15);
    for (schema, args, code) in runs {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (got, value) = json(&argv);
        assert_eq!(got, code, "{argv:?}\n{value:#}");
        assert_valid(schema, &value);
    }
}

#[test]
fn schemas_reject_foreign_output() {
    let (_, weight) = json(&["weight", "S(0)"]);
    let raw: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_dir().join("eval.schema.json")).unwrap()).unwrap();
    assert!(!jsonschema::validator_for(&raw).unwrap().is_valid(&weight));
}

#[test]
fn json_output_is_deterministic() {
    let cases: [&[&str]; 5] = [
        &["--format", "json", "consistency", "--base", "A_EXT", "9"],
        &["--format", "json", "omega-check", "x * 0 = 0", "--n-max", "6", "--term-size", "5"],
        &["--format", "json", "probe-fidelity", "--base", "A", "--term-size", "3", "--samples", "20"],
        &["--format", "json", "soundness-demo"],
        &["--format", "json", "normalize", "S(S(0)) * S(S(0)) + S(0)"],
    ];
    for args in cases {
        let a = basesem(args);
        let b = basesem(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn weight_of_two_times_two() {
    let out = basesem(&["weight", "S(S(0))*S(S(0))"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "4");
}

#[test]
fn successor_of_zero_is_not_zero() {
    let (code, v) = json(&["decide-eq", "S(0)", "0", "--base", "A_PLUS"]);
    assert_eq!(code, 1);
    assert_eq!(v["holds"], false);
    assert_eq!(v["weights"], serde_json::json!([1, 0]));
}

#[test]
fn consistency_exits_zero_when_bot_is_refuted() {
    let (code, v) = json(&["consistency", "--base", "A_PLUS"]);
    assert_eq!(code, 0);
    assert_eq!(v["bot_clause_status"], "refuted");
    assert_eq!(v["witness"], "S(0) = 0");
}

#[test]
fn certificate_round_trip_through_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cert = tmp.path().join("c.json");
    let c = cert.display().to_string();
    let (code, _) = json(&["derive", "S(S(0)) = S(0) + S(0)", "--cert", &c]);
    assert_eq!(code, 0);
    let (code, v) = json(&["check-derivation", "--cert", &c]);
    assert_eq!(code, 0);
    assert_eq!(v["conclusion"], "S(S(0)) = S(0) + S(0)");

    // Over plain EQ the arithmetic rules are missing.
    let (code, v) = json(&["check-derivation", "--cert", &c, "--base", "EQ"]);
    assert_eq!(code, 1);
    assert_eq!(v["valid"], false);
}

#[test]
fn usage_errors() {
    assert_eq!(basesem(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(basesem(&["consistency", "--base", "PA"]).status.code(), Some(64));
    assert_eq!(basesem(&["omega-check", "x = x", "--term-size", "0"]).status.code(), Some(64));
    assert_eq!(basesem(&["normalize", "S(0)", "--base", "A"]).status.code(), Some(64));
    assert_eq!(basesem(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_and_missing_inputs() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(basesem(&["weight", "S(0"]).status.code(), Some(65));
    assert_eq!(basesem(&["weight", "S(x)"]).status.code(), Some(65));
    let junk = tmp.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    let j = junk.display().to_string();
    assert_eq!(basesem(&["check-derivation", "--cert", &j]).status.code(), Some(65));
    assert_eq!(basesem(&["nd-check", &j]).status.code(), Some(65));
    let missing = tmp.path().join("absent.json").display().to_string();
    assert_eq!(basesem(&["check-derivation", "--cert", &missing]).status.code(), Some(66));
    assert_eq!(basesem(&["derive", "0 = 0", "--rules", &missing]).status.code(), Some(66));
}

#[test]
fn rule_files_select_bases() {
    let tmp = tempfile::tempdir().unwrap();
    let rules = tmp.path().join("chain.rules");
    std::fs::write(&rules, "r1: |- q\nr2: q |- p\n").unwrap();
    let r = rules.display().to_string();
    let (code, v) = json(&["derive", "p", "--rules", &r]);
    assert_eq!(code, 0, "{v:#}");
    let (code, v) = json(&["toy-support", "p", "--rules", &r]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["universe"], serde_json::json!(["p", "q"]));
}

#[test]
fn fidelity_gap_over_verbatim_base() {
    let (code, v) = json(&["probe-fidelity", "--base", "A", "--term-size", "4", "--depth", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["gap"], true);
    let (_, v) = json(&["probe-fidelity", "--base", "A_PLUS", "--term-size", "4"]);
    assert_eq!(v["gap"], false);
    assert_eq!(v["failures"], serde_json::json!([]));
}
