use std::process::{Command, Output};

use serde_json::{json, Value};

fn ucext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ucext")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = ucext(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

#[test]
fn vform_sl2c_has_a_killing_kernel() {
    let (code, v) = report(&["vform", "sl2C"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["dim_v"], json!(2));
    assert_eq!(v["results"]["killing_factorization"]["kernel_dim"], json!(1));
    assert!(v["results"]["kappa"].is_array());
}

#[test]
fn universality_sl2_sq2() {
    let (code, v) = report(&["universality", "sl2", "sq2"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["dim_omegabar"], json!(1));
    assert_eq!(r["dim_h2"], json!(1));
    assert_eq!(r["bijective"], json!(true));
    assert_eq!(v["status"], json!("ok"));
}

#[test]
fn h2_heis3_lists_two_representatives() {
    let (code, v) = report(&["h2", "heis3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["dim"], json!(2));
    let reps = v["results"]["representatives"].as_array().unwrap();
    assert_eq!(reps.len(), 2);
    // each is a sparse list of [i, j, [coefficients]]
    for rep in reps {
        for entry in rep.as_array().unwrap() {
            assert_eq!(entry.as_array().unwrap().len(), 3);
        }
    }
}

#[test]
fn unparseable_rational_is_an_input_error() {
    let doc = r#"{"kind":"lie","basis":["a","b"],"brackets":[[0,1,1,"2/0"]]}"#;
    let (code, v) = report(&["validate", doc]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], json!("input-error"));

    let path = std::env::temp_dir().join(format!("ucext-bad-{}.json", std::process::id()));
    std::fs::write(&path, doc).unwrap();
    let out = ucext(&["info", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn jacobi_failure_reports_the_triple() {
    // [a,b] = a, [b,c] = a, [a,c] = b fails Jacobi on (a,b,c)
    let doc = r#"{"kind":"lie","basis":["a","b","c"],"brackets":[[0,1,0,"1"],[1,2,0,"1"],[0,2,1,"1"]]}"#;
    let (code, v) = report(&["validate", doc]);
    assert_eq!(code, 1);
    assert!(!v["error"].as_str().unwrap().is_empty());
}

#[test]
fn inline_documents_round_trip() {
    let doc = r#"{"kind":"comm","basis":["1","t"],"unit":["1","0"],"products":[[0,0,0,"1"],[0,1,1,"1"]]}"#;
    let (code, v) = report(&["kaehler", doc]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["dim_omega1"], json!(1));
}

#[test]
fn exit_codes() {
    assert_eq!(ucext(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(ucext(&["h2", "sl2", "--bogus"]).status.code(), Some(64));
    assert_eq!(ucext(&["--help"]).status.code(), Some(0));
    assert_eq!(ucext(&["witness", "heis3", "--element", "x"]).status.code(), Some(2));
    assert_eq!(ucext(&["h2", "sl3", "--max-cochain", "10"]).status.code(), Some(3));
    assert_eq!(ucext(&["universality", "heis3", "sq2"]).status.code(), Some(1));
    assert_eq!(ucext(&["info", "nonsense"]).status.code(), Some(1));
}

#[test]
fn reports_go_to_stdout_and_diagnostics_to_stderr() {
    let out = ucext(&["info", "sl2"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("info"));
    let bad = ucext(&["info", "nonsense", "--format", "json"]);
    assert!(!bad.stderr.is_empty());
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["exit_code"], json!(1));
}

#[test]
fn catalog_self_test() {
    let (code, v) = report(&["validate", "--all"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], json!("ok"));
}
