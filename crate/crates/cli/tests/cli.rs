use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qtouch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtouch")).args(args).output().expect("binary runs")
}

fn qtouch_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtouch")).args(args).env(key, value).output().expect("binary runs")
}

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn assert_report_schema(v: &Value) {
    let obj = v.as_object().expect("report is an object");
    let mut keys: Vec<_> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["depth_used", "elapsed_ms", "first_mismatch", "id", "order", "status"]);
    assert!(obj["id"].is_string());
    assert!(obj["order"].is_u64());
    assert!(obj["depth_used"].is_u64());
    assert!(obj["elapsed_ms"].is_u64());
    let status = obj["status"].as_str().unwrap();
    assert!(status == "pass" || status == "fail");
    match &obj["first_mismatch"] {
        Value::Null => assert_eq!(status, "pass"),
        Value::Object(m) => {
            assert_eq!(status, "fail");
            let mut mk: Vec<_> = m.keys().map(String::as_str).collect();
            mk.sort_unstable();
            assert_eq!(mk, ["lhs", "power", "rhs"]);
            assert!(m["power"].is_u64() && m["lhs"].is_string() && m["rhs"].is_string());
        }
        other => panic!("first_mismatch has wrong type: {other}"),
    }
}

#[test]
fn expand_touchard_golden() {
    let o = qtouch(&["expand", "--spec", &spec("touchard.cf"), "--order", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "v^0: 1\nv^1: -q\nv^2: q^3\nv^3: -q^6\n");
}

#[test]
fn expand_order_zero() {
    let o = qtouch(&["expand", "--spec", &spec("touchard.cf"), "--order", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "v^0: 1\n");
}

#[test]
fn expand_motzkin_and_squared_golden() {
    let o = qtouch(&["expand", "--spec", &spec("motzkin.cf"), "--order", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "z^0: 1\nz^1: 1\nz^2: 2 - q\nz^3: 4 - 3*q\n");
    let o = qtouch(&["expand", "--spec", &spec("squared.cf"), "--order", "2"]);
    assert_eq!(stdout(&o), "v^0: 1\nv^1: -2*q + q^2\nv^2: 2*q^2 - 2*q^5 + q^6\n");
}

#[test]
fn expand_var_label_and_param_override() {
    let o = qtouch(&["expand", "--spec", &spec("touchard.cf"), "--order", "1", "--var", "x"]);
    assert_eq!(stdout(&o), "x^0: 1\nx^1: -q\n");
    let d2 = qtouch(&["expand", "--spec", &spec("general_d.cf"), "--order", "3", "--param", "d=2"]);
    let d3 = qtouch(&["expand", "--spec", &spec("general_d.cf"), "--order", "3"]);
    assert_eq!(d2.status.code(), Some(0));
    assert_ne!(stdout(&d2), stdout(&d3));
    let bad = qtouch(&["expand", "--spec", &spec("general_d.cf"), "--param", "k=2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn expand_malformed_reports_position() {
    let o = qtouch(&["expand", "--spec", &spec("malformed.cf")]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("syntax error at line 3, column 1"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn expand_missing_file_is_usage_error() {
    let o = qtouch(&["expand", "--spec", "/nonexistent/x.cf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn qmax_env() {
    let base = qtouch(&["expand", "--spec", &spec("touchard.cf"), "--order", "5"]);
    let wide = qtouch_env(&["expand", "--spec", &spec("touchard.cf"), "--order", "5"], "QTOUCH_QMAX", "512");
    assert_eq!(stdout(&base), stdout(&wide));
    let bad = qtouch_env(&["expand", "--spec", &spec("touchard.cf")], "QTOUCH_QMAX", "lots");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_touchard_main() {
    let o = qtouch(&["verify", "--id", "touchard-main", "--order", "16"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "touchard-main: pass (order 16, depth 18)\n");
}

#[test]
fn verify_unknown_id() {
    let o = qtouch(&["verify", "--id", "no-such-id"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("touchard-main") && err.contains("general-d-5"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qtouch(&["verify"]).status.code(), Some(2));
    assert_eq!(qtouch(&["expand"]).status.code(), Some(2));
    assert_eq!(qtouch(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qtouch(&["verify", "--id", "recu1", "--order", "-3"]).status.code(), Some(2));
}

#[test]
fn verify_recu2_json() {
    let o = qtouch(&["verify", "--id", "recu2", "--order", "8", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_report_schema(&v);
    assert_eq!(v["id"], "recu2");
    assert_eq!(v["order"], 8);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["elapsed_ms"], 0);
}

#[test]
fn verify_all_order_12() {
    let o = qtouch(&["verify-all", "--order", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.ends_with("28/28 checks passed\n"), "{out}");
}

#[test]
fn verify_all_order_0() {
    let o = qtouch(&["verify-all", "--order", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_all_json_is_deterministic() {
    let a = qtouch(&["verify-all", "--order", "6", "--json"]);
    let b = qtouch(&["verify-all", "--order", "6", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 28);
    arr.iter().for_each(assert_report_schema);
    assert_eq!(arr[0]["id"], "touchard-main");
    assert_eq!(arr[27]["id"], "general-d-5");
}

#[test]
fn verify_all_default_orders() {
    let o = qtouch(&["verify-all", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let orders: Vec<_> = v.as_array().unwrap().iter().map(|r| (r["id"].as_str().unwrap().to_string(), r["order"].as_u64().unwrap())).collect();
    assert!(orders.contains(&("touchard-main".into(), 16)));
    assert!(orders.contains(&("coeff-main".into(), 20)));
    assert!(orders.contains(&("recu2".into(), 8)));
}

#[test]
fn list_matches_catalog() {
    let o = qtouch(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let ids: Vec<_> = stdout(&o).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    let expected: Vec<_> = qtouch_core::identities::catalog().iter().map(|e| e.id.to_string()).collect();
    assert_eq!(ids, expected);
}
