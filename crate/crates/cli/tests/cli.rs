use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_residue-audit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn trace_of_field_word() {
    let o = bin(&["trace", "c(X1)*c(X2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-g(X1,X2)*tr_id");
}

#[test]
fn trace_of_four_fields() {
    let o = bin(&["trace", "c(X1)*c(X2)*c(X3)*c(X4)"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("g(X1,X2)*g(X3,X4)"), "{s}");
    assert!(s.contains("g(X1,X3)*g(X2,X4)"), "{s}");
}

#[test]
fn eval_prints_symbol() {
    let o = bin(&["eval", "pip(1/(xin-i))"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!stdout(&o).trim().is_empty());
}

#[test]
fn matching_case_exits_zero() {
    let o = bin(&["verify", "--dim", "4", "--l", "2", "--case", "c", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn corrupted_fixture_is_detected() {
    let f = fixture("corrupted_c.json");
    let o = bin(&["verify", "--dim", "4", "--l", "2", "--case", "c", "--trials", "3", "--json", "--expected", &f]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v[0];
    assert_eq!(r["id"], "dim4.c.l2");
    assert_eq!(r["exact_match"], false);
    assert_eq!(r["supports"], "engine");
}

#[test]
fn corrected_fixture_passes() {
    let f = fixture("corrected_aii.json");
    let o = bin(&["verify", "--dim", "4", "--l", "2", "--trials", "3", "--expected", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bad_fixtures_are_usage_errors() {
    for name in ["malformed.json", "unknown_id.json", "missing.json"] {
        let f = fixture(name);
        let o = bin(&["verify", "--dim", "4", "--l", "2", "--expected", &f]);
        assert_eq!(o.status.code(), Some(2), "{name}");
    }
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(bin(&["verify", "--dim", "5"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--case", "d"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--json", "--latex"]).status.code(), Some(2));
    assert_eq!(bin(&["oracle", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn oracle_agrees_with_engine() {
    let o = bin(&["oracle", "--dim", "4", "--l", "2", "--case", "aII", "--trials", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert!(v[0]["rel_err"].as_f64().unwrap() < 1e-9);
}

#[test]
fn interior_term_dim4() {
    let o = bin(&["interior", "--dim", "4", "--l", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dim4 l=2"));
}

#[test]
fn latex_theorem_block() {
    let o = bin(&["report", "--dim", "4", "--l", "2", "--latex", "--trials", "2"]);
    let s = stdout(&o);
    assert!(s.contains("\\begin{equation*}"), "{s}");
    assert!(s.contains("\\Omega_3"), "{s}");
}
