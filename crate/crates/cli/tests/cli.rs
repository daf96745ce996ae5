use std::path::PathBuf;
use std::process::{Command, Output};

fn pairs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_input(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pairs-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn fixtures_are_listed() {
    let o = pairs(&["fixtures", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["a3", "bracelet9", "seven", "fail_A", "fail_PA"] {
        assert!(out.contains(name), "{name} missing from\n{out}");
    }
}

#[test]
fn min_primes_verify_on_seven() {
    let o = pairs(&["verify", "seven", "--theorem", "min-primes"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("[FAILED]"));
}

#[test]
fn a3_derivations_are_free() {
    let o = pairs(&["--json", "der", "a3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let d = &v["derivations"];
    assert_eq!(d["free"], true);
    assert_eq!(d["exponents"], serde_json::json!([0, 1, 2]));
}

#[test]
fn recipe_certificate_for_fail_pair() {
    let o = pairs(&["--json", "compare", "fail_A", "fail_PA", "--recipe"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("\"flat\": [\n") || text.contains("\"flat\":["), "{text}");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let found = v.to_string();
    assert!(found.contains("[1,2,3,5]"), "{found}");
    assert!(found.contains("not isomorphic"));
}

#[test]
fn json_output_is_deterministic() {
    let a = pairs(&["--json", "analyze", "a3"]);
    let b = pairs(&["--json", "analyze", "a3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn betti_from_input_file() {
    let path = temp_input("u24.json", r#"{"name": "u24", "field": "rational", "matrix": [[1, 1, 1, 1], [1, 2, 3, 4]]}"#);
    let o = pairs(&["betti", path.to_str().unwrap(), "--method", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("[ok] Koszul and resolution Betti numbers agree"));
}

#[test]
fn prime_field_input() {
    let path = temp_input("a3p.json", r#"{"name": "a3p", "field": {"prime": 32003}, "matrix": [[1,1,1,0,0,0],[-1,0,0,1,1,0],[0,-1,0,-1,0,1],[0,0,-1,0,-1,-1]]}"#);
    let o = pairs(&["flats", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bad_inputs_exit_with_one() {
    let zero_den = temp_input("zero.json", r#"{"name": "z", "field": "rational", "matrix": [["1/0", 1]]}"#);
    let ragged = temp_input("ragged.json", r#"{"name": "r", "field": "rational", "matrix": [[1, 2], [3]]}"#);
    for args in [
        vec!["flats", zero_den.to_str().unwrap()],
        vec!["flats", ragged.to_str().unwrap()],
        vec!["flats", "/nonexistent/input.json"],
        vec!["flats", "no_such_fixture"],
    ] {
        let o = pairs(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn loops_need_explicit_deletion() {
    let path = temp_input("loop.json", r#"{"name": "l", "field": "rational", "matrix": [[1, 0, 1], [0, 0, 1]]}"#);
    assert_eq!(pairs(&["flats", path.to_str().unwrap()]).status.code(), Some(1));
    let o = pairs(&["--drop-loops", "flats", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("deleted loops"));
}
