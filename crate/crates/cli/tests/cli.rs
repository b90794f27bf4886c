use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/curves/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn e0(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_e0")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn classify_certified_example() {
    let o = e0(&["classify", &fixture("e5")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("Z_5 x Z/5Z"), "{s}");
    assert!(s.contains("method: corollary-iii, certified"), "{s}");
    let o = e0(&["classify", &fixture("e2_q2_zeta3")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Z_2^2 x (Z/2Z)^2"));
}

#[test]
fn classify_exit_codes() {
    let o = e0(&["classify", &fixture("good_reduction")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("reduction type: good"));
    let o = e0(&["classify", &fixture("ramified_q2_sqrt2")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("exploratory"));
    let o = e0(&["classify", "/nonexistent/descriptor.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_e0"))
        .args(["classify", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"p": 3, "a": [0, -3, 0, 3, 0]}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["structure"]["free_rank"], 1);
    assert_eq!(v["structure"]["torsion"], serde_json::json!([3]));
}

#[test]
fn json_reports_are_deterministic_and_sorted() {
    for name in ["e2_q2", "e7", "shifted_e10", "ramified_q2_sqrt2"] {
        let a = e0(&["classify", "--json", &fixture(name)]);
        let b = e0(&["classify", "--json", &fixture(name)]);
        assert_eq!(a.stdout, b.stdout, "{name}");
        let v = json_of(&a);
        // re-serializing a parsed map sorts keys, so equality means sorted output
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", stdout(&a));
        assert!(v["structure"]["free_rank"].is_u64());
        assert!(v["structure"]["torsion"].is_array());
        assert!(v["method"].is_string());
        assert!(v["evidence"].is_object());
        assert!(v["certified"].is_boolean());
    }
}

#[test]
fn malformed_input_is_an_error() {
    let dir = std::env::temp_dir().join(format!("e0-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (i, text) in ["{", r#"{"p": 6, "a": [0,0,0,0,1]}"#, r#"{"p": 3, "a": ["1/3",0,0,0,3]}"#]
        .iter()
        .enumerate()
    {
        let path = dir.join(format!("bad{i}.json"));
        std::fs::write(&path, text).unwrap();
        let o = e0(&["classify", "--json", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{text}");
        assert!(json_of(&o)["error"].is_string());
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn normalize_reports_transform() {
    let o = e0(&["normalize", "--json", &fixture("shifted_e10")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["reduction"], "additive (cusp)");
    assert!(stdout(&e0(&["normalize", &fixture("shifted_e10")])).contains("Y^2 = X^3 + 3"));
}

#[test]
fn formal_group_printing() {
    let s = stdout(&e0(&["formal-group", "--n", "2", "--degree", "4"]));
    assert!(s.contains("(a1*a2 - 7*a3)*T^4"), "{s}");
    let s = stdout(&e0(&["formal-group", "--n", "1", "--degree", "4"]));
    assert_eq!(s.trim(), "[1](T) = T");
    let s = stdout(&e0(&["formal-group", "--p", "5", "--degree", "6"]));
    assert!(s.contains("g = T - (3*a4/5)~ * T^5"), "{s}");
    let s = stdout(&e0(&["formal-group", "--degree", "3"]));
    assert!(s.starts_with("F(X,Y) = X + Y - a1*X*Y"), "{s}");
    let o = e0(&["formal-group", "--degree", "100"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&e0(&["formal-group", &fixture("e3"), "--degree", "5"]));
    assert!(s.contains("g = T - T^3"), "{s}");
}

#[test]
fn verify_point_examples() {
    let s = stdout(&e0(&["verify-point", &fixture("e9")]));
    assert!(s.contains("in E_0, level 0, infinite order (group is Z_2)"), "{s}");
    let s = stdout(&e0(&["verify-point", &fixture("e8")]));
    assert_eq!(s.matches("not in E_0 (reduces to singular point)").count(), 3, "{s}");
    let s = stdout(&e0(&["verify-point", &fixture("e7")]));
    assert!(s.contains("in E_0, level 0, 7-torsion"), "{s}");
    let s = stdout(&e0(&["verify-point", &fixture("e2_q2_zeta3")]));
    assert_eq!(s.matches("2-torsion").count(), 3, "{s}");
}

#[test]
fn verify_point_rejects_points_off_the_curve() {
    let dir = std::env::temp_dir().join(format!("e0-cli-pt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("off.json");
    std::fs::write(&path, r#"{"p": 7, "a": [7, 0, -28, 7, -35], "points": [{"x": 2, "y": 2}]}"#).unwrap();
    let o = e0(&["verify-point", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["points"][0]["on_curve"], false);
    assert!(v["points"][0]["error"].as_str().unwrap().contains("valuation"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oracle_verdicts() {
    let o = e0(&["oracle", "--json", "--jobs", "2", "--level", "4", &fixture("e2_q2")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["order"], "16");
    assert_eq!(v["p_rank"], 2);
    let o = e0(&["oracle", "--json", "--level", "3", "--self-check", "--seed", "7", &fixture("e3")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["verdict"], "pass");
    let o = e0(&["oracle", "--json", "--level", "3", "--expect-torsion-rank", "0", &fixture("e3")]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["kernel_size"], "9");
}
