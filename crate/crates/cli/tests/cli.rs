use std::path::PathBuf;
use std::process::{Command, Output};

fn mackey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mackey")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("mackey-cli-{}-{name}", std::process::id()))
}

#[test]
fn c4_sum_polynomials() {
    let o = mackey(&["derive-reciprocity", "--p", "2", "--n", "2", "--K", "2", "--H", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("i_C_2 = 1"), "{s}");
    assert!(s.contains("N_e^C_2(a·γb)"), "{s}");
    assert!(s.contains("|g| = 3"), "{s}");
}

#[test]
fn c4_transfer_polynomial_as_json() {
    let path = tmp("f.json");
    let p = path.to_str().unwrap();
    let o = mackey(&["derive-reciprocity", "--p", "2", "--n", "2", "--K", "2", "--H", "1", "--H-prime", "0", "--json", p]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["f"], serde_json::json!(["x·γx"]));
    assert_eq!(v["r"], 1);
    let _ = std::fs::remove_file(path);
}

#[test]
fn norm_of_z2_from_json() {
    let o = mackey(&["norm", "--p", "2", "--n", "1", "--H", "0", "--input", &data("z2.json"), "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert!(lines[0].starts_with("C_2/C_2") && lines[0].ends_with("Z/4"), "{s}");
    assert!(lines[2].ends_with("tr  ↑ [2]"), "{s}");
    assert!(lines[3].ends_with("Z/2"), "{s}");
}

#[test]
fn norm_of_z2_relations() {
    let o = mackey(&["examples", "fig4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(!s.contains("FAILS"), "{s}");
    assert!(s.contains("4·N(1) = 0: holds"));
}

#[test]
fn verify_burnside_tambara() {
    let o = mackey(&["verify", "--tambara", "burnside", "--p", "2", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "pass");
}

#[test]
fn json_output_reloads() {
    let path = tmp("norm.json");
    let p = path.to_str().unwrap();
    let o = mackey(&["norm", "--p", "2", "--n", "1", "--H", "0", "--input", "z", "--json", p]);
    assert_eq!(o.status.code(), Some(0));
    let o = mackey(&["iso-check", "custom", "--left", p, "--right", "burnside", "--p", "2", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("isomorphic"));
    assert!(!stdout(&o).contains("not isomorphic"));
    let _ = std::fs::remove_file(path);
}

#[test]
fn broken_functor_fails_verification() {
    let path = tmp("broken.json");
    // tr∘res should be multiplication by 2 on the top level; here it is 1
    let doc = r#"{"p":2,"n":1,"levels":[{"gens":1,"rels":[],"weyl":[[1]]},{"gens":1,"rels":[],"weyl":[[1]]}],"res":[[[1]]],"tr":[[[1]]]}"#;
    std::fs::write(&path, doc).unwrap();
    let o = mackey(&["verify", "--mackey", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("fail"));
    let o = mackey(&["norm", "--p", "2", "--n", "1", "--H", "1", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let _ = std::fs::remove_file(path);
}

#[test]
fn iso_checks() {
    let o = mackey(&["iso-check", "composability", "--p", "2", "--n", "2", "--K", "1", "--H", "0", "--input", "z/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = mackey(&["iso-check", "monoidality", "--p", "2", "--n", "1", "--H", "0", "--input", "z/2", "z"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("explicit"));
}

#[test]
fn box_and_tensor() {
    let o = mackey(&["box", "--input", "burnside", "z/2", "--p", "2", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().next().unwrap().ends_with("Z/2"));
    let o = mackey(&["tensor-gset", "--p", "2", "--n", "1", "--orbits", "0", "--input", "z/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().next().unwrap().ends_with("Z/4"));
}

#[test]
fn exit_codes() {
    assert_eq!(mackey(&["bogus"]).status.code(), Some(1));
    assert_eq!(mackey(&["--help"]).status.code(), Some(0));
    assert_eq!(mackey(&["norm", "--p", "4", "--n", "1", "--H", "0", "--input", "z"]).status.code(), Some(1));
    assert_eq!(mackey(&["norm", "--p", "2", "--n", "1", "--H", "0", "--input", "z", "--strategy", "nope"]).status.code(), Some(1));
    // brute force over an infinite group runs into the element cap
    let o = mackey(&["norm", "--p", "2", "--n", "1", "--H", "0", "--input", "z", "--strategy", "brute"]);
    assert_eq!(o.status.code(), Some(2));
}
