use std::path::Path;
use std::process::{Command, Output};

use hopfring::Algebra;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_hopfring");

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("HOPFRING_CACHE").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn products_and_maps() {
    assert_eq!(stdout(&["--p", "2", "mul", "{w=2;g1^1}", "{w=2;g1^2}"]), "{w=2;g1^3}");
    assert_eq!(stdout(&["--p", "2", "transfer", "{w=1}", "{w=1}"]), "0");
    assert_eq!(stdout(&["--p", "2", "coproduct", "{w=2}"]), "1 (x) {w=2} + {w=1} (x) {w=1} + {w=2} (x) 1");
    assert_eq!(stdout(&["--p", "2", "divpow", "{w=1}", "3"]), "{w=3}");
    assert_eq!(stdout(&["--p", "2", "restrict", "{w=2;g1^2}|{w=2}", "3"]), "{w=1}|{w=2;g1^2}");
    assert_eq!(stdout(&["--p", "3", "mul", "{w=3;solid(S={},odd)}", "{w=3;solid(S={},odd)}"]), "{w=3;g1^1}");
}

#[test]
fn operands_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    std::fs::write(&path, "{w=2;g1^1}\n").unwrap();
    let arg = format!("@{}", path.display());
    assert_eq!(stdout(&["--p", "2", "mul", &arg, &arg]), "{w=2;g1^2}");
}

#[test]
fn sequences_and_dimensions() {
    assert_eq!(stdout(&["--p", "3", "minseq", "--S", "1,2", "--k", "3"]), "(0,0,1,1,1,2)");
    let table = stdout(&["--p", "2", "dims", "--component", "4", "--max-degree", "3"]);
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows, ["d\tskyline\tnakaoka", "0\t1\t1", "1\t1\t1", "2\t2\t2", "3\t3\t3"]);
    assert_eq!(stdout(&["--p", "2", "basis", "--component", "2", "--degree", "2"]), "{w=2;g1^2}");
}

#[test]
fn decorated_coefficients() {
    let rp2 = data("rp2.json");
    let args = ["--presentation", rp2.as_str(), "limit-mul", "{w=1;dec=x}", "{w=1;dec=x}", "--flavor", "cx"];
    assert_eq!(stdout(&args), "1*{w=1;dec=x2}|1^[*]");
    assert_eq!(stdout(&["--presentation", &rp2, "pair", "x", "0", "3", "x*x*x"]), "1");
    assert_eq!(stdout(&["--presentation", &rp2, "pair", "x", "0", "2", "Q(0,1)x"]), "0");
    let gens = stdout(&["--presentation", &rp2, "qx-gens", "--flavor", "cx", "--max-degree", "2"]);
    assert!(gens.lines().next().unwrap().starts_with("{w=1;dec=x}"), "{gens}");
}

#[test]
fn json_output_parses_back() {
    let alg = Algebra::point(2);
    let text = stdout(&["--p", "2", "--format", "json", "mul", "{w=2;g1^1}", "{w=2;g1^2}"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["grade"], serde_json::json!({"n": 2, "d": 3, "e": 0}));
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    let diagram = terms[0][1].as_str().unwrap();
    assert_eq!(alg.parse(diagram).unwrap(), alg.parse("{w=2;g1^3}").unwrap());

    let text = stdout(&["--p", "2", "--format", "json", "coproduct", "{w=2}"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--p", "2", "frobnicate"]), 2);
    assert_eq!(code(&["--p", "2", "mul", "{w=2;", "{w=1}"]), 2);
    assert_eq!(code(&["--p", "4", "mul", "{w=1}", "{w=1}"]), 2);
    assert_eq!(code(&["--p", "2", "restrict", "{w=1}", "2"]), 2);
    assert_eq!(code(&["--presentation", "/nonexistent.json", "dims", "--component", "1", "--max-degree", "1"]), 2);
    assert_eq!(code(&["--p", "2", "minseq", "--S", "1", "--k", "1"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--p", "2", "verify", "--suite", "dp", "--samples", "10", "--max-component", "4", "--max-degree", "4"]), 0);
}

#[test]
fn cache_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--p", "3", "--format", "json", "dims", "--component", "5", "--max-degree", "8"];
    let plain = stdout(&args);
    for _ in 0..2 {
        let out = Command::new(BIN).args(args).env("HOPFRING_CACHE", dir.path()).output().unwrap();
        assert!(out.status.success());
        assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), plain);
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
}
