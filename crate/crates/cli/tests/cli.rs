//! End-to-end runs of the `ccent` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use ccent::four_eight::p_basis;
use ccent::io::StateFile;
use ccent::multilinear::{AntisymTensor, Cplx};
use ccent::perturbation::psi_minus;
use ccent::six_mode::{canonical6, SixClass};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ccent"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn state(name: &str, t: &AntisymTensor) -> PathBuf {
    write(name, &format!("{}\n", serde_json::to_string_pretty(&StateFile::from_tensor(t)).unwrap()))
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn classify_ghz() {
    let p = state("ghz.json", &canonical6(SixClass::Ghz));
    let r = stdout_json(&run(&["classify", p.to_str().unwrap()]));
    assert_eq!(r["class"], "GHZ");
    assert_ne!(r["invariants"]["D"]["re"].as_f64().unwrap(), 0.0);
    assert_eq!(r["tol"].as_f64().unwrap(), 1e-9);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn classify_psi_minus() {
    let p = state("psi_minus.json", &psi_minus());
    let r = stdout_json(&run(&["classify", p.to_str().unwrap(), "--tol", "1e-8"]));
    assert_eq!(r["class"], "X");
    assert!((r["invariants"]["J"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["ranks"]["N"], 7);
    assert_eq!(r["tol"].as_f64().unwrap(), 1e-8);
}

#[test]
fn classify_empty_is_null() {
    let p = write("empty.json", r#"{"fermions": 3, "modes": 6, "amplitudes": []}"#);
    assert_eq!(stdout_json(&run(&["classify", p.to_str().unwrap()]))["class"], "NULL");
}

#[test]
fn classify_four_eight_membership() {
    let p = state("p1.json", &p_basis()[0]);
    let r = stdout_json(&run(&["classify", p.to_str().unwrap()]));
    assert_eq!(r["class"], "CLOSED-ORBIT-SUBSPACE");
}

#[test]
fn input_errors() {
    let unsupported = write("two_four.json", r#"{"fermions": 2, "modes": 4, "amplitudes": []}"#);
    let o = run(&["classify", unsupported.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("(3,6), (3,7), (4,8 membership only)"));

    let garbage = write("garbage.json", "{ not json");
    assert_eq!(code(&run(&["classify", garbage.to_str().unwrap()])), 2);
    let dup = write(
        "dup.json",
        r#"{"fermions": 3, "modes": 6, "amplitudes": [{"indices": [1,2,3], "re": 1, "im": 0}, {"indices": [1,2,3], "re": 2, "im": 0}]}"#,
    );
    assert_eq!(code(&run(&["classify", dup.to_str().unwrap()])), 2);
    let unsorted = write("unsorted.json", r#"{"fermions": 3, "modes": 6, "amplitudes": [{"indices": [2,1,3], "re": 1, "im": 0}]}"#);
    assert_eq!(code(&run(&["classify", unsorted.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["classify", "/nonexistent/state.json"])), 2);
}

#[test]
fn convert_blocks() {
    let hf = write("hf.json", r#"{"fermions": 3, "modes": 6, "amplitudes": [{"indices": [1,2,3], "re": 1, "im": 0}]}"#);
    let r = stdout_json(&run(&["convert", hf.to_str().unwrap(), "--to", "cc"]));
    assert_eq!(r["kind"], "cc");
    for block in ["X", "Y"] {
        assert!(r[block].as_array().unwrap().iter().flat_map(|row| row.as_array().unwrap()).all(|z| z["re"] == 0.0 && z["im"] == 0.0));
    }
    let p = state("psi_minus_convert.json", &psi_minus());
    let r = stdout_json(&run(&["convert", p.to_str().unwrap(), "--to", "cc"]));
    assert_eq!(r["X"][0][0]["re"], -1.0);
    assert_eq!(r["X"][0][1]["re"], 0.0);
    assert_eq!(r["Z"][2][2]["re"], 1.0);
    assert_eq!(r["eta"]["re"], 1.0);
}

#[test]
fn convert_round_trip_is_byte_identical() {
    let original = StateFile::from_tensor(&psi_minus().scale(Cplx::new(0.5, -2.0)));
    let text = format!("{}\n", serde_json::to_string_pretty(&original).unwrap());
    let p = write("scaled_psi_minus.json", &text);
    let cc = run(&["convert", p.to_str().unwrap(), "--to", "cc"]);
    assert!(cc.status.success());
    let cc_path = write("scaled_psi_minus.cc.json", &String::from_utf8(cc.stdout).unwrap());
    let back = run(&["convert", cc_path.to_str().unwrap(), "--to", "state"]);
    assert!(back.status.success());
    assert_eq!(String::from_utf8(back.stdout).unwrap(), text);
}

#[test]
fn convert_reference_deficient() {
    let p = write("deficient.json", r#"{"fermions": 3, "modes": 6, "amplitudes": [{"indices": [4,5,6], "re": 1, "im": 0}]}"#);
    let o = run(&["convert", p.to_str().unwrap(), "--to", "cc"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("relabel"));
    assert!(run(&["convert", p.to_str().unwrap(), "--to", "ci"]).status.success());
}

#[test]
fn invariants_report() {
    let p = state("psi_minus_inv.json", &psi_minus());
    let r = stdout_json(&run(&["invariants", p.to_str().unwrap()]));
    assert!((r["invariants"]["J"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((r["invariants"]["DetB"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn perturb_minus_has_transition_at_two() {
    let rows = csv_rows(&run(&["perturb", "--base", "minus", "--grid", "xi=0:3:0.1"]));
    assert_eq!(rows.len(), 32);
    let ix: Vec<&Vec<String>> = rows[1..].iter().filter(|r| r[13] == "IX").collect();
    assert_eq!(ix.len(), 1);
    assert_eq!(ix[0][0], "2");
    assert_eq!(ix[0][12], "4");
}

#[test]
fn perturb_plus_has_no_transition() {
    let rows = csv_rows(&run(&["perturb", "--base", "plus", "--grid", "xi=0:3:0.1"]));
    assert!(rows[1..].iter().all(|r| r[13] == "X"));
}

#[test]
fn perturb_edge_cases() {
    let rows = csv_rows(&run(&["perturb", "--base", "minus", "--sphere", "2", "--samples", "0"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "re_xi");
    assert_eq!(code(&run(&["perturb", "--base", "minus", "--grid", "xi=0:3"])), 2);
    assert_eq!(code(&run(&["perturb", "--base", "minus", "--grid", "w=0:3:0.1"])), 2);
    assert_eq!(code(&run(&["perturb", "--base", "minus"])), 2);
}

#[test]
fn perturb_is_reproducible() {
    let args = ["perturb", "--base", "plus", "--complex", "1", "--samples", "5", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["perturb", "--base", "plus", "--complex", "1", "--samples", "5", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "six"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.starts_with("[PASS]")));
    let o = run(&["verify", "--suite", "seven", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().any(|c| c["id"] == 1 && c["passed"] == true));
    assert_eq!(code(&run(&["verify", "--suite", "eight"])), 2);
}

#[test]
fn orbit48_membership() {
    let r = stdout_json(&run(&["orbit48", "--a", "0.3", "--b", "0.2", "--seed", "5", "--verdict"]));
    assert!(r["subspace_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(r["params"][0]["re"], 0.3);
    assert_eq!(r["verdict"]["supported"], "oracle");
    assert_eq!(r["state"]["fermions"], 4);
}

#[test]
fn output_file() {
    let p = state("ghz_out.json", &canonical6(SixClass::Ghz));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join("ghz_report.json");
    assert!(run(&["classify", p.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r["class"], "GHZ");
}
