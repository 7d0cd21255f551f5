use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use solspace_cli::{run, Outcome, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE};
use tempfile::TempDir;

const HEXAGON: &str = "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n";

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("solspace").chain(args.iter().copied()))
}

fn cli_path(args: &[&str], path: &Path) -> Outcome {
    let mut v: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    v.push(path.display().to_string());
    run(std::iter::once("solspace".to_owned()).chain(v))
}

fn json(o: &Outcome) -> Value {
    assert_eq!(o.code, EXIT_OK, "stderr: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

#[test]
fn hexagon_betti_json() {
    let s = Scratch::new();
    let p = s.file("hexagon.cnf", HEXAGON);
    let o = cli_path(&["betti", "--coeffs", "Z"], &p);
    assert_eq!(o.stdout, "{\"betti\":[1,1],\"coeffs\":\"Z\",\"f\":[6,6],\"torsion\":[[],[]]}\n");
}

#[test]
fn betti_of_formula_matches_betti_of_its_solutions() {
    let s = Scratch::new();
    let p = s.file("f.cnf", "p cnf 4 3\n1 2 0\n-2 3 -4 0\n1 -3 4 0\n");
    let solved = cli_path(&["--format", "text", "solve"], &p);
    assert_eq!(solved.code, EXIT_OK);
    let v = s.file("f.vset", &solved.stdout);
    for c in ["Z", "Z2", "Q"] {
        assert_eq!(cli_path(&["betti", "--coeffs", c], &p).stdout, cli_path(&["betti", "--coeffs", c], &v).stdout);
    }
}

#[test]
fn solve_and_project() {
    let s = Scratch::new();
    let p = s.file("hexagon.cnf", HEXAGON);
    let v = json(&cli_path(&["solve"], &p));
    assert_eq!(v["count"], 6);
    assert_eq!(v["solutions"][0], "100");
    let pr = json(&cli_path(&["project", "--dims", "3"], &p));
    assert_eq!(pr["dimension"], 2);
    assert_eq!(pr["count"], 4);
    let none = cli_path(&["project", "--dims", "0"], &p);
    assert_eq!(none.code, EXIT_INPUT);
    assert_eq!(cli_path(&["project", "--dims", "4"], &p).code, EXIT_INPUT);
}

#[test]
fn csp_input_with_relation_file() {
    let s = Scratch::new();
    let rels = s.file("r.txt", "rel XOR 2\n01 10\n");
    let p = s.file("x.csp", "dim 3\nXOR v1 v2\nXOR v2 T\n");
    let r = rels.display().to_string();
    let o = cli_path(&["solve", "--relations", &r, "--constants"], &p);
    let v = json(&o);
    // x2 = 0 forces x1 = 1; x3 free.
    assert_eq!(v["solutions"], serde_json::json!(["100", "101"]));
    let refused = cli_path(&["solve", "--relations", &r], &p);
    assert_eq!(refused.code, EXIT_INPUT);
    assert!(refused.stderr.starts_with("error[E_INPUT]: "));
}

#[test]
fn classify_verdicts() {
    let s = Scratch::new();
    let xor = s.file("xor.txt", "rel XOR2 2\n01 10\n");
    let v = json(&cli_path(&["classify", "--constants"], &xor));
    assert_eq!(v["tractable"], true);
    assert_eq!(v["relations"][0]["flags"]["affine"], true);
    let nae = s.file("nae.txt", "rel NAE 3\n001 010 011 100 101 110\n");
    let v = json(&cli_path(&["classify"], &nae));
    assert_eq!(v["tractable"], false);
    assert_eq!(v["witness"], Value::Null);
    assert_eq!(cli_path(&["--format", "text", "classify"], &nae).stdout, "NP-complete\n");
    let r0 = s.file("r0.txt", "rel R0 3\n000 110 101\n");
    assert_eq!(json(&cli_path(&["classify"], &r0))["witness"], "zero_valid");
    assert_eq!(json(&cli_path(&["classify", "--constants"], &r0))["tractable"], false);
}

#[test]
fn reductions_emit_dimacs_and_aux_dims() {
    let s = Scratch::new();
    let p = s.file("long.cnf", "p cnf 6 1\n1 2 3 4 5 6 0\n");
    let v = json(&cli_path(&["reduce3"], &p));
    assert_eq!(v["dimension"], 9);
    assert_eq!(v["projection_dims"], serde_json::json!([7, 8, 9]));
    let text = cli_path(&["--format", "text", "reduce3"], &p).stdout;
    assert!(text.starts_with("c project 7 8 9\np cnf 9 4\n"), "{text}");

    let three = s.file("three.cnf", "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n");
    let v = json(&cli_path(&["reduce322"], &three));
    assert_eq!(v["dimension"], 5);
    let reduced = s.file("r.cnf", v["dimacs"].as_str().unwrap());
    let projected = json(&cli_path(&["project", "--dims", "4,5"], &reduced));
    assert_eq!(projected["solutions"], json(&cli_path(&["solve"], &three))["solutions"]);
}

#[test]
fn realize_round_trips_through_betti() {
    let s = Scratch::new();
    let p = s.file("rp2.sc", "scomplex 6\n1 2 4\n1 2 6\n1 3 4\n1 3 5\n1 5 6\n2 3 5\n2 3 6\n2 4 5\n3 4 6\n4 5 6\n");
    let cnf = cli_path(&["--format", "text", "realize"], &p);
    assert_eq!(cnf.code, EXIT_OK, "{}", cnf.stderr);
    let f = s.file("rp2.cnf", &cnf.stdout);
    let z = json(&cli_path(&["betti"], &f));
    assert_eq!(z["betti"][0], 1);
    assert_eq!(z["torsion"][1], serde_json::json!([2]));
    assert_eq!(cli_path(&["betti"], &p).stdout, cli_path(&["betti"], &f).stdout);
}

#[test]
fn verify_reports_are_stable_and_configurable() {
    let a = cli(&["verify", "tractable-homology", "--flavor", "horn", "--trials", "30", "--seed", "7"]);
    let b = cli(&["verify", "tractable-homology", "--flavor", "horn", "--trials", "30", "--seed", "7"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["trials"], 30);

    let s = Scratch::new();
    let cfg = s.file("v.toml", "seed = 11\n[wedge-union]\ntrials = 4\nwedges = 2\nflavor = \"horn\"\n");
    let v = json(&cli(&["verify", "wedge-union", "--config", cfg.to_str().unwrap()]));
    assert_eq!((v["trials"].as_u64(), v["seed"].as_u64()), (Some(4), Some(11)));

    let bad = s.file("bad.toml", "[wedge-union]\ntrails = 4\n");
    assert_eq!(cli(&["verify", "wedge-union", "--config", bad.to_str().unwrap()]).code, EXIT_INPUT);
}

#[test]
fn verify_precondition_is_an_input_error() {
    // NAE is neither 0-valid nor 1-valid, so trivially-valid does not apply.
    let s = Scratch::new();
    let nae = s.file("nae.txt", "rel NAE 3\n001 010 011 100 101 110\n");
    let o = cli(&["verify", "trivially-valid", "--relations", nae.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_INPUT);
    let imp = s.file("imp.txt", "rel IMP 2\n00 01 11\n");
    let o = cli(&["verify", "trivially-valid", "--relations", imp.to_str().unwrap(), "--trials", "20"]);
    assert_eq!(json(&o)["failures"], serde_json::json!([]));
}

#[test]
fn usage_and_input_errors() {
    let o = cli(&["frobnicate"]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.starts_with("error[E_USAGE]: "));
    assert_eq!(o.stderr.lines().count(), 1);

    assert_eq!(cli(&["betti", "/nonexistent/x.cnf"]).code, EXIT_INPUT);
    assert_eq!(cli(&["verify", "no-such-check"]).code, EXIT_INPUT);
    assert_eq!(cli(&["--max-dim", "21", "verify", "structural"]).code, EXIT_INPUT);
    assert_eq!(cli(&["--max-faces", "5000001", "verify", "structural"]).code, EXIT_INPUT);

    let s = Scratch::new();
    let junk = s.file("junk.txt", "hello world\n");
    assert_eq!(cli_path(&["solve"], &junk).code, EXIT_INPUT);
    let bad = s.file("bad.cnf", "p cnf 2 1\n1 3 0\n");
    let o = cli_path(&["solve"], &bad);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.starts_with("error[E_INPUT]: "));
}

#[test]
fn resource_caps() {
    let s = Scratch::new();
    let p = s.file("hexagon.cnf", HEXAGON);
    let o = cli_path(&["--max-dim", "2", "solve"], &p);
    assert_eq!(o.code, EXIT_RESOURCE);
    assert!(o.stderr.starts_with("error[E_RESOURCE]: "));
    // The hexagon has 12 faces.
    assert_eq!(cli_path(&["--max-faces", "11", "betti"], &p).code, EXIT_RESOURCE);
    assert_eq!(cli_path(&["--max-faces", "12", "betti"], &p).code, EXIT_OK);
    let big = s.file("big.cnf", "p cnf 21 1\n1 0\n");
    assert_eq!(cli_path(&["solve"], &big).code, EXIT_RESOURCE);
}

#[test]
fn binary_exit_codes_and_streams() {
    let s = Scratch::new();
    let p = s.file("hexagon.cnf", HEXAGON);
    let ok = Command::new(env!("CARGO_BIN_EXE_solspace")).arg("betti").arg(&p).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(ok.stdout).unwrap().contains("\"f\":[6,6]"));
    let bad = Command::new(env!("CARGO_BIN_EXE_solspace")).arg("betti").arg(s.0.path().join("missing")).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8(bad.stderr).unwrap().starts_with("error[E_INPUT]"));
    let help = Command::new(env!("CARGO_BIN_EXE_solspace")).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
}
