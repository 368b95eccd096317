use std::path::Path;
use std::process::{Command, Output};

use bmv_sohs::certificate::Certificate;
use bmv_sohs::cyclic::sum_of_commutators;
use bmv_sohs::gram::{GramProblem, GramProblemFile, GramSolution};
use bmv_sohs::ncpoly::Polynomial;
use bmv_sohs::verifier::VerificationReport;
use serde_json::Value;

fn bmv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gen_outputs() {
    let o = bmv(&["gen", "-m", "5", "-k", "0", "--text"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "X^5\n");

    let o = bmv(&["gen", "-m", "4", "-k", "2"]);
    let v = json(&o);
    assert_eq!(v["terms"], 6);
    let p: Polynomial = v["polynomial"].as_str().unwrap().parse().unwrap();
    let expected: Polynomial = "X^2*Y^2 + X*Y*X*Y + X*Y^2*X + Y*X^2*Y + Y*X*Y*X + Y^2*X^2".parse().unwrap();
    assert_eq!(p, expected);

    let v = json(&bmv(&["gen", "-m", "6", "-k", "4", "--squared"]));
    assert_eq!(v["terms"], 15);
    let p: Polynomial = v["polynomial"].as_str().unwrap().parse().unwrap();
    assert!(p.words().all(|w| w.len() == 12));

    assert_eq!(bmv(&["gen", "-m", "3", "-k", "4"]).status.code(), Some(2));
}

#[test]
fn cert_outputs_round_trip() {
    let o = bmv(&["cert", "-m", "7"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("Y^2*X^2*Y^2*X + Y^4*X^3"));
    let c = Certificate::from_json(&s).unwrap();
    assert_eq!(c.to_json(), s);

    assert!(stdout(&bmv(&["cert", "-m", "8"])).contains("1/2*X^2*Y^4*X^2"));
    let o = bmv(&["cert", "-m", "6", "--form", "v2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("even m"));

    let c = Certificate::from_json(&stdout(&bmv(&["cert", "-m", "9", "--form", "v2"]))).unwrap();
    assert!(c.generators().iter().all(|f| f.words().all(|w| w.to_string().starts_with('X'))));
}

#[test]
fn verify_exit_codes() {
    let o = bmv(&["verify", "-m", "13"]);
    assert_eq!(o.status.code(), Some(0));
    let r: VerificationReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.passed);
    assert_eq!(bmv(&["verify", "-m", "32"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let mut cert = Certificate::from_json(&stdout(&bmv(&["cert", "-m", "9"]))).unwrap();
    let f = cert.generators_mut()[1].clone();
    let (w, _) = f.terms().next().map(|(w, c)| (w.clone(), c.clone())).unwrap();
    cert.generators_mut()[1] = &f - &Polynomial::from_word(w);
    let bad = write(dir.path(), "corrupted.json", &cert.to_json());
    let o = bmv(&["verify", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let r: VerificationReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!r.failing_classes.is_empty());

    let junk = write(dir.path(), "junk.json", "{ not json");
    assert_eq!(bmv(&["verify", &junk]).status.code(), Some(2));
    assert_eq!(bmv(&["verify"]).status.code(), Some(2));
}

#[test]
fn count_outputs() {
    let v = json(&bmv(&["count", "-m", "7"]));
    assert_eq!((v["classes"].as_u64(), v["formula"].as_u64()), (Some(5), Some(5)));
    let v = json(&bmv(&["count", "-m", "8"]));
    assert_eq!((v["coeff_sum"].as_u64(), v["formula"].as_u64()), (Some(70), Some(70)));
    let o = bmv(&["count", "-m", "9"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["classes"], 14);
}

#[test]
fn eval_exit_codes_and_reproducibility() {
    for args in [
        ["eval", "-m", "11", "-k", "4", "-d", "4", "-n", "100", "-s", "42"],
        ["eval", "-m", "6", "-k", "3", "-d", "3", "-n", "100", "-s", "7"],
        ["eval", "-m", "3", "-k", "0", "-d", "2", "-n", "1", "-s", "1"],
    ] {
        let o = bmv(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let r: VerificationReport = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(r.seed, Some(args[10].parse().unwrap()));
    }
    let a = stdout(&bmv(&["eval", "-m", "9", "-k", "4", "-d", "3", "-n", "20", "-s", "5"]));
    let b = stdout(&bmv(&["--jobs", "1", "eval", "-m", "9", "-k", "4", "-d", "3", "-n", "20", "-s", "5"]));
    assert_eq!(a, b);
}

fn search(args: &[&str]) -> (Option<i32>, Value) {
    let mut full = vec!["search"];
    full.extend_from_slice(args);
    let o = bmv(&full);
    (o.status.code(), json(&o))
}

#[test]
fn search_outcomes() {
    let (code, v) = search(&["-m", "7", "-k", "4", "--basis", "v01"]);
    assert_eq!((code, v["solution"]["status"].as_str()), (Some(0), Some("feasible")));

    let (code, v) = search(&["-m", "5", "-k", "4", "--basis", "v01"]);
    assert_eq!((code, v["rank"].as_u64()), (Some(0), Some(1)));

    let (code, v) = search(&["-m", "6", "-k", "3", "--basis", "full", "--eps-aff", "1e-7"]);
    assert_eq!(code, Some(1));
    assert_ne!(v["solution"]["status"], "feasible");

    // output round-trips through the library parsers
    let problem: GramProblemFile = serde_json::from_value(v["problem"].clone()).unwrap();
    GramProblem::from_file(&problem).unwrap();
    let sol = GramSolution::from_json(&v["solution"].to_string()).unwrap();
    assert_eq!(serde_json::to_value(&sol).unwrap(), v["solution"]);

    assert_eq!(bmv(&["search", "-m", "7", "--basis", "bogus"]).status.code(), Some(2));
}

#[test]
fn witness_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.txt", "X^2*Y*X + Y*X^3 + 2*X^2*Y^2\n");
    let g = write(dir.path(), "g.txt", "# second polynomial\n2*Y*X^3 + 2*Y*X^2*Y\n");
    let o = bmv(&["witness", &f, &g]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let pairs: Vec<(Polynomial, Polynomial)> = v["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_str().unwrap().parse().unwrap(), p[1].as_str().unwrap().parse().unwrap()))
        .collect();
    let fp: Polynomial = "X^2*Y*X + Y*X^3 + 2*X^2*Y^2".parse().unwrap();
    let gp: Polynomial = "2*Y*X^3 + 2*Y*X^2*Y".parse().unwrap();
    assert_eq!(sum_of_commutators(&pairs), &fp - &gp);

    let o = bmv(&["witness", &f, &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pairs"].as_array().unwrap().len(), 0);

    let x = write(dir.path(), "x.txt", "X");
    let y = write(dir.path(), "y.txt", "Y");
    let o = bmv(&["witness", &x, &y]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["separating_class"], "X");

    let bad = write(dir.path(), "bad.txt", "X^^2");
    assert_eq!(bmv(&["witness", &bad, &x]).status.code(), Some(2));
}
