use std::io::Write;
use std::process::{Command, Output, Stdio};

use num_complex::Complex64;
use pellet_core::embed::det2;
use pellet_core::{LacunaryPolynomial, MatrixPolynomial};

fn pellet(args: &[&str]) -> Output {
    pellet_with_stdin(args, "")
}

fn pellet_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pellet"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn gap_on_two_roots() {
    let o = pellet(&["gap", "--k", "1", "--norm", "one", "--poly", "1,-3,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| plain | one | 1 | gap | 1.00000 | 2.00000 | 1 | false |"));

    let o = pellet(&["gap", "--k", "1", "--poly", "1,-3,2", "--format", "json", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let g = &v[0];
    assert_eq!(g["status"]["kind"], "gap");
    assert!((g["status"]["x1"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((g["status"]["x2"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(g["eig_count_inside"], 1);
}

#[test]
fn singular_constant_term_leaves_lower_absent() {
    let o = pellet(&["bounds", "--poly", "1,2,3,0", "--format", "json", "--norm", "one", "--norm", "inf"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for b in v.as_array().unwrap() {
        assert!(b["lower"].is_null());
        assert!(b["upper"].as_f64().unwrap() > 0.0);
    }
    let o = pellet(&["bounds", "--poly", "1,2,3,0", "--variant", "qr"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn square_output_round_trips() {
    let input = r#"{"m":2,"n":2,"coeffs":[
        [[[0.3,-1.0],[2.0,0.5]],[[-0.25,0.125],[1.0e-3,7.0]]],
        [[[1.0,1.0],[0.1,0.0]],[[0.0,0.2],[-3.3,0.0]]],
        [[[2.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.5,0.0]]]]}"#;
    let o = pellet_with_stdin(&["square", "--input", "-"], input);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let parsed = MatrixPolynomial::from_json(stdout(&o).trim()).unwrap();
    let expected = MatrixPolynomial::from_json(input)
        .unwrap()
        .monicize()
        .unwrap()
        .square_repartition()
        .unwrap();
    assert_eq!(parsed, expected);

    let again = pellet_with_stdin(&["oracle", "--input", "-", "--format", "json"], &stdout(&o));
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again)["count"], 4);
}

#[test]
fn embed_determinant() {
    let o = pellet(&["embed", "--n", "7", "--coeffs", "1,-2,0.5,3,-1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let q = MatrixPolynomial::from_json(stdout(&o).trim()).unwrap();
    let p = LacunaryPolynomial::from_real(7, [1.0, -2.0, 0.5, 3.0, -1.0, 2.0]).unwrap();
    for z in [Complex64::new(0.4, 0.9), Complex64::new(-1.3, 0.2)] {
        let (d, v) = (det2(&q.evaluate(z)), p.evaluate(z));
        assert!((d - v).norm() < 1e-12 * v.norm().max(1.0));
    }
    let o = pellet(&["embed", "--n", "7", "--coeffs", "0,-2,0.5,3,-1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn experiment_is_deterministic() {
    let args = ["experiment", "--example", "ex1", "--m", "2", "--trials", "6", "--seed", "7", "--format", "csv"];
    let a = pellet(&args);
    let b = pellet(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut other = args;
    other[7] = "8";
    assert_ne!(pellet(&other).stdout, a.stdout);
}

#[test]
fn experiment_ex1_columns() {
    let o = pellet(&[
        "experiment", "--example", "ex1", "--m", "10", "--trials", "200", "--seed", "42", "--norm", "one", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let block = out.split("\n\n").next().unwrap();
    let mut rd = csv::Reader::from_reader(block.as_bytes());
    let hdr = rd.headers().unwrap().clone();
    let col = |name: &str| hdr.iter().position(|h| h == name).unwrap();
    let (p, q) = (col("P"), col("Q"));
    let row = rd.records().next().unwrap().unwrap();
    let (pm, qm) = (row[p].parse::<f64>().unwrap(), row[q].parse::<f64>().unwrap());
    assert!(pm >= 100.0 && qm >= 100.0);
    assert!(qm < pm);
}

#[test]
fn exit_codes() {
    assert_eq!(pellet(&["bounds", "--poly", "1,x,2"]).status.code(), Some(1));
    assert_eq!(pellet(&["bounds"]).status.code(), Some(1));
    assert_eq!(pellet(&["gap", "--k", "1"]).status.code(), Some(1));
    assert_eq!(pellet_with_stdin(&["oracle", "--input", "-"], "{ not json").status.code(), Some(1));
    assert_eq!(pellet(&["gap", "--k", "3", "--variant", "q", "--poly", "1,0,-5,0,4"]).status.code(), Some(2));
    assert_eq!(pellet(&["gap", "--k", "2", "--variant", "q", "--poly", "1,0,-5,4"]).status.code(), Some(2));
    assert_eq!(pellet(&["gap", "--k", "9", "--poly", "1,-3,2"]).status.code(), Some(2));
    assert_eq!(pellet(&["experiment", "--example", "ex9"]).status.code(), Some(1));
    let o = pellet(&["gap", "--k", "1", "--poly", "1,-3,2", "--variant", "qr"]);
    assert_eq!(o.status.code(), Some(1));
    let line = String::from_utf8(o.stderr).unwrap();
    assert_eq!(line.lines().count(), 1);
    assert_eq!(pellet(&["--help"]).status.code(), Some(0));
}

#[test]
fn singular_leading_for_oracle() {
    let input = r#"{"m":2,"n":1,"coeffs":[
        [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]],
        [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]]]}"#;
    let o = pellet_with_stdin(&["oracle", "--input", "-"], input);
    assert_eq!(o.status.code(), Some(2));
}
