use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const EXAMPLE: &str = "\
# thirteen classes, N = 30
2 6
4 6
1 10
3 10
7 10
9 10
0 15
5 30
6 30
12 30
18 30
24 30
25 30
";

fn covsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covsys"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn verify_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "example.txt", EXAMPLE);
    let o = covsys(&["verify", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.starts_with("exact, N=30, density=1\n"), "{s}");
    assert!(s.contains("greatest modulus 30 occurs 6 times"));
    assert!(s.contains("verifiers: scan=true crt=true genfun=true"));
}

#[test]
fn verify_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "example.txt", EXAMPLE);
    let o = covsys(&["--format", "json", "verify", &f]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["exact"], true);
    assert_eq!(doc["lcm"], 30);
    assert_eq!(doc["greatest_modulus_count"], 6);
}

#[test]
fn verify_non_exact_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "gap.txt", "0 2\n1 4\n");
    let o = covsys(&["verify", &f]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.starts_with("not exact, N=4, density=3/4"), "{s}");
    assert!(s.contains("uncovered: 3"));
}

#[test]
fn json_input_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_covsys"))
        .args(["verify", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"classes": [[0, 2], [-1, 2]]}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("exact, N=2"));
}

#[test]
fn irreducible_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "example.txt", EXAMPLE);
    let o = covsys(&["irreducible", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "irreducible\n");

    let o = covsys(&["reduce", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("cannot reduce"));

    let basic = write(dir.path(), "basic.txt", "0 2\n1 2\n");
    let o = covsys(&["irreducible", &basic]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "reducible: (n=2, p=2, d=0)\n");
}

#[test]
fn vanish_example_sum() {
    let o = covsys(&[
        "vanish",
        "--modulus",
        "30",
        "--exponents",
        "5,6,12,18,24,25",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("vanishes\n"));
    assert!(s.contains("no coset decomposition (0 contained cosets)"));

    let o = covsys(&["vanish", "--modulus", "6", "--exponents", "0,3,1,-3,5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("decomposition: z^0*sigma(P_2) + z^1*sigma(P_3)"));

    let o = covsys(&["vanish", "--modulus", "6", "--exponents", "0,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "does not vanish\n");
}

#[test]
fn reduce_trace_replays() {
    let dir = tempfile::tempdir().unwrap();
    let generated = covsys(&["gen", "--seed", "11", "--steps", "6", "--primes", "2,3"]);
    assert_eq!(generated.status.code(), Some(0));
    let sys = write(dir.path(), "sys.txt", &stdout(&generated));
    let trace = dir.path().join("trace.json");
    let trace = trace.to_str().unwrap();

    let o = covsys(&["reduce", &sys, "--trace", trace]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("reduced to 0(1) in 6 steps"));

    let replayed = covsys(&["gen", "--replay", trace]);
    assert_eq!(replayed.status.code(), Some(0));
    assert_eq!(stdout(&replayed), stdout(&generated));
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--seed", "42", "--steps", "8", "--primes", "2,3,5,7"];
    let a = covsys(&args);
    let b = covsys(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(
        stdout(&a),
        stdout(&covsys(&[
            "gen", "--seed", "43", "--steps", "8", "--primes", "2,3,5,7"
        ]))
    );
}

#[test]
fn split_and_merge() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.txt", "0 1\n");
    let o = covsys(&[
        "split",
        &f,
        "--residue",
        "0",
        "--modulus",
        "1",
        "--arity",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0 3\n1 3\n2 3\n");

    let g = write(dir.path(), "s.txt", &stdout(&o));
    let o = covsys(&[
        "merge",
        &g,
        "--modulus",
        "3",
        "--prime",
        "3",
        "--shift",
        "0",
    ]);
    assert_eq!(stdout(&o), "0 1\n");

    let o = covsys(&[
        "merge",
        &g,
        "--modulus",
        "6",
        "--prime",
        "2",
        "--shift",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn natural_search() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "example.txt", EXAMPLE);
    let o = covsys(&["natural", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "not natural\n");
}

#[test]
fn enumerate_counts() {
    let o = covsys(&["enumerate", "--lcm", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# 5 systems with moduli dividing 4\n"));
    let o = covsys(&["enumerate", "--lcm", "12", "--count"]);
    assert_eq!(stdout(&o), "206\n");
    let o = covsys(&["enumerate", "--lcm", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.txt", "0 2\n1 x\n");
    let o = covsys(&["verify", &f]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains(":2:3"), "{e}");

    let o = covsys(&["verify", dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.txt");
    let o = covsys(&[
        "-o",
        out.to_str().unwrap(),
        "gen",
        "--seed",
        "1",
        "--steps",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(fs::read_to_string(out).unwrap().ends_with('\n'));
}
