use std::fs;
use std::path::{Path, PathBuf};

use taxicab::cli::run_cli;
use taxicab::report::read_report;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("taxicab").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn project_l1min_on_the_two_point_example() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "6,8\n");
    let b = write(dir.path(), "b.csv", "4,2\n");
    let (code, out, err) = run(&["project", "--method", "l1min", "--x", s(&b), "--y", s(&a)]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("alpha: 1.5\n"), "{out}");
    assert!(out.contains("equality: 14 = 9 + 5\n"), "{out}");
}

#[test]
fn project_other_methods() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "6\n8\n");
    let b = write(dir.path(), "b.csv", "4,-2\n");
    let (code, out, _) = run(&["project", "--method", "eucl", "--x", s(&b), "--y", s(&a)]);
    assert_eq!(code, 0);
    assert!(out.contains("alpha: 0.4\n"), "{out}");
    let (code, out, _) = run(&["project", "--method", "l1op", "--x", s(&b), "--y", s(&a)]);
    assert_eq!(code, 0);
    assert!(out.contains("strict inequality"), "{out}");
}

#[test]
fn decompose_svd_on_a_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "diag31.csv", "3,0\n0,1\n");
    let (code, out, err) = run(&["decompose", "--method", "svd", "-k", "2", s(&m)]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("deltas: 3, 1\n"), "{out}");
    assert!(out.contains("energy identity: 10 = 10 + 0"), "{out}");
    for method in ["tsvd", "l1min"] {
        let (code, out, _) = run(&["decompose", "--method", method, "-k", "2", s(&m)]);
        assert_eq!(code, 0);
        assert!(out.contains("deltas: 3, 1\n"), "{method}: {out}");
    }
    // the column starts stop at sgn(b) = (1, 0); the global maximizer is u = (1, 1)
    let (code, out, _) = run(&["decompose", "--method", "tsvd", "-k", "2", "--exhaustive", s(&m)]);
    assert_eq!(code, 0);
    assert!(out.contains("deltas: 4, 3\n"), "{out}");
    assert!(out.contains("l1 inequality: 4 <= 7 + 0 (margin 3)"), "{out}");
}

#[test]
fn conjugate_rows() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.csv", "1,1\n1,0\n");
    let (code, out, _) = run(&["conjugate", "--p", "1", s(&m)]);
    assert_eq!(code, 0);
    assert!(out.contains("y2: 0.5, -0.5\n"), "{out}");
    let (code, _, _) = run(&["conjugate", "--p", "3", s(&m)]);
    assert_eq!(code, 2);
    let dep = write(dir.path(), "dep.csv", "1,2\n2,4\n");
    let (code, _, err) = run(&["conjugate", "--p", "2", s(&dep)]);
    assert_eq!(code, 2);
    assert!(err.contains("collapsed"), "{err}");
}

#[test]
fn verify_passes_on_valid_inputs() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in [
        "3,0\n0,1\n",
        "6,8\n4,2\n4,-2\n",
        "0.8,-1.3,0.4\n-0.2,0.9,1.7\n1.5,0.3,-0.6\n-1.1,-0.7,0.5\n",
        "1,2,3\n2,4,6\n",
        "0,0\n0,0\n",
        "5\n",
        "1,0,0,2\n0,0,0,0\n-3,1,0,0\n",
    ]
    .iter()
    .enumerate()
    {
        let m = write(dir.path(), &format!("m{i}.csv"), text);
        let (code, out, err) = run(&["verify", s(&m)]);
        assert_eq!(code, 0, "{text:?}\n{out}\n{err}");
        assert!(out.ends_with("0 failed\n"), "{out}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "1,x\n");
    let (code, _, err) = run(&["verify", s(&bad)]);
    assert_eq!(code, 3);
    assert!(err.contains("row 1, column 2"), "{err}");

    let ragged = write(dir.path(), "ragged.csv", "1,2\n3\n");
    assert_eq!(run(&["verify", s(&ragged)]).0, 3);
    assert_eq!(run(&["verify", "/nonexistent/file.csv"]).0, 3);

    let m = write(dir.path(), "m.csv", "3,0\n0,1\n");
    assert_eq!(run(&["decompose", "--method", "svd", "-k", "3", s(&m)]).0, 2);
    assert_eq!(run(&["decompose", "--method", "nope", "-k", "1", s(&m)]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&[]).0, 2);

    let zero = write(dir.path(), "z.csv", "0,0\n");
    let x = write(dir.path(), "x.csv", "1,2\n");
    assert_eq!(run(&["project", "--method", "eucl", "--x", s(&zero), "--y", s(&x)]).0, 2);
    assert_eq!(run(&["project", "--method", "eucl", "--x", s(&m), "--y", s(&x)]).0, 3);

    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("decompose"));
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn header_and_delimiter_options() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.csv", "p;q\n3;0\n0;1\n");
    let (code, out, err) = run(&["--header", "--delimiter", ";", "decompose", "--method", "tsvd", "-k", "2", s(&m)]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("deltas: 3, 1\n"));
}

#[test]
fn json_reports_are_deterministic_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "m.csv",
        "0.8,-1.3,0.4\n-0.2,0.9,1.7\n1.5,0.3,-0.6\n-1.1,-0.7,0.5\n",
    );
    for method in ["svd", "tsvd", "l1min"] {
        let j1 = dir.path().join(format!("{method}1.json"));
        let j2 = dir.path().join(format!("{method}2.json"));
        for j in [&j1, &j2] {
            let (code, _, err) = run(&["decompose", "--method", method, "-k", "3", s(&m), "--json", s(j)]);
            assert_eq!(code, 0, "{err}");
        }
        let b1 = fs::read(&j1).unwrap();
        assert_eq!(b1, fs::read(&j2).unwrap(), "{method}");
        let report = read_report(b1.as_slice()).unwrap();
        assert_eq!(report.command, "decompose");
        assert_eq!(report.decompositions[0].steps.len(), 3);
        assert!(report.wall_time_ms.is_none());
        let mut again = Vec::new();
        taxicab::report::write_report(&report, &mut again).unwrap();
        assert_eq!(again, b1);
    }

    let j = dir.path().join("verify.json");
    assert_eq!(run(&["verify", s(&m), "--json", s(&j), "--timing"]).0, 0);
    let report = read_report(fs::File::open(&j).unwrap()).unwrap();
    assert!(report.wall_time_ms.is_some());
    assert!(report.verdicts.iter().all(|c| c.passed));
    assert_eq!(report.decompositions.len(), 3);
}

#[test]
fn unwritable_json_target() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.csv", "3,0\n0,1\n");
    let target = dir.path().join("missing").join("r.json");
    assert_eq!(run(&["decompose", "--method", "svd", "-k", "1", s(&m), "--json", s(&target)]).0, 3);
}
