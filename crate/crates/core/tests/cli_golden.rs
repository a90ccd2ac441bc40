//! Runs the binary and compares stdout byte for byte with files under
//! `tests/golden`. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> PathBuf {
    root().join("tests/fixtures").join(name)
}

fn gqflag(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqflag")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 report")
}

fn assert_golden(name: &str, out: &Output) {
    assert!(
        out.status.success(),
        "{name}: exit {:?}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &out.stdout).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(stdout(out), expected, "{name} differs from its golden file");
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn fusions_numeric_two_two() {
    let out = gqflag(&root(), &["fusions", "--numeric", "2", "2", "--format", "csv"]);
    assert_golden("fusions_numeric_2_2.csv", &out);
    // seven partitions plus the comment and header lines
    assert_eq!(stdout(&out).lines().count(), 9);
}

#[test]
fn fusions_symbolic_table() {
    let out = gqflag(&root(), &["fusions", "--symbolic", "--format", "csv"]);
    assert_golden("fusions_symbolic.csv", &out);
    let text = stdout(&out);
    assert!(text.contains("\"{1}|{2,3,4,5}|{6,7}\",ALL\n"));
    assert!(text.contains("\"{1,2}|{3,4}|{5,6}|{7}\",S_EQ_T\n"));
}

#[test]
fn fusions_numeric_text_report() {
    assert_golden("fusions_numeric_3_1.txt", &gqflag(&root(), &["fusions", "--numeric", "3", "1"]));
}

#[test]
fn selftest_report() {
    assert_golden("selftest.txt", &gqflag(&root(), &["selftest"]));
}

#[test]
fn build_reports() {
    let dir = tmp();
    assert_golden("build_symplectic_2.txt", &gqflag(dir.path(), &["build", "symplectic", "2"]));
    let out = gqflag(dir.path(), &["build", "grid", "3", "--format", "json"]);
    assert_golden("build_grid_3.json", &out);
}

#[test]
fn scheme_reports() {
    let out = gqflag(&root(), &["scheme", fixture("duads_synthemes.json").to_str().unwrap()]);
    assert_golden("scheme_duads_synthemes.txt", &out);
    let dir = tmp();
    gqflag(dir.path(), &["build", "grid", "1", "-o", "g1.json"]);
    assert_golden("scheme_grid_1.txt", &gqflag(dir.path(), &["scheme", "g1.json"]));
    gqflag(dir.path(), &["build", "grid", "4", "-o", "g4.json"]);
    let g4 = gqflag(dir.path(), &["scheme", "g4.json"]);
    assert_golden("scheme_grid_4.txt", &g4);
    assert!(stdout(&g4).contains("order: (4,1)\n"));
}

/// build -> scheme -> fuse -> reconstruct, with files passed between steps.
#[test]
fn reconstruct_pipeline() {
    let dir = tmp();
    let d = dir.path();
    for args in [
        &["build", "symplectic", "3", "-o", "w3.json"][..],
        &["scheme", "w3.json", "-o", "w3.scheme", "--tensor-csv", "w3.csv", "--valency-csv", "w3.eta.csv"],
        &["fuse", "w3.scheme", "-o", "w3f.scheme"],
    ] {
        let out = gqflag(d, args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let csv = fs::read_to_string(d.join("w3.csv")).unwrap();
    assert!(csv.starts_with("k,i,j,p\n"));
    assert_eq!(csv.lines().count(), 1 + 512);
    assert_eq!(fs::read_to_string(d.join("w3.eta.csv")).unwrap().lines().nth(8), Some("7,81"));

    let four = gqflag(d, &["reconstruct", "w3f.scheme", "--classes", "4", "--scramble", "2024"]);
    assert_golden("reconstruct_w3_fused_scrambled.txt", &four);
    let text = stdout(&four);
    assert!(text.contains("seed: 2024\n"));
    assert!(text.contains("levels: [1,6,18,54,81]\n"));

    let seven = gqflag(d, &["reconstruct", "w3.scheme", "--classes", "7", "--scramble", "7", "-o", "back.json"]);
    assert!(stdout(&seven).contains("PASS gq_axioms: order (3,3)"));
    let again = gqflag(d, &["build", "symplectic", "3"]);
    assert!(again.status.success());
    let rebuilt = gqflag(d, &["scheme", "back.json"]);
    assert!(stdout(&rebuilt).contains("PASS tensor_matches_table"));
}

#[test]
fn scrambled_grid_needs_orientation() {
    let dir = tmp();
    let d = dir.path();
    gqflag(d, &["build", "grid", "3", "-o", "g3.json"]);
    gqflag(d, &["scheme", "g3.json", "-o", "g3.scheme"]);
    let plain = gqflag(d, &["reconstruct", "g3.scheme", "--classes", "7", "--scramble", "3"]);
    assert!(stdout(&plain).contains("other_orders: [\"(3,1)\"]"));
    let oriented = gqflag(d, &["reconstruct", "g3.scheme", "--classes", "7", "--scramble", "3", "--order", "3,1"]);
    assert_golden("reconstruct_grid_3_oriented.txt", &oriented);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tmp();
    let d = dir.path();
    gqflag(d, &["build", "symplectic", "2", "-o", "w2.json"]);
    gqflag(d, &["scheme", "w2.json", "-o", "w2.scheme"]);
    for args in [
        &["reconstruct", "w2.scheme", "--classes", "7", "--scramble", "99", "--format", "json"][..],
        &["scheme", "w2.json", "--format", "csv"],
        &["fusions", "--symbolic"],
    ] {
        let a = gqflag(d, args);
        let b = gqflag(d, args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = gqflag(d, &["reconstruct", "w2.scheme", "--classes", "7", "--scramble", "1"]);
    let b = gqflag(d, &["reconstruct", "w2.scheme", "--classes", "7", "--scramble", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn seed_appears_in_every_format() {
    for format in ["text", "json", "csv"] {
        let out = gqflag(&root(), &["selftest", "--seed", "31337", "--format", format]);
        assert!(stdout(&out).contains("31337"), "{format}");
    }
}

#[test]
fn exit_codes() {
    let dir = tmp();
    let d = dir.path();
    let code = |args: &[&str]| gqflag(d, args).status.code();

    assert_eq!(code(&["build", "symplectic", "6"]), Some(2));
    assert_eq!(code(&["build", "grid", "0"]), Some(2));
    assert_eq!(code(&["fusions", "--numeric", "1", "1"]), Some(2));
    assert_eq!(code(&["fusions"]), Some(2));
    assert_eq!(code(&["scheme", "missing.json"]), Some(2));

    let broken = fixture("duads_missing_incidence.json");
    let out = gqflag(d, &["scheme", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("GQ1 violated"));

    gqflag(d, &["build", "symplectic", "2", "-o", "w2.json"]);
    gqflag(d, &["scheme", "w2.json", "-o", "w2.scheme"]);
    gqflag(d, &["fuse", "w2.scheme", "-o", "w2f.scheme"]);
    assert_eq!(code(&["reconstruct", "w2f.scheme", "--classes", "7"]), Some(2));
    assert_eq!(code(&["reconstruct", "w2.scheme", "--classes", "5"]), Some(2));
    assert_eq!(code(&["reconstruct", "w2.scheme", "--classes", "7", "--order", "x"]), Some(2));
    // a valid order that the data does not match is a verification failure
    assert_eq!(code(&["reconstruct", "w2.scheme", "--classes", "7", "--scramble", "4", "--order", "3,3"]), Some(1));

    fs::write(d.join("bad.scheme"), "3 7\n0 1 2\n1 0\n").unwrap();
    let out = gqflag(d, &["reconstruct", "bad.scheme", "--classes", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}
