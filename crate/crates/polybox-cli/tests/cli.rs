//! End-to-end tests of the `polybox` binary: report contents, exit codes,
//! byte reproducibility, and the file formats.

use assert_cmd::Command;
use predicates::prelude::*;

fn polybox() -> Command {
    Command::cargo_bin("polybox").expect("binary builds")
}

#[test]
fn census_d3_text_report_is_exact_and_reproducible() {
    let expected = "\
[census]
dim: 3
alphabet-classes: 2
sizes: 5..5
total-covers: 8
classes: 1

[size]
size: 5
covers: 8
classes: 1
";
    let first = polybox()
        .args(["census", "--dim", "3", "--sizes", "5..5"])
        .assert()
        .success()
        .stdout(expected)
        .get_output()
        .stdout
        .clone();
    let second = polybox()
        .args(["census", "--dim", "3", "--sizes", "5..5"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_eq!(first, second, "report must be byte-reproducible");
}

#[test]
fn census_expand_orbits_lists_the_class() {
    polybox()
        .args(["census", "--dim", "3", "--sizes", "5..5", "--expand-orbits"])
        .assert()
        .success()
        .stdout(predicate::str::contains("[class]"))
        .stdout(predicate::str::contains("orbit-size: 8"));
}

#[test]
fn census_json_lines_format() {
    polybox()
        .args([
            "census", "--dim", "3", "--sizes", "5..5", "--format", "json-lines",
        ])
        .assert()
        .success()
        .stdout(predicate::str::contains(
            r#"{"alphabet-classes":2,"classes":1,"dim":3,"record":"census","sizes":"5..5","total-covers":8}"#,
        ));
}

#[test]
fn manifest_goes_to_stderr_as_json() {
    polybox()
        .args(["census", "--dim", "3", "--sizes", "5..5"])
        .assert()
        .success()
        .stderr(predicate::str::contains(r#""tool":"polybox""#))
        .stderr(predicate::str::contains(r#""result_digest""#));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    polybox()
        .args(["census", "--dim", "3", "--sizes", "5..5"])
        .arg("--out")
        .arg(&path)
        .assert()
        .success()
        .stdout("");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("total-covers: 8"));
}

#[test]
fn clique_reports_the_d3_optimum() {
    polybox()
        .args(["clique", "--dim", "3", "--classes", "2"])
        .assert()
        .success()
        .stdout(predicate::str::contains("max-clique: 5"));
}

#[test]
fn budget_exhaustion_exits_2() {
    polybox()
        .args(["clique", "--dim", "4", "--classes", "2", "--budget-nodes", "10"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("budget"));
}

#[test]
fn rigidity_verdicts_from_a_code_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.txt");
    std::fs::write(&path, "alphabet: a b\n# two words sharing a box union\naaa\na'aa\n")
        .unwrap();
    polybox()
        .arg("rigidity")
        .arg("--in")
        .arg(&path)
        .assert()
        .success()
        .stdout(predicate::str::contains("verdict: not-rigid"))
        .stdout(predicate::str::contains("{baa; b'aa}"));
}

#[test]
fn malformed_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "alphabet: a b\naaa\nbb\n").unwrap();
    polybox()
        .arg("rigidity")
        .arg("--in")
        .arg(&path)
        .assert()
        .code(3)
        .stderr(predicate::str::contains("error"));
    polybox()
        .args(["rigidity", "--in", "/nonexistent/code.txt"])
        .assert()
        .code(3);
}

#[test]
fn tiling_round_trip_realize_validate_stats() {
    let dir = tempfile::tempdir().unwrap();
    let code_path = dir.path().join("grid.txt");
    std::fs::write(&code_path, "alphabet: a b\naa\na'a\naa'\na'a'\n").unwrap();
    let tiling_path = dir.path().join("tiling.txt");
    polybox()
        .arg("tiling")
        .arg("realize")
        .arg("--in")
        .arg(&code_path)
        .args(["--offsets", "0"])
        .assert()
        .success()
        .stdout(predicate::str::contains("valid: true"));

    std::fs::write(&tiling_path, "0 0\n0 1\n1 1/2\n1 3/2\n").unwrap();
    polybox()
        .arg("tiling")
        .arg("validate")
        .arg("--in")
        .arg(&tiling_path)
        .assert()
        .success()
        .stdout(predicate::str::contains("valid: true"));
    polybox()
        .arg("tiling")
        .arg("stats")
        .arg("--in")
        .arg(&tiling_path)
        .args(["--sample-denominator", "4"])
        .assert()
        .success()
        .stdout(predicate::str::contains("twin-pairs: 2"))
        .stdout(predicate::str::contains("r-plus: 2"));
}

#[test]
fn invalid_tiling_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hole.txt");
    // Three cubes cannot tile the period-2 torus at d=2.
    std::fs::write(&path, "0 0\n0 1\n1 0\n").unwrap();
    polybox()
        .arg("tiling")
        .arg("validate")
        .arg("--in")
        .arg(&path)
        .assert()
        .code(1)
        .stdout(predicate::str::contains("valid: false"));
}

#[test]
fn verify_tables_passes() {
    polybox()
        .arg("verify-tables")
        .assert()
        .success()
        .stdout(predicate::str::contains("embedded-cover-found: true"))
        .stdout(predicate::str::contains("rows-matched: 17"))
        .stdout(predicate::str::contains("classes-outside-table: 0"));
}
