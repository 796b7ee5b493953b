//! End-to-end tests of the `padic-char` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-char"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn sl2_theta_example() {
    let o = run(&["sl2-theta", "--p", "5", "--c", "0", "--a", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "7/3\n");
    let f = run(&[
        "sl2-theta",
        "--p",
        "5",
        "--c",
        "0",
        "--a",
        "2",
        "--method",
        "formula",
    ]);
    assert_eq!(stdout(&f), "7/3\n");
}

#[test]
fn eps_r_example() {
    let o = run(&["eps-r", "--p", "3", "--r", "3^-1/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["sl2-theta", "--p", "4", "--c", "0", "--a", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["sl2-theta", "--p", "5", "--c", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["eps-r", "--p", "3", "--r", "5^-1/2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["eps-r", "--p", "3", "--r", "3^-2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["sl2-theta", "--p", "5", "--c", "0", "--a", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        run(&["snf", "--lattice", "/nonexistent", "--sublattice", "/x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn negative_arguments_parse() {
    let o = run(&[
        "sl2-theta",
        "--p",
        "5",
        "--c",
        "-1",
        "--a",
        "-1/2",
        "--method",
        "formula",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn sl2_trace_csv_and_json() {
    let args = [
        "sl2-trace",
        "--p",
        "3",
        "--c",
        "-1",
        "--a",
        "2",
        "--h",
        "1",
        "--k",
        "3",
    ];
    let csv = run(&[&args[..], &["--format", "csv"]].concat());
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("side,trace,closed_form"));
    assert_eq!(lines.count(), 2);

    let json = run(&[&args[..], &["--format", "json"]].concat());
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["trace"], row["closed_form"]);
        assert!(row["trace"].as_str().unwrap().contains('/'));
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["straighten", "--seed", "7", "--words", "3"]);
    let b = run(&["straighten", "--seed", "7", "--words", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["straighten", "--seed", "8", "--words", "3"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn explicit_word_straightens() {
    let o = run(&[
        "straighten",
        "--word",
        "x2 x1 x1 x3 x2 x1 x2 d1 d2 d3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0]["oracle_agrees"], "true");
    assert_eq!(
        run(&["straighten", "--word", "x4 d1"]).status.code(),
        Some(2)
    );
}

#[test]
fn snf_and_powerful_from_json() {
    let lam = write_tmp("lam.json", r#"{"p": 5, "generators": [[1, 0], [0, 1]]}"#);
    let sub = write_tmp("sub.json", r#"{"p": 5, "generators": [[5, 25], [0, 25]]}"#);
    let o = run(&[
        "snf",
        "--lattice",
        lam.to_str().unwrap(),
        "--sublattice",
        sub.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p,divisors,uniform_defect\n5,\"1,2\",1\n");

    for (e, expect) in [
        ("1,0,1", "true\n"),
        ("1,1,1", "true\n"),
        ("1,2,1", "false\n"),
    ] {
        let o = run(&["powerful", "--unitriangular", e, "--p", "5"]);
        assert_eq!(stdout(&o), expect, "exponents {e}");
    }
}

#[test]
fn binom_and_dominance() {
    let o = run(&["binom-id", "--a", "2", "--b", "9", "--h", "2", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("true"));
    let d = run(&[
        "dominance",
        "--p",
        "3",
        "--q",
        "1/4",
        "--beta",
        "2",
        "--gamma",
        "1",
        "--trunc",
        "20",
    ]);
    assert_eq!(d.status.code(), Some(0));
    assert!(stdout(&d).lines().nth(1).unwrap().contains(" 6 "));
}

#[test]
fn amice_verdicts() {
    let zero = run(&[
        "amice",
        "--p",
        "3",
        "--h",
        "1",
        "--rule",
        "zero",
        "--class",
        "holomorphic",
        "--class-h",
        "1",
        "--trunc",
        "80",
    ]);
    assert_eq!(stdout(&zero), "true\n");
    let full = run(&[
        "amice",
        "--p",
        "3",
        "--rule",
        "full-digit",
        "--class",
        "holomorphic",
        "--class-h",
        "0",
        "--trunc",
        "729",
    ]);
    assert_eq!(stdout(&full), "false\n");
    // v_p(b_n) = n: bounded below after subtracting n·λ for λ = 1/2.
    let vals: Vec<String> = (0..=40).map(|n| format!("\"{n}\"")).collect();
    let table = write_tmp("rule.json", &format!("[{}]", vals.join(",")));
    let t = run(&[
        "amice",
        "--p",
        "3",
        "--rule-file",
        table.to_str().unwrap(),
        "--class",
        "cr",
        "--lambda",
        "1/2",
        "--trunc",
        "40",
    ]);
    assert_eq!(
        t.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&t.stderr)
    );
    assert_eq!(stdout(&t), "true\n");
}

#[test]
fn iwahori_theta_pipeline_matches_formula() {
    let datum = write_tmp(
        "datum.json",
        r#"{"p": 3, "torus_rank": 1, "roots": [[1], [2]], "chi_w": [0], "levels": [1, 1], "k": 2}"#,
    );
    let d = datum.to_str().unwrap();
    let pipe = run(&["iwahori-theta", "--datum", d, "--s", "4"]);
    let formula = run(&[
        "iwahori-theta",
        "--datum",
        d,
        "--s",
        "4",
        "--method",
        "formula",
    ]);
    assert_eq!(
        pipe.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&pipe.stderr)
    );
    assert_eq!(pipe.stdout, formula.stdout);
}

#[test]
fn sweep_reports_total() {
    let o = run(&[
        "sweep", "--p", "5", "--c", "0", "--s", "2", "--format", "json",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let total = rows.iter().find(|r| r["component"] == "total").unwrap();
    assert_eq!(total["value"], "7/3");
    // Three levels, three ε-exponents, two charts, plus three summary rows.
    assert_eq!(rows.len(), 3 * 3 * 2 + 3);
}

#[test]
fn sweep_from_family_file() {
    let fam = write_tmp("family.json", r#"{"kind": "sl2", "p": 5, "c": 1}"#);
    let o = run(&["sweep", "--family", fam.to_str().unwrap(), "--s", "3"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn verify_suites_pass() {
    for suite in [
        "smooth",
        "count-divisible",
        "binom",
        "snf",
        "eps",
        "dominance",
        "alternating-sums",
        "threshold",
    ] {
        let o = run(&["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "suite {suite}:\n{}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}
