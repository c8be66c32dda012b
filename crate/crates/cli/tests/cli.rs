use std::path::PathBuf;

use hullcode_cli::format::{parse_code_file, render_code_file};
use hullcode_cli::{golden, run_args, Outcome, EXIT_BUDGET, EXIT_FAILURE, EXIT_HYPOTHESIS, EXIT_OK, EXIT_PARSE};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    run_args(std::iter::once("hullcode").chain(args.iter().copied()))
}

fn value<'a>(out: &'a Outcome, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    out.stdout
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in\n{}", out.stdout))
}

#[test]
fn hull_reports() {
    let out = run(&["hull", &data("ex-4.1.code")]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(value(&out, "hull_dim"), "1");
    assert_eq!(value(&out, "d"), "3");
    let out = run(&["hull", &data("ex-3.1.code")]);
    assert_eq!((value(&out, "hull_dim"), value(&out, "lcd")), ("0", "true"));
}

#[test]
fn hull_skips_distance_over_budget() {
    let out = run(&["--budget", "100", "hull", &data("ex-3.1.code")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(value(&out, "d").starts_with("skipped"));
    let out = run(&["--budget", "100", "distance", &data("ex-3.1.code")]);
    assert_eq!(out.code, EXIT_BUDGET);
}

#[test]
fn malformed_element_reports_its_line() {
    let dir = std::env::temp_dir().join(format!("hullcode-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.code");
    std::fs::write(&path, "# header next\nfield p=2 m=2 poly=1 1 1\n1 0 w\n0 1 w^\n").unwrap();
    let out = run(&["hull", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PARSE);
    assert!(out.stderr.contains("line 4"), "{}", out.stderr);
}

#[test]
fn missing_file_is_a_plain_failure() {
    assert_eq!(run(&["hull", "/nonexistent/file.code"]).code, EXIT_FAILURE);
}

#[test]
fn extend_writes_the_output_code() {
    let out_path = std::env::temp_dir().join(format!("hullcode-ext-{}.code", std::process::id()));
    let out = run(&[
        "construct",
        "extend",
        &data("ex-5.3.code"),
        "--dual-word",
        "0 0 1 w^5 w^5",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!((value(&out, "output_n"), value(&out, "output_k"), value(&out, "output_d")), ("6", "3", "3"));
    assert_eq!(value(&out, "verified_hull"), "1");
    let written = std::fs::read_to_string(&out_path).unwrap();
    let hull = run(&["hull", out_path.to_str().unwrap()]);
    assert_eq!(value(&hull, "hull_dim"), "1");
    assert!(written.starts_with("field p=2 m=3 poly=1 1 0 1\n"));
}

#[test]
fn bad_dual_word_is_a_hypothesis_failure() {
    let out = run(&["construct", "extend", &data("ex-5.3.code"), "--dual-word", "1 0 0 0 0"]);
    assert_eq!(out.code, EXIT_HYPOTHESIS);
}

#[test]
fn sum_of_lcd_codes() {
    let out = run(&["construct", "sum", &data("ex-5.1-c1.code"), &data("ex-5.1-c2.code")]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!((value(&out, "output_n"), value(&out, "output_k"), value(&out, "output_d")), ("4", "3", "2"));
    assert_eq!(value(&out, "verified_hull"), "0");
}

#[test]
fn corollary_and_thm42() {
    let out = run(&["construct", "cor", &data("ex-4.2.code")]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(value(&out, "verified_hull"), "1");
    assert_eq!(value(&out, "scalar[alpha]"), "1");
    let out = run(&["construct", "thm42", &data("ex-4.2.code"), "--pivot", "3"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(value(&out, "frame"), "3 1 2 4");
    assert_eq!(value(&out, "verified_hull"), "1");
    let out = run(&["construct", "thm42", &data("ex-4.2.code"), "--pivot", "2"]);
    assert_eq!(out.code, EXIT_HYPOTHESIS);
    assert!(out.stderr.contains("det(I + P3P3^T) != 0"));
}

#[test]
fn thm31_names_the_failed_hypothesis() {
    let out = run(&["construct", "thm31", &data("ex-3.1.code")]);
    assert_eq!(out.code, EXIT_HYPOTHESIS);
    assert!(out.stderr.contains("P1P2^T + ab^T = 0"), "{}", out.stderr);
}

#[test]
fn con1_with_explicit_row_and_search() {
    let out = run(&["construct", "con1", &data("con1-gf8-k3.code"), "--row", golden::CON1_GF8_TOP]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(value(&out, "scalar[det(G~G~^T)]"), "w^3");
    assert_eq!(value(&out, "verified_hull"), "1");
    let a = run(&["construct", "con1", &data("con1-gf8-k3.code"), "--seed", "5"]);
    let b = run(&["construct", "con1", &data("con1-gf8-k3.code"), "--seed", "5"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a, b);
}

#[test]
fn lemma3ab_rejects_one() {
    let out = run(&["construct", "lemma3ab", &data("ex-4.1.code"), "--coord", "2", "--value", "1"]);
    assert_eq!(out.code, EXIT_HYPOTHESIS);
    let out = run(&["construct", "lemma3ab", &data("ex-4.1.code"), "--coord", "2", "--value", "w"]);
    assert_eq!(out.code, EXIT_OK);
}

#[test]
fn reed_solomon_codes() {
    let out = run(&["rs", "8", "all", "3"]);
    assert_eq!((value(&out, "n"), value(&out, "k"), value(&out, "d")), ("7", "3", "5"));
    let out = run(&["rs", "4", "all", "1"]);
    assert_eq!((value(&out, "n"), value(&out, "k"), value(&out, "d")), ("3", "1", "3"));
    assert_eq!(run(&["rs", "8", "all", "8"]).code, EXIT_HYPOTHESIS);
    let out = run(&["rs", "8", "1 w w^3", "2"]);
    assert_eq!(value(&out, "d"), "2");
    assert_eq!(run(&["rs", "8", "1 1", "1"]).code, EXIT_HYPOTHESIS);
}

#[test]
fn bundled_files_round_trip() {
    for entry in std::fs::read_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let cf = parse_code_file(&text).unwrap();
        let again = parse_code_file(&render_code_file(&cf.matrix)).unwrap();
        assert_eq!(again.matrix, cf.matrix);
        assert_eq!(again.field, cf.field);
    }
}

#[test]
fn verify_single_examples() {
    for id in ["ex-4.1", "con1-gf4", "con1-gf8", "ex-5.1", "ex-5.2", "ex-5.3", "ex-5.4"] {
        let out = run(&["verify-paper", "--only", id]);
        assert_eq!(out.code, EXIT_OK, "{id}\n{}", out.stdout);
        assert_eq!(out.stdout.lines().filter(|l| l.starts_with("PASS")).count(), 1);
    }
    assert_eq!(run(&["verify-paper", "--only", "nope"]).code, EXIT_FAILURE);
}

#[test]
fn tampered_expectation_fails_its_row() {
    let mut results = golden::run(Some("ex-5.4")).unwrap();
    assert!(results[0].passed());
    results[0].facts[0].expected = "[6,4,4]".into();
    assert!(!results[0].passed());
    let table = golden::render(&results);
    assert!(table.starts_with("FAIL ex-5.4"), "{table}");
    assert!(table.contains("0/1 examples pass"));
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["construct", "thm42", &data("ex-4.2.code"), "--search"]);
    let b = run(&["construct", "thm42", &data("ex-4.2.code"), "--search"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a, b);
}
