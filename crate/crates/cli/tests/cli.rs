use std::path::PathBuf;
use std::process::{Command, Output};

use fell_cli::parse_expression;
use fell_core::ck::monomial::enumerate_monomials;
use fell_core::ck::scalar::{imaginary_unit, rational};
use fell_core::ck::CkAlgebra;
use proptest::prelude::*;
use serde_json::Value;

fn fell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fell")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(Result::unwrap).collect()
}

#[test]
fn ck_check_passes_on_presets() {
    for preset in ["allones2", "fib2"] {
        let out = fell(&["ck-check", "--A", preset, "--depth", "2", "--format", "csv"]);
        assert_eq!(out.status.code(), Some(0), "{preset}: {}", String::from_utf8_lossy(&out.stderr));
        let rows = csv_rows(&stdout(&out));
        assert!(rows.len() >= 8);
        assert!(rows.iter().all(|r| &r[2] == "0" && &r[3] == "true"), "{rows:?}");
    }
}

#[test]
fn ck_check_with_oracle_reports_oracle_rows() {
    let out = fell(&["ck-check", "--A", "fib2", "--depth", "2", "--k-max", "2", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let text = json.to_string();
    assert!(text.contains("oracle: partial representation"), "{text}");
}

#[test]
fn matrix_from_file() {
    let dir = std::env::temp_dir().join(format!("fell-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.json");
    std::fs::write(&path, r#"{"n": 2, "a": [[1, 1], [1, 0]]}"#).unwrap();
    let out = fell(&["ck-check", "--A", path.to_str().unwrap(), "--depth", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn approx_run_table() {
    let out = fell(&["approx-run", "--A", "allones2", "--t", "g1 g2'", "--m", "4..10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("m,main_coeff_num,main_coeff_den,paper_coeff,tail_norm_estimate,tail_bound,pass"), "{text}");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 7);
    for r in &rows {
        let m: i64 = r[0].parse().unwrap();
        assert_eq!((r[1].parse::<i64>().unwrap(), r[2].parse::<i64>().unwrap()), (m - 2, m));
        assert_eq!(&r[6], "true");
    }
}

#[test]
fn ck_fourier_splits_by_degree() {
    let out = fell(&["ck-fourier", "--A", "allones2", "s1 + s1 s2* + 1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("g1 g2'"), "{text}");
}

#[test]
fn bundle_verify_valid_and_invalid() {
    let ok = fell(&["bundle-verify", &data("z2_trivial_diag2.json"), "--samples", "20", "--format", "csv"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let rows = csv_rows(&stdout(&ok));
    assert!(rows[0][0].starts_with("bundle axioms (0 violations)"));

    let bad = fell(&["bundle-verify", &data("z2_misplaced_adjoint.json"), "--format", "csv"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("t=1"));
}

#[test]
fn ideal_analyze_reports_induced_and_non_induced() {
    let out = fell(&[
        "ideal-analyze",
        &data("z2_trivial_diag2.json"),
        "--generators",
        &data("z2_minimal_projection.json"),
        "--samples",
        "10",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    for label in ["<e_11>", "<e_22>", "<1>", "e_11 (1 + u)/2", "not induced"] {
        assert!(text.contains(label), "{label} missing from {text}");
    }
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(fell(&["bundle-verify", "missing.json"]).status.code(), Some(2));
    assert_eq!(fell(&["ck-check", "--A", "nope"]).status.code(), Some(2));
    assert_eq!(fell(&["ck-check", "--A", "allones2", "--depth", "9"]).status.code(), Some(2));
    assert_eq!(fell(&["approx-run", "--A", "allones2", "--t", "g1' g2", "--m", "4..5"]).status.code(), Some(2));
    assert_eq!(fell(&["frobnicate"]).status.code(), Some(2));
    let parse = fell(&["ck-fourier", "--A", "allones2", "s1 + q"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("position 5"));
}

#[test]
fn out_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("fell-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let bundle = data("z2_trivial_diag2.json");
    for path in [&a, &b] {
        let out = fell(&["bundle-verify", &bundle, "--samples", "15", "--seed", "9", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_elements_parse_back(
        preset in prop_oneof![Just("allones2"), Just("fib2"), Just("allones3")],
        terms in prop::collection::vec((0usize..10_000, -6i64..=6, -6i64..=6, 1i64..=5), 0..5),
    ) {
        let alg = CkAlgebra::preset(preset).unwrap();
        let monos = enumerate_monomials(alg.adjacency(), 3);
        let mut x = alg.zero();
        for (i, re, im, den) in terms {
            let c = rational(re, den) + rational(im, den) * imaginary_unit();
            x = x.add(&alg.monomial(monos[i % monos.len()].clone()).unwrap().scale(c)).unwrap();
        }
        let printed = x.to_string();
        prop_assert_eq!(parse_expression(&printed, &alg).unwrap(), x, "{}", printed);
    }
}
