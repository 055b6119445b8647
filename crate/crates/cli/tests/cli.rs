use std::process::{Command, Output};

use gennorm::GenNormParams;
use serde_json::Value;

fn gennorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gennorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = gennorm(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn code(args: &[&str]) -> i32 {
    gennorm(args).status.code().unwrap()
}

/// CSV body as rows of raw fields (header dropped).
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn pdf_laplace_peak() {
    let out = ok(&["pdf", "--theta", "1", "--beta", "1", "--x", "0"]);
    assert_eq!(out.lines().next().unwrap(), "x,pdf,log_pdf");
    let r = &rows(&out)[0];
    assert_eq!(num(&r[0]), 0.0);
    assert_eq!(num(&r[1]), 0.5);
    assert!((num(&r[2]) + std::f64::consts::LN_2).abs() < 1e-15);
}

#[test]
fn pdf_grid_is_symmetric_and_round_trips() {
    let out = ok(&["pdf", "--beta", "2", "--min", "-3", "--max", "3", "--count", "61"]);
    let r = rows(&out);
    assert_eq!(r.len(), 61);
    let p = GenNormParams::new(1.0, 2.0).unwrap();
    for (i, row) in r.iter().enumerate() {
        let (x, pdf, log_pdf) = (num(&row[0]), num(&row[1]), num(&row[2]));
        assert_eq!(pdf.to_bits(), log_pdf.exp().to_bits());
        assert_eq!(log_pdf.to_bits(), p.log_pdf(x).unwrap().to_bits());
        // Grid points are min + i·step, so mirrored abscissae agree only to rounding.
        let mirror = &r[60 - i];
        assert!((num(&mirror[0]) + x).abs() < 1e-14);
        assert!((num(&mirror[1]) - pdf).abs() <= 1e-13 * pdf);
    }
}

#[test]
fn pdf_large_shape_looks_uniform() {
    let out = ok(&["pdf", "--theta", "1", "--beta", "64", "--min", "-2", "--max", "2", "--count", "401"]);
    for row in rows(&out) {
        let (x, pdf) = (num(&row[0]), num(&row[1]));
        if x.abs() < 0.9 {
            assert!((pdf - 0.5).abs() < 0.01, "x={x} pdf={pdf}");
        } else if x.abs() > 1.1 {
            assert!(pdf < 0.01, "x={x} pdf={pdf}");
        }
    }
}

#[test]
fn pdf_rejects_bad_grids_and_params() {
    assert_eq!(code(&["pdf", "--min", "1", "--max", "0", "--count", "5"]), 2);
    assert_eq!(code(&["pdf", "--min", "0", "--max", "1", "--count", "1"]), 2);
    assert_eq!(code(&["pdf", "--min", "0", "--max", "1"]), 2);
    assert_eq!(code(&["pdf", "--theta", "-1", "--x", "0"]), 2);
    assert_eq!(code(&["pdf", "--beta", "0", "--x", "0"]), 2);
    let out = gennorm(&["pdf", "--theta", "0", "--x", "0"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("theta"));
}

#[test]
fn fisher_gaussian_all_methods() {
    let out = ok(&["fisher", "--theta", "1", "--beta", "2", "--n", "200000", "--seed", "3"]);
    let r = rows(&out);
    let methods: Vec<&str> = r.iter().map(|row| row[0].as_str()).collect();
    assert_eq!(methods, ["closed_form", "quad_score_variance", "quad_neg_hessian", "mc_score_variance"]);
    assert_eq!(num(&r[0][1]), 2.0);
    for row in &r[1..3] {
        assert!((num(&row[1]) - 2.0).abs() < 1e-8);
    }
    assert!((num(&r[3][1]) - 2.0).abs() <= 4.0 * num(&r[3][2]));
}

#[test]
fn fisher_closed_form_at_theta_two() {
    let out = ok(&["fisher", "--theta", "2", "--beta", "2", "--methods", "closed_form"]);
    assert_eq!(rows(&out), vec![vec!["closed_form", "0.5", "0.0"]]);
}

#[test]
fn fisher_odd_shape() {
    let out = ok(&["fisher", "--beta", "3", "--methods", "quad_score_variance", "--tol", "1e-9"]);
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], "quad_score_variance");
    let (value, err) = (num(&r[0][1]), num(&r[0][2]));
    assert!(value.is_finite() && err <= 1e-9 * value);

    // `all` silently skips the closed form; asking for it explicitly is a usage error.
    let all = ok(&["fisher", "--beta", "3", "--n", "1000"]);
    assert!(!all.contains("closed_form"));
    assert_eq!(code(&["fisher", "--beta", "3", "--methods", "closed_form"]), 2);
    assert_eq!(code(&["fisher", "--methods", "nonsense"]), 2);
    assert_eq!(code(&["fisher", "--methods", "quad_neg_hessian", "--tol", "0.5"]), 2);
}

#[test]
fn seeded_commands_are_reproducible() {
    let args = ["fisher", "--beta", "4", "--methods", "mc_score_variance", "--n", "50000", "--seed", "99"];
    assert_eq!(ok(&args), ok(&args));
    let other = ok(&["fisher", "--beta", "4", "--methods", "mc_score_variance", "--n", "50000", "--seed", "100"]);
    assert_ne!(ok(&args), other);
}

#[test]
fn fisher_json_record() {
    let out = ok(&["fisher", "--beta", "2", "--methods", "closed_form,mc_score_variance", "--n", "1000", "--seed", "5", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "fisher");
    assert_eq!(v["inputs"]["beta"], 2.0);
    assert_eq!(v["metadata"]["seed"], 5);
    assert!(v["metadata"]["version"].is_string());
    let rows = v["outputs"]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["method"], "closed_form");
    assert_eq!(rows[0]["value"], 2.0);
    assert_eq!(rows[1]["method"], "mc_score_variance");
}

#[test]
fn moments_table() {
    let out = ok(&["moments", "--theta", "1.7", "--beta", "3.5", "--k", "1,3,5"]);
    assert!(rows(&out).iter().all(|r| num(&r[1]) == 0.0));
    let out = ok(&["moments", "--theta", "1", "--beta", "2", "--k", "0,2"]);
    assert_eq!(rows(&out), vec![vec!["0", "1.0"], vec!["2", "0.5"]]);
    assert_eq!(code(&["moments", "--k", "-1"]), 2);
}

#[test]
fn estimate_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.txt");
    std::fs::write(&path, "1\n\n-1\n").unwrap();
    let out = ok(&["estimate", "--beta", "2", "--input", path.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let theta_hat = v["outputs"]["theta_hat"].as_f64().unwrap();
    // −2/θ + 4/θ³ = 0.
    assert_eq!(theta_hat, std::f64::consts::SQRT_2);
    assert_eq!(v["outputs"]["sample_size"], 2);
    assert!(v["outputs"]["score_residual"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn estimate_record_round_trips_exactly() {
    let out = ok(&["estimate", "--generate", "--theta", "2", "--beta", "4", "--n", "1000000", "--seed", "7"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let theta_hat = v["outputs"]["theta_hat"].as_f64().unwrap();
    let samples = GenNormParams::new(2.0, 4.0).unwrap().sample(1_000_000, 7).unwrap();
    let direct = gennorm::mle_theta(&samples, 4.0).unwrap();
    assert_eq!(theta_hat.to_bits(), direct.to_bits());
    let sd = (4.0f64 / (1e6 * 4.0)).sqrt();
    assert!((theta_hat - 2.0).abs() <= 4.0 * sd);
    assert_eq!(v["metadata"]["seed"], 7);
}

#[test]
fn estimate_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("zeros.txt");
    std::fs::write(&zeros, "0\n0\n0\n").unwrap();
    let out = gennorm(&["estimate", "--input", zeros.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "\n\n").unwrap();
    assert_eq!(code(&["estimate", "--input", empty.to_str().unwrap()]), 2);

    let junk = dir.path().join("junk.txt");
    std::fs::write(&junk, "1.0\nabc\n").unwrap();
    assert_eq!(code(&["estimate", "--input", junk.to_str().unwrap()]), 2);

    assert_eq!(code(&["estimate", "--input", "/nonexistent/file"]), 2);
    assert_eq!(code(&["estimate"]), 2);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let out = ok(&["moments", "--k", "2", "--output", path.to_str().unwrap()]);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "k,value\n2,0.5\n");
}

#[test]
fn verify_lemma2_and_equivalence_pass() {
    for suite in ["lemma2", "equivalence"] {
        let out = gennorm(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let text = stdout(&out);
        assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
    }
}

#[test]
fn verify_theorem1_passes() {
    let out = gennorm(&["verify", "--suite", "theorem1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS")).count(), 12 * 5 + 1);
}

#[test]
fn verify_crlb_passes_with_defaults() {
    let out = gennorm(&["verify", "--suite", "crlb", "--beta", "2", "--theta", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn verify_failure_and_usage_exit_codes() {
    // One sample per trial is far from the asymptotic regime.
    let out = gennorm(&["verify", "--suite", "crlb", "--n", "1", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));

    assert_eq!(code(&["verify", "--suite", "lemma3"]), 2);
    assert_eq!(code(&["verify", "--suite", "crlb", "--beta", "3"]), 2);
    assert_eq!(code(&["verify"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn verify_json_and_csv() {
    let out = ok(&["verify", "--suite", "lemma2", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["outputs"]["passed"], true);
    assert_eq!(v["outputs"]["checks"].as_array().unwrap().len(), 42);

    let csv = ok(&["verify", "--suite", "lemma2", "--format", "csv"]);
    assert_eq!(csv.lines().next().unwrap(), "check,observed,expected,tolerance,kind,passed");
    assert_eq!(csv.lines().count(), 43);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",relative,true") || l.ends_with(",absolute,true")));
}
