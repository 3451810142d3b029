//! End-to-end checks of the `simplex-order` binary against the fixtures in
//! `tests/fixtures`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use simplex_order::random::random_simplex;
use simplex_order::spec::{parse_simplex_spec, simplex_to_value, HyperbolicModel, SpecBody};
use simplex_order::{GeometryTag, GramMatrix};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplex-order"))
        .args(args)
        .env_remove("SIMPLEX_ORDER_TOL")
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_simplex-order"))
        .args(args)
        .env_remove("SIMPLEX_ORDER_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_of(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().find(|l| l.contains("\"error\"")).expect("structured error");
    serde_json::from_str::<Value>(line).unwrap()["error"].clone()
}

fn upper(angles: &Value) -> Vec<f64> {
    let rows = angles.as_array().unwrap();
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for v in &row.as_array().unwrap()[i + 1..] {
            out.push(v.as_f64().unwrap());
        }
    }
    out
}

#[test]
fn classify_regular_gram() {
    let v = json(&run(&["classify", &fixture("regular_gram.json")]));
    assert_eq!(v["class"], "euclidean");
    assert_eq!(v["det"].as_f64().unwrap(), 0.0);
    assert!((v["min_cofactor"].as_f64().unwrap() - 0.75).abs() < 1e-15);
}

#[test]
fn classify_reports_the_failed_condition() {
    let v = json(&run(&["classify", &fixture("not_a_gram.json")]));
    assert_eq!(v["class"], "not_a_gram");
    assert_eq!(v["reason"]["condition"], "cofactor_not_positive");
}

#[test]
fn angles_of_each_fixture() {
    let orthant = json(&run(&["angles", &fixture("orthant.json")]));
    assert!(upper(&orthant["angles"]).iter().all(|a| (a - FRAC_PI_2).abs() < 1e-15));
    let right = json(&run(&["angles", &fixture("right_triangle.json")]));
    let mut a = upper(&right["angles"]);
    a.sort_by(f64::total_cmp);
    for (got, want) in a.iter().zip([FRAC_PI_4, FRAC_PI_4, FRAC_PI_2]) {
        assert!((got - want).abs() < 1e-14);
    }
    let hyp = json(&run(&["angles", &fixture("poincare_triangle.json")]));
    assert_eq!(hyp["geometry"], "hyperbolic");
    // Conformal model: the angle at the origin is the Euclidean one.
    let angles = upper(&hyp["angles"]);
    assert!(angles.iter().sum::<f64>() < std::f64::consts::PI);
}

#[test]
fn m1_on_the_orthant() {
    let v = json(&run(&["construct", "m1", &fixture("orthant.json")]));
    for a in upper(&v["angles"]) {
        assert!((a - FRAC_PI_3).abs() < 1e-9);
    }
    assert_eq!(v["order"]["order"], "strictly_less");
    let chain = &v["chain"];
    for key in ["dual", "ball", "support", "barycentric", "t_hat", "extended", "perturbed", "coefficients"] {
        assert!(!chain[key].is_null(), "missing {key}");
    }
    let e = serde_json::to_string(&v["euclidean"]).unwrap();
    assert!(matches!(parse_simplex_spec(&e).unwrap().body, SpecBody::Simplex(_)));
}

#[test]
fn m2_on_a_poincare_triangle() {
    let v = json(&run(&["construct", "m2", &fixture("poincare_triangle.json")]));
    assert_eq!(v["order"]["order"], "strictly_less");
    let balance: Vec<f64> = v["insphere"]["balance"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(balance.iter().all(|&l| l > 0.0));
    assert!((balance.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn m3_outputs_compare_strictly() {
    let v = json(&run(&["construct", "m3", &fixture("regular_gram.json"), "--t", "0.2"]));
    assert!(upper(&v["hyperbolic_angles"]).iter().all(|a| (a - 0.6f64.acos()).abs() < 1e-12));
    let dir = std::env::temp_dir().join(format!("simplex-order-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let hyp = dir.join("hyp.json");
    std::fs::write(&hyp, v["hyperbolic"].to_string()).unwrap();
    let cmp = json(&run(&["compare", hyp.to_str().unwrap(), &fixture("regular_gram.json")]));
    assert_eq!(cmp["order"], "strictly_less");
    let sph = dir.join("sph.json");
    std::fs::write(&sph, v["spherical_gram"].to_string()).unwrap();
    let cmp = json(&run(&["compare", sph.to_str().unwrap(), &fixture("regular_gram.json")]));
    assert_eq!(cmp["order"], "strictly_greater");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dual_output_is_a_spec_and_involutive() {
    let dual = run(&["dual", &fixture("orthant.json")]);
    let text = String::from_utf8(json(&dual).to_string().into_bytes()).unwrap();
    let twice = json(&run_stdin(&["dual", "-"], &text));
    let SpecBody::Simplex(s) = parse_simplex_spec(&twice.to_string()).unwrap().body else { panic!() };
    for (i, v) in s.vertices().iter().enumerate() {
        assert!((v.coords()[i] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn random_is_deterministic_and_parses() {
    let a = run(&["random", "--geometry", "hyperbolic", "--dim", "4", "--seed", "17"]);
    let b = run(&["random", "--geometry", "hyperbolic", "--dim", "4", "--seed", "17"]);
    assert_eq!(a.stdout, b.stdout);
    let SpecBody::Simplex(s) = parse_simplex_spec(&String::from_utf8(a.stdout).unwrap()).unwrap().body else {
        panic!()
    };
    assert_eq!(s.dimension(), 4);
    let p = json(&run(&["random", "--geometry", "hyperbolic", "--dim", "3", "--seed", "1", "--poincare"]));
    assert_eq!(p["model"], "poincare");
}

#[test]
fn many_random_specs_parse_and_classify() {
    for tag in GeometryTag::ALL {
        for seed in 0..1000u64 {
            let s = random_simplex(tag, 2 + (seed % 4) as usize, seed).unwrap();
            let text = simplex_to_value(&s, HyperbolicModel::Hyperboloid, None).to_string();
            let SpecBody::Simplex(back) = parse_simplex_spec(&text).unwrap().body else { panic!() };
            assert_eq!(back, s);
            let class = back.gram().unwrap().classify(&Default::default());
            assert_eq!(class.geometry(), Some(tag), "{tag} seed {seed}");
        }
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    let degenerate = run(&["angles", &fixture("great_circle.json")]);
    assert_eq!(degenerate.status.code(), Some(1));
    let e = error_of(&degenerate);
    assert_eq!(e["path"], "vertices");
    assert!(e["message"].as_str().unwrap().contains("degenerate"));

    let syntax = run_stdin(&["classify", "-"], "{\"gram\": [[1, 0,\n");
    assert_eq!(syntax.status.code(), Some(1));
    assert!(error_of(&syntax)["path"].as_str().unwrap().starts_with("line 2"));

    let missing = run(&["classify", "/nonexistent/spec.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(error_of(&missing)["kind"], "invalid_input");

    let wrong_geometry = run(&["construct", "m2", &fixture("orthant.json")]);
    assert_eq!(wrong_geometry.status.code(), Some(1));

    let not_gram = run(&["construct", "m1", &fixture("not_a_gram.json")]);
    assert_eq!(not_gram.status.code(), Some(1));
    assert_eq!(error_of(&not_gram)["kind"], "not_a_gram");

    let too_big = run(&["random", "--geometry", "spherical", "--dim", "8"]);
    assert_eq!(too_big.status.code(), Some(1));

    let usage = run(&["construct", "m9", &fixture("orthant.json")]);
    assert_eq!(usage.status.code(), Some(1));
    assert_eq!(error_of(&usage)["kind"], "usage");

    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let bad_env = Command::new(env!("CARGO_BIN_EXE_simplex-order"))
        .args(["classify", &fixture("regular_gram.json")])
        .env("SIMPLEX_ORDER_TOL", "tiny")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(1));
}

#[test]
fn corrupted_tolerance_fails_verification() {
    let out = Command::new(env!("CARGO_BIN_EXE_simplex-order"))
        .args(["verify", "--trials", "3", "--dims", "2..3", "--seed", "5"])
        .env("SIMPLEX_ORDER_TOL", "1e+0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ok"], false);
    let err = error_of(&out);
    assert_eq!(err["kind"], "verification_failed");
    assert!(!err["suites"][0]["failing_seeds"].as_array().unwrap().is_empty());
}

#[test]
fn verify_report_is_deterministic_across_parallelism() {
    let a = run(&["verify", "--trials", "6", "--dims", "2..4", "--seed", "9"]);
    let b = run(&["verify", "--trials", "6", "--dims", "2..4", "--seed", "9", "--parallel"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    for suite in report["suites"].as_array().unwrap() {
        if let Some(m) = suite["min_margin"].as_f64() {
            assert!(m > 0.0);
        }
    }
    let wall: Value = serde_json::from_str(String::from_utf8_lossy(&a.stderr).lines().next().unwrap()).unwrap();
    assert!(wall["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn gram_specs_are_realized_when_needed() {
    let euclidean_dual = run(&["dual", &fixture("regular_gram.json")]);
    assert_eq!(euclidean_dual.status.code(), Some(1));
    let g = GramMatrix::from_rows(&[vec![1.0, 0.2, 0.2], vec![0.2, 1.0, 0.2], vec![0.2, 0.2, 1.0]]).unwrap();
    let text = simplex_order::spec::gram_to_value(g.matrix(), None).to_string();
    let v = json(&run_stdin(&["construct", "m1", "-"], &text));
    assert_eq!(v["order"]["order"], "strictly_less");
}
