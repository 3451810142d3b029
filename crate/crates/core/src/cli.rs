//! The `simplex-order` command line.
//!
//! Every subcommand prints one JSON document on stdout. Failures print
//! `{"error": {"kind", "message", "path"?}}` on stderr and exit with 1 for
//! bad input or 2 for a numerical failure; `verify` also exits 2 when any
//! suite fails.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde::Serialize;
use serde_json::{json, Value};

use crate::comparison::{
    m1_euclidean_from_spherical, m2_euclidean_from_hyperbolic, m3_bracket, DualChain,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::{hyperboloid_to_poincare, GeometryTag};
use crate::random::random_simplex;
use crate::simplex::{compare, realize, spherical_dual, DihedralAngles, GramClass, GramMatrix, Simplex, MAX_DIMENSION};
use crate::spec::{gram_to_value, parse_simplex_spec, simplex_to_value, HyperbolicModel, SimplexSpec, SpecBody};
use crate::tolerance::TolerancePolicy;
use crate::verify::{parse_dims, verify, VerifyConfig, BRACKET_T};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "simplex-order", version, about = "Dihedral angles of spherical, Euclidean and hyperbolic simplexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a Gram matrix (or the Gram matrix of a simplex).
    Classify { spec: String },
    /// Dihedral angles in radians.
    Angles { spec: String },
    /// Polar dual of a spherical simplex.
    Dual { spec: String },
    /// Run one of the comparison constructions.
    Construct {
        method: Method,
        spec: String,
        /// Requested path parameter for m3, in (0, 1].
        #[arg(long, default_value_t = BRACKET_T)]
        t: f64,
    },
    /// Compare the angle tables of two simplexes entrywise.
    Compare { a: String, b: String },
    /// A seeded random nondegenerate simplex.
    Random {
        #[arg(long, value_enum)]
        geometry: Geometry,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit hyperbolic vertices in the Poincaré ball.
        #[arg(long)]
        poincare: bool,
    },
    /// Run every verification suite and print the report.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "2..5")]
        dims: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run trials on all cores; the report is unchanged.
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    M1,
    M2,
    M3,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl From<Geometry> for GeometryTag {
    fn from(g: Geometry) -> Self {
        match g {
            Geometry::Spherical => GeometryTag::Spherical,
            Geometry::Euclidean => GeometryTag::Euclidean,
            Geometry::Hyperbolic => GeometryTag::Hyperbolic,
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let _ = writeln!(stderr, "{}", json!({"error": {"kind": "usage", "message": e.render().to_string().trim_end()}}));
            return EXIT_INPUT;
        }
    };
    let tol = match TolerancePolicy::from_env() {
        Ok(t) => t,
        Err(e) => return report_error(&e, stderr),
    };
    let outcome = match cli.command {
        Command::Verify { trials, dims, seed, parallel } => {
            return run_verify(trials, &dims, seed, parallel, &tol, stdout, stderr)
        }
        command => execute(command, &tol, stdin),
    };
    match outcome {
        Ok(value) => {
            let _ = writeln!(stdout, "{}", to_pretty(&value));
            EXIT_OK
        }
        Err(e) => report_error(&e, stderr),
    }
}

fn to_pretty(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

fn report_error(e: &Error, stderr: &mut dyn Write) -> i32 {
    let mut body = json!({"kind": e.kind(), "message": e.to_string()});
    if let Error::Spec { path, message } = e {
        body["path"] = json!(path);
        body["message"] = json!(message);
    }
    let _ = writeln!(stderr, "{}", json!({ "error": body }));
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERICAL
    }
}

fn run_verify(
    trials: usize,
    dims: &str,
    seed: u64,
    parallel: bool,
    tol: &TolerancePolicy,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let dims = match parse_dims(dims) {
        Ok(d) => d,
        Err(e) => return report_error(&e, stderr),
    };
    let config = VerifyConfig { trials, dims, seed, parallel };
    let start = Instant::now();
    let report = match verify(&config, tol) {
        Ok(r) => r,
        Err(e) => return report_error(&e, stderr),
    };
    let _ = writeln!(stdout, "{}", to_pretty(&report));
    let _ = writeln!(stderr, "{}", json!({"wall_time_s": start.elapsed().as_secs_f64()}));
    if report.ok {
        return EXIT_OK;
    }
    let failing: Vec<Value> = report
        .suites
        .iter()
        .filter(|s| !s.ok)
        .map(|s| json!({"suite": s.name, "passed": s.passed, "trials": s.trials, "failing_seeds": s.failing_seeds}))
        .collect();
    let _ = writeln!(
        stderr,
        "{}",
        json!({"error": {"kind": "verification_failed", "message": "one or more suites failed", "suites": failing}})
    );
    EXIT_NUMERICAL
}

fn read_spec(source: &str, stdin: &mut dyn Read) -> Result<SimplexSpec> {
    let text = if source == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| invalid(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(source).map_err(|e| invalid(format!("cannot read {source}: {e}")))?
    };
    parse_simplex_spec(&text)
}

fn gram_of(spec: &SimplexSpec) -> Result<GramMatrix> {
    match &spec.body {
        SpecBody::Simplex(s) => s.gram(),
        SpecBody::Gram(m) => GramMatrix::new(m.clone()),
    }
}

/// The simplex a spec describes, realizing Gram matrices when needed.
fn simplex_of(spec: &SimplexSpec, tol: &TolerancePolicy) -> Result<Simplex> {
    match &spec.body {
        SpecBody::Simplex(s) => Ok(s.clone()),
        SpecBody::Gram(m) => realize(m, tol),
    }
}

fn angles_of(spec: &SimplexSpec) -> Result<DihedralAngles> {
    match &spec.body {
        SpecBody::Simplex(s) => s.dihedral_angles(),
        SpecBody::Gram(m) => Ok(GramMatrix::new(m.clone())?.dihedral_angles()),
    }
}

fn rows(vs: &[DVector<f64>]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.iter().copied().collect()).collect()
}

fn execute(command: Command, tol: &TolerancePolicy, stdin: &mut dyn Read) -> Result<Value> {
    match command {
        Command::Classify { spec } => {
            let spec = read_spec(&spec, stdin)?;
            let gram = gram_of(&spec)?;
            let d = gram.diagnostics(tol);
            let class = gram.classify(tol);
            let mut out = json!({
                "class": class.name(),
                "det": d.det,
                "min_cofactor": d.min_cofactor(),
                "min_eigenvalue": d.min_eigenvalue,
                "principal_block_min_eigenvalues": d.principal_block_mins,
                "gram": gram.to_rows(),
            });
            if let GramClass::NotAGram(reason) = &class {
                out["reason"] = serde_json::to_value(reason).expect("serializable");
                out["message"] = json!(reason.to_string());
            }
            Ok(out)
        }
        Command::Angles { spec } => {
            let spec = read_spec(&spec, stdin)?;
            let angles = angles_of(&spec)?;
            let geometry = match &spec.body {
                SpecBody::Simplex(s) => s.tag().name(),
                SpecBody::Gram(m) => GramMatrix::new(m.clone())?.classify(tol).name(),
            };
            Ok(json!({"geometry": geometry, "angles": angles, "min": angles.min(), "max": angles.max()}))
        }
        Command::Dual { spec } => {
            let spec = read_spec(&spec, stdin)?;
            let s = simplex_of(&spec, tol)?;
            let dual = spherical_dual(&s)?;
            Ok(simplex_to_value(&dual, HyperbolicModel::Hyperboloid, spec.label.as_deref()))
        }
        Command::Construct { method, spec, t } => {
            let spec = read_spec(&spec, stdin)?;
            let s = simplex_of(&spec, tol)?;
            match method {
                Method::M1 => construct_m1(&s, tol),
                Method::M2 => construct_m2(&s, tol),
                Method::M3 => construct_m3(&s, t, tol),
            }
        }
        Command::Compare { a, b } => {
            let a = angles_of(&read_spec(&a, stdin)?)?;
            let b = angles_of(&read_spec(&b, stdin)?)?;
            Ok(serde_json::to_value(compare(&a, &b, tol)?).expect("serializable"))
        }
        Command::Random { geometry, dim, seed, poincare } => {
            if !(2..=MAX_DIMENSION).contains(&dim) {
                return Err(invalid(format!("dimension {dim} outside 2..={MAX_DIMENSION}")));
            }
            let s = random_simplex(geometry.into(), dim, seed)?;
            let model = if poincare { HyperbolicModel::Poincare } else { HyperbolicModel::Hyperboloid };
            Ok(simplex_to_value(&s, model, None))
        }
        Command::Verify { .. } => unreachable!("handled by run_verify"),
    }
}

fn chain_value(c: &DualChain) -> Value {
    json!({
        "dual": simplex_to_value(&c.dual, HyperbolicModel::Hyperboloid, None),
        "ball": {"center": c.ball.center.coords().as_slice(), "radius": c.ball.radius},
        "support": c.support,
        "rotation": c.rotation.matrix().row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
        "centered_dual": rows(&c.centered_dual),
        "barycentric": c.barycentric,
        "t_hat": c.t_hat,
        "extended": rows(&c.extended),
        "face": c.face,
        "delta": c.delta,
        "halvings": c.halvings,
        "perturbed": rows(&c.perturbed),
        "coefficients": c.coefficients,
        "span_coordinates": rows(&c.span_coordinates()),
    })
}

fn construct_m1(s: &Simplex, tol: &TolerancePolicy) -> Result<Value> {
    let r = m1_euclidean_from_spherical(s, tol)?;
    Ok(json!({
        "construction": "m1",
        "euclidean": simplex_to_value(&r.euclidean, HyperbolicModel::Hyperboloid, None),
        "angles": r.xi,
        "input_angles": r.sigma,
        "order": r.order,
        "angle_residual": r.angle_residual,
        "chain": chain_value(&r.chain),
    }))
}

fn construct_m2(s: &Simplex, tol: &TolerancePolicy) -> Result<Value> {
    let r = m2_euclidean_from_hyperbolic(s, tol)?;
    let ins = &r.insphere;
    Ok(json!({
        "construction": "m2",
        "euclidean": simplex_to_value(&r.euclidean, HyperbolicModel::Hyperboloid, None),
        "angles": r.xi,
        "input_angles": r.eta,
        "order": r.order,
        "angle_residual": r.angle_residual,
        "insphere": {
            "center": ins.center.coords().as_slice(),
            "center_poincare": hyperboloid_to_poincare(&ins.center)?.as_slice(),
            "inradius": ins.inradius,
            "tangency_dirs": rows(&ins.tangency_dirs),
            "balance": ins.balance,
            "facet_residual": ins.facet_residual,
            "balance_residual": ins.balance_residual,
        },
    }))
}

fn construct_m3(s: &Simplex, t: f64, tol: &TolerancePolicy) -> Result<Value> {
    let r = m3_bracket(s, t, tol)?;
    Ok(json!({
        "construction": "m3",
        "t_hyperbolic": r.t_hyp,
        "t_spherical": r.t_sph,
        "angles": r.angles_euc,
        "hyperbolic": simplex_to_value(&r.simplex_hyp, HyperbolicModel::Hyperboloid, None),
        "hyperbolic_gram": gram_to_value(r.gram_hyp.matrix(), None),
        "hyperbolic_angles": r.angles_hyp,
        "hyperbolic_order": r.order_hyp,
        "spherical": simplex_to_value(&r.simplex_sph, HyperbolicModel::Hyperboloid, None),
        "spherical_gram": gram_to_value(r.gram_sph.matrix(), None),
        "spherical_angles": r.angles_sph,
        "spherical_order": r.order_sph,
        "max_deviation": r.max_deviation(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_with(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["simplex-order"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    const REGULAR: &str = r#"{"gram":[[1,-0.5,-0.5],[-0.5,1,-0.5],[-0.5,-0.5,1]]}"#;
    const ORTHANT: &str = r#"{"geometry":"spherical","vertices":[[1,0,0],[0,1,0],[0,0,1]]}"#;

    #[test]
    fn classify_regular_gram() {
        let (code, out, _) = run_with(&["classify", "-"], REGULAR);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["class"], "euclidean");
        assert!(v["det"].as_f64().unwrap().abs() < 1e-15);
        assert!((v["min_cofactor"].as_f64().unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn m1_on_orthant() {
        let (code, out, _) = run_with(&["construct", "m1", "-"], ORTHANT);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let angles: DihedralAngles = serde_json::from_value(v["angles"].clone()).unwrap();
        for (i, j) in angles.pairs() {
            assert!((angles.get(i, j) - std::f64::consts::FRAC_PI_3).abs() < 1e-9);
        }
        assert_eq!(v["order"]["order"], "strictly_less");
        assert!(v["chain"]["dual"]["vertices"].is_array());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_with(&["classify", "-"], "{").0, 1);
        assert_eq!(run_with(&["random", "--geometry", "euclidean", "--dim", "8"], "").0, 1);
        assert_eq!(run_with(&["bogus"], "").0, 1);
        assert_eq!(run_with(&["--help"], "").0, 0);
        let (code, _, err) = run_with(&["dual", "-"], REGULAR);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert!(v["error"]["kind"].is_string());
    }

    #[test]
    fn spec_errors_carry_paths() {
        let (code, _, err) = run_with(&["angles", "-"], r#"{"geometry":"spherical","vertices":[[1,0,0],[0,1,0],[0,0,2]]}"#);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["path"], "vertices[2]");
    }
}
