//! Randomized verification of every construction, packaged as a
//! deterministic report.
//!
//! Each suite runs `trials` independent trials. Trial `k` of suite `s` uses
//! the seed [`trial_seed`]`(seed, s, k)` and dimension `dims[k % dims.len()]`,
//! so a failing seed can be replayed on its own. Results are reduced in
//! trial order, which keeps the report byte-identical whether or not the
//! trials run in parallel.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comparison::{
    check_chain, m1_euclidean_from_spherical, m2_euclidean_from_hyperbolic,
    m3_bracket, m4_rigidity_witness, RigidityVerdict,
};
use crate::error::{invalid, Result};
use crate::geometry::GeometryTag;
use crate::random::{rng_from_seed, sample_boundary_center, sample_simplex};
use crate::simplex::{realize, GramClass, GramMatrix, Order};
use crate::tolerance::TolerancePolicy;

/// Entrywise Gram gap allowed after realizing a Gram matrix.
pub const ROUNDTRIP_TOL: f64 = 1e-8;
/// Largest incenter facet-distance residual.
pub const FACET_TOL: f64 = 1e-9;
/// Largest `|sum_i lambda_i u_i|` for the tangency balance.
pub const BALANCE_TOL: f64 = 1e-10;
/// Step used by the bracketing suite.
pub const BRACKET_T: f64 = 0.2;

/// Names of the suites, in report order.
pub const SUITES: [&str; 6] = ["roundtrip", "m3", "m4", "m2", "m1", "m1_boundary"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    #[serde(default)]
    pub parallel: bool,
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    /// Smallest strict angle margin over all trials, for suites that
    /// establish a strict order.
    pub min_margin: Option<f64>,
    /// Largest numerical residual over all trials.
    pub worst_residual: f64,
    pub failing_seeds: Vec<u64>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub tolerance: TolerancePolicy,
    pub suites: Vec<SuiteReport>,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    passed: bool,
    margin: Option<f64>,
    residual: f64,
}

impl Outcome {
    fn fail() -> Self {
        Outcome {
            passed: false,
            margin: None,
            residual: f64::INFINITY,
        }
    }
}

/// Seed for trial `trial` of suite number `suite`.
pub fn trial_seed(seed: u64, suite: usize, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((suite as u64) << 48)
        .wrapping_add(trial as u64)
}

fn roundtrip_trial(seed: u64, dim: usize, tol: &TolerancePolicy) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let mut residual: f64 = 0.0;
    for tag in GeometryTag::ALL {
        let Ok(x) = sample_simplex(&mut rng, tag, dim) else { return Outcome::fail() };
        let Ok(g) = x.gram() else { return Outcome::fail() };
        if g.classify(tol).geometry() != Some(tag) {
            return Outcome::fail();
        }
        let Ok(y) = realize(g.matrix(), tol) else { return Outcome::fail() };
        let Ok(gy) = y.gram() else { return Outcome::fail() };
        residual = residual.max(gy.max_abs_diff(&g));
    }
    Outcome {
        passed: residual < ROUNDTRIP_TOL,
        margin: None,
        residual,
    }
}

fn m3_trial(seed: u64, dim: usize, tol: &TolerancePolicy) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let Ok(e) = sample_simplex(&mut rng, GeometryTag::Euclidean, dim) else { return Outcome::fail() };
    let Ok(r) = m3_bracket(&e, BRACKET_T, tol) else { return Outcome::fail() };
    let gap = |s: &crate::simplex::Simplex, g: &GramMatrix| s.gram().map(|x| x.max_abs_diff(g)).unwrap_or(f64::INFINITY);
    let residual = gap(&r.simplex_hyp, &r.gram_hyp).max(gap(&r.simplex_sph, &r.gram_sph));
    let margin = r.order_hyp.strict_margin().min(r.order_sph.strict_margin());
    Outcome {
        passed: r.order_hyp.order == Order::StrictlyLess
            && r.order_sph.order == Order::StrictlyGreater
            && r.is_strict(tol.angle_eps)
            && residual < ROUNDTRIP_TOL,
        margin: Some(margin),
        residual,
    }
}

fn m4_trial(seed: u64, dim: usize, tol: &TolerancePolicy) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let Ok(e) = sample_simplex(&mut rng, GeometryTag::Euclidean, dim) else { return Outcome::fail() };
    let Ok(g1) = e.gram() else { return Outcome::fail() };
    let k = g1.size();
    let mut raised = g1.to_rows();
    for i in 0..k {
        for j in (i + 1)..k {
            let bump = rng.random_range(0.0..0.1);
            let value = (raised[i][j] + bump).min(0.999).max(raised[i][j]);
            raised[i][j] = value;
            raised[j][i] = value;
        }
    }
    let mut single = g1.to_rows();
    let (p, q) = (rng.random_range(0..k - 1), k - 1);
    single[p][q] = (single[p][q] + 0.05).min(0.999);
    single[q][p] = single[p][q];
    let (Ok(g2), Ok(g3)) = (GramMatrix::from_rows(&raised), GramMatrix::from_rows(&single)) else {
        return Outcome::fail();
    };
    let consistent = [&g1, &g2, &g3].iter().all(|g| {
        m4_rigidity_witness(&g1, g, tol).is_ok_and(|r| r.verdict == RigidityVerdict::Consistent)
    });
    Outcome {
        passed: consistent && g3.classify(tol) != GramClass::Euclidean,
        margin: None,
        residual: 0.0,
    }
}

fn m2_trial(seed: u64, dim: usize, tol: &TolerancePolicy) -> Outcome {
    let mut rng = rng_from_seed(seed);
    let Ok(h) = sample_simplex(&mut rng, GeometryTag::Hyperbolic, dim) else { return Outcome::fail() };
    let Ok(r) = m2_euclidean_from_hyperbolic(&h, tol) else { return Outcome::fail() };
    let ins = &r.insphere;
    let residual = ins.facet_residual.max(ins.balance_residual).max(r.angle_residual);
    Outcome {
        passed: r.order.order == Order::StrictlyLess
            && r.order.all_pairs_strict(tol.angle_eps)
            && ins.facet_residual < FACET_TOL
            && ins.balance_residual <= BALANCE_TOL
            && ins.balance.iter().all(|&l| l > 0.0),
        margin: Some(r.order.strict_margin()),
        residual,
    }
}

fn m1_outcome(s: &crate::simplex::Simplex, tol: &TolerancePolicy) -> Outcome {
    let Ok(r) = m1_euclidean_from_spherical(s, tol) else { return Outcome::fail() };
    let Ok(check) = check_chain(&r.chain, tol) else { return Outcome::fail() };
    let residual = check.equator_residual.max(check.balance_residual).max(r.angle_residual);
    Outcome {
        passed: r.order.order == Order::StrictlyLess
            && r.order.all_pairs_strict(tol.angle_eps)
            && check.passed(tol)
            && r.angle_residual < 1e-9,
        margin: Some(r.order.strict_margin()),
        residual,
    }
}

fn m1_trial(seed: u64, dim: usize, tol: &TolerancePolicy) -> Outcome {
    let mut rng = rng_from_seed(seed);
    match sample_simplex(&mut rng, GeometryTag::Spherical, dim) {
        Ok(s) => m1_outcome(&s, tol),
        Err(_) => Outcome::fail(),
    }
}

fn m1_boundary_trial(seed: u64, dim: usize, tol: &TolerancePolicy) -> Outcome {
    let mut rng = rng_from_seed(seed);
    match sample_boundary_center(&mut rng, dim, tol) {
        Ok(s) => m1_outcome(&s, tol),
        Err(_) => Outcome::fail(),
    }
}

/// Runs one trial of the named suite; `None` for an unknown suite.
pub fn run_trial(suite: &str, seed: u64, dim: usize, tol: &TolerancePolicy) -> Option<bool> {
    let f = suite_fn(suite)?;
    Some(f(seed, dim, tol).passed)
}

type TrialFn = fn(u64, usize, &TolerancePolicy) -> Outcome;

fn suite_fn(name: &str) -> Option<TrialFn> {
    Some(match name {
        "roundtrip" => roundtrip_trial,
        "m3" => m3_trial,
        "m4" => m4_trial,
        "m2" => m2_trial,
        "m1" => m1_trial,
        "m1_boundary" => m1_boundary_trial,
        _ => return None,
    })
}

fn run_suite(index: usize, name: &str, config: &VerifyConfig, tol: &TolerancePolicy) -> SuiteReport {
    let f = suite_fn(name).expect("suite names are fixed");
    let job = |trial: usize| {
        let seed = trial_seed(config.seed, index, trial);
        let dim = config.dims[trial % config.dims.len()];
        (seed, f(seed, dim, tol))
    };
    let outcomes: Vec<(u64, Outcome)> = if config.parallel {
        (0..config.trials).into_par_iter().map(job).collect()
    } else {
        (0..config.trials).map(job).collect()
    };
    let passed = outcomes.iter().filter(|(_, o)| o.passed).count();
    let min_margin = outcomes
        .iter()
        .filter_map(|(_, o)| o.margin)
        .reduce(f64::min);
    let worst_residual = outcomes.iter().map(|(_, o)| o.residual).fold(0.0, f64::max);
    let failing_seeds = outcomes.iter().filter(|(_, o)| !o.passed).map(|(s, _)| *s).collect();
    let margin_ok = min_margin.is_none_or(|m| m > tol.angle_eps);
    SuiteReport {
        name: name.to_string(),
        trials: config.trials,
        passed,
        min_margin,
        worst_residual,
        failing_seeds,
        ok: passed == config.trials && margin_ok,
    }
}

/// Runs every suite and collects the report.
pub fn verify(config: &VerifyConfig, tol: &TolerancePolicy) -> Result<VerificationReport> {
    if config.trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if config.dims.is_empty() {
        return Err(invalid("no dimensions to test"));
    }
    if let Some(&d) = config.dims.iter().find(|&&d| !(2..=crate::simplex::MAX_DIMENSION).contains(&d)) {
        return Err(invalid(format!(
            "dimension {d} outside 2..={}",
            crate::simplex::MAX_DIMENSION
        )));
    }
    tol.validate()?;
    let suites: Vec<SuiteReport> = SUITES
        .iter()
        .enumerate()
        .map(|(i, name)| run_suite(i, name, config, tol))
        .collect();
    let ok = suites.iter().all(|s| s.ok);
    Ok(VerificationReport {
        trials: config.trials,
        dims: config.dims.clone(),
        seed: config.seed,
        tolerance: *tol,
        suites,
        ok,
    })
}

/// Parses `a..b` (inclusive), `a..=b`, a single value, or a comma list.
pub fn parse_dims(text: &str) -> Result<Vec<usize>> {
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("bad dimension {s:?}")))
    };
    let dims = if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            return Err(invalid(format!("empty dimension range {text}")));
        }
        (a..=b).collect()
    } else {
        text.split(',').map(parse).collect::<Result<Vec<_>>>()?
    };
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_parsing() {
        assert_eq!(parse_dims("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_dims("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_dims("4").unwrap(), vec![4]);
        assert_eq!(parse_dims("2,4").unwrap(), vec![2, 4]);
        assert!(parse_dims("5..2").is_err());
        assert!(parse_dims("x").is_err());
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let tol = TolerancePolicy::default();
        let config = VerifyConfig {
            trials: 3,
            dims: vec![2, 3],
            seed: 1,
            parallel: false,
        };
        let a = verify(&config, &tol).unwrap();
        assert!(a.ok, "{a:#?}");
        let b = verify(&VerifyConfig { parallel: true, ..config }, &tol).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn corrupted_tolerance_fails() {
        let tol = TolerancePolicy::default().with_eq_zero(1.0).unwrap();
        let config = VerifyConfig {
            trials: 2,
            dims: vec![2],
            seed: 3,
            parallel: false,
        };
        let r = verify(&config, &tol).unwrap();
        assert!(!r.ok);
        assert!(r.suites.iter().any(|s| !s.failing_seeds.is_empty()));
    }

    #[test]
    fn rejects_bad_config() {
        let tol = TolerancePolicy::default();
        let mut config = VerifyConfig {
            trials: 0,
            dims: vec![2],
            seed: 0,
            parallel: false,
        };
        assert!(verify(&config, &tol).is_err());
        config.trials = 1;
        config.dims = vec![8];
        assert!(verify(&config, &tol).is_err());
    }
}
