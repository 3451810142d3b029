//! Seeded generators for well-conditioned random simplexes.
//!
//! Vertices are drawn as follows and the draw is repeated until the simplex
//! has nondegeneracy residual at least `1e-6` and every dihedral angle in
//! `(0.05, pi - 0.05)`:
//!
//! * Euclidean: i.i.d. standard normal coordinates.
//! * Hyperbolic: uniform directions from the basepoint at distance uniform
//!   in `[0.3, 2.0]`.
//! * Spherical: uniform in the geodesic ball of radius `pi/2 - 0.1` about a
//!   uniform random center.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::comparison::extend_dual_to_equator;
use crate::error::{invalid, Error, Result};
use crate::geometry::{min_enclosing_spherical_ball, GeometryTag, ModelPoint};
use crate::simplex::{spherical_dual, Simplex, MAX_DIMENSION};
use crate::tolerance::TolerancePolicy;

pub const MIN_RESIDUAL: f64 = 1e-6;
pub const ANGLE_MARGIN: f64 = 0.05;
const HYPERBOLIC_RADII: (f64, f64) = (0.3, 2.0);
const SPHERICAL_CAP: f64 = FRAC_PI_2 - 0.1;
/// Draws before a sampler gives up.
pub const MAX_ATTEMPTS: usize = 100_000;

/// The generator used throughout: ChaCha8 seeded from a `u64`.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_dimension(dim: usize) -> Result<()> {
    if (2..=MAX_DIMENSION).contains(&dim) {
        Ok(())
    } else {
        Err(invalid(format!("dimension {dim} outside 2..={MAX_DIMENSION}")))
    }
}

fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| StandardNormal.sample(rng));
        let n: f64 = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

fn draw_vertices<R: Rng + ?Sized>(rng: &mut R, tag: GeometryTag, dim: usize) -> Result<Vec<ModelPoint>> {
    let count = dim + 1;
    match tag {
        GeometryTag::Euclidean => (0..count)
            .map(|_| ModelPoint::new(tag, DVector::from_fn(dim, |_, _| StandardNormal.sample(rng))))
            .collect(),
        GeometryTag::Hyperbolic => (0..count)
            .map(|_| {
                let r = rng.random_range(HYPERBOLIC_RADII.0..=HYPERBOLIC_RADII.1);
                let d = unit_vector(rng, dim);
                ModelPoint::hyperbolic_from_spatial(&(d * r.sinh()))
            })
            .collect(),
        GeometryTag::Spherical => {
            let center = unit_vector(rng, dim + 1);
            let min_cos = SPHERICAL_CAP.cos();
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let p = unit_vector(rng, dim + 1);
                if p.dot(&center) >= min_cos {
                    out.push(ModelPoint::project(tag, p)?);
                }
            }
            Ok(out)
        }
    }
}

/// Smallest Gram determinant magnitude (spherical, hyperbolic) and smallest
/// cofactor (Euclidean, hyperbolic) accepted by the generator, so that
/// samples sit well clear of the classification thresholds.
pub const GRAM_MARGIN: f64 = 1e-6;

/// Whether a simplex meets the generator's conditioning requirements.
pub fn is_well_conditioned(s: &Simplex) -> bool {
    if s.nondegeneracy_residual() < MIN_RESIDUAL {
        return false;
    }
    let angles_ok = match s.dihedral_angles() {
        Ok(a) => a.min() > ANGLE_MARGIN && a.max() < PI - ANGLE_MARGIN,
        Err(_) => false,
    };
    angles_ok && gram_is_clear(s)
}

fn gram_is_clear(s: &Simplex) -> bool {
    let tol = TolerancePolicy::default();
    let Ok(g) = s.gram() else { return false };
    if g.classify(&tol).geometry() != Some(s.tag()) {
        return false;
    }
    let d = g.diagnostics(&tol);
    match s.tag() {
        GeometryTag::Spherical => d.det.abs() > GRAM_MARGIN,
        GeometryTag::Euclidean => d.min_cofactor() > GRAM_MARGIN,
        GeometryTag::Hyperbolic => d.det.abs() > GRAM_MARGIN && d.min_cofactor() > GRAM_MARGIN,
    }
}

/// Draws a well-conditioned simplex from `rng`.
pub fn sample_simplex<R: Rng + ?Sized>(rng: &mut R, tag: GeometryTag, dim: usize) -> Result<Simplex> {
    check_dimension(dim)?;
    for _ in 0..MAX_ATTEMPTS {
        let vertices = draw_vertices(rng, tag, dim)?;
        if let Ok(s) = Simplex::new(tag, vertices) {
            if is_well_conditioned(&s) {
                return Ok(s);
            }
        }
    }
    Err(exhausted("well-conditioned simplex"))
}

fn exhausted(what: &str) -> Error {
    Error::NumericalFailure(format!("no {what} found in {MAX_ATTEMPTS} draws"))
}

/// Largest barycentric coordinate that counts as "on the boundary" for
/// [`sample_boundary_center`].
pub const BOUNDARY_BARYCENTRIC: f64 = 1e-3;

/// Draws spherical simplexes until one has the center of its dual's
/// smallest enclosing ball on (or within [`BOUNDARY_BARYCENTRIC`] of) a
/// proper face of the dual.
pub fn sample_boundary_center<R: Rng + ?Sized>(rng: &mut R, dim: usize, tol: &TolerancePolicy) -> Result<Simplex> {
    check_dimension(dim)?;
    for _ in 0..MAX_ATTEMPTS / 100 {
        let s = sample_simplex(rng, GeometryTag::Spherical, dim)?;
        let Ok(dual) = spherical_dual(&s) else { continue };
        let Ok(ball) = min_enclosing_spherical_ball(dual.vertices(), tol) else { continue };
        let Ok(chain) = extend_dual_to_equator(&dual, &ball, tol) else { continue };
        if chain.barycentric.iter().copied().fold(f64::INFINITY, f64::min) < BOUNDARY_BARYCENTRIC {
            return Ok(s);
        }
    }
    Err(exhausted("simplex with a face-centered dual ball"))
}

/// A well-conditioned simplex determined entirely by `seed`.
pub fn random_simplex(tag: GeometryTag, dim: usize, seed: u64) -> Result<Simplex> {
    sample_simplex(&mut rng_from_seed(seed), tag, dim)
}
