use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::geometry::{
    basepoint, min_enclosing_spherical_ball, spherical_angle, spherical_ray_extend,
    translate_to_basepoint, EnclosingBall, GeometryTag, Isometry, ModelPoint, SphericalBall,
};
use crate::numeric::{combinations, hemisphere_margin, solve_square, span_basis};
use crate::simplex::{compare, spherical_dual, DihedralAngles, OrderRelation, Simplex};
use crate::tolerance::TolerancePolicy;

use super::m2::{tangent_angles, tangent_simplex};

/// Barycentric coordinates at or below this value count as zero when
/// locating the ball center on a face of the dual.
pub const BARYCENTRIC_TOL: f64 = 1e-8;

/// Most halvings of the perturbation size before giving up.
pub const MAX_HALVINGS: usize = 60;

/// Starting step of the perturbation search.
pub const LARGEST_DELTA: f64 = 0.5;

/// Relative singular-value floor for "linearly independent" and "rank".
const RANK_TOL: f64 = 1e-9;

/// Largest allowed `|sum_i b_i w_i|`.
const BALANCE_TOL: f64 = 1e-9;

/// Every stage of the dual-extension construction. Vectors after
/// `centered_dual` are in the rotated frame where the ball center is the
/// south pole `(0, ..., 0, -1)`.
#[derive(Debug, Clone)]
pub struct DualChain {
    /// The dual simplex in the input's coordinates.
    pub dual: Simplex,
    /// Smallest ball containing the dual, in the input's coordinates.
    pub ball: SphericalBall,
    /// Indices of dual vertices on the boundary of the ball.
    pub support: Vec<usize>,
    /// Rotation taking the ball center to the south pole.
    pub rotation: Isometry,
    pub centered_dual: Vec<DVector<f64>>,
    /// Barycentric coordinates of the center in the dual, summing to 1.
    pub barycentric: Vec<f64>,
    /// Arclength each dual vertex is pushed away from the center.
    pub t_hat: f64,
    /// Pushed vertices; the support lands on the equator.
    pub extended: Vec<DVector<f64>>,
    /// Face of the dual holding the center, when the perturbation ran.
    pub face: Option<Vec<usize>>,
    /// Perturbation size; zero when none was needed.
    pub delta: f64,
    /// Position of `delta` in the list of step sizes tried.
    pub halvings: usize,
    /// Unit vectors after perturbation; empty until it has run.
    pub perturbed: Vec<DVector<f64>>,
    /// Positive weights summing to 1 with `sum_i b_i w_i = 0`.
    pub coefficients: Vec<f64>,
    /// Orthonormal basis (columns) of the hyperplane spanned by `perturbed`.
    pub span: DMatrix<f64>,
}

impl DualChain {
    pub fn dimension(&self) -> usize {
        self.centered_dual.len() - 1
    }

    /// Number of dual vertices on the boundary of the ball.
    pub fn boundary_count(&self) -> usize {
        self.support.len()
    }

    /// Number of vertices of the face holding the center, when perturbed.
    pub fn face_size(&self) -> Option<usize> {
        self.face.as_ref().map(Vec::len)
    }

    pub fn is_perturbed(&self) -> bool {
        self.face.is_some()
    }

    /// `perturbed` in coordinates of `span`, renormalized.
    pub fn span_coordinates(&self) -> Vec<DVector<f64>> {
        self.perturbed
            .iter()
            .map(|w| {
                let c = self.span.transpose() * w;
                let n = c.norm();
                c / n
            })
            .collect()
    }
}

/// Coordinates `beta` with `sum beta_i v_i` parallel to `p`, normalized to
/// sum to 1.
pub fn barycentric_coordinates(vertices: &[DVector<f64>], p: &DVector<f64>, tol: &TolerancePolicy) -> Result<Vec<f64>> {
    let m = DMatrix::from_columns(vertices);
    if m.nrows() != m.ncols() {
        return Err(invalid("barycentric coordinates need n+1 vertices in dimension n+1"));
    }
    let beta = solve_square(&m, p, tol)?;
    let sum = beta.sum();
    if sum.abs() <= f64::EPSILON {
        return Err(Error::NumericalFailure("barycentric coordinates sum to zero".into()));
    }
    Ok(beta.iter().map(|b| b / sum).collect())
}

fn pairwise_min_gain(a: &[DVector<f64>], b: &[DVector<f64>]) -> f64 {
    let k = a.len();
    let mut gain = f64::INFINITY;
    for i in 0..k {
        for j in (i + 1)..k {
            gain = gain.min(spherical_angle(&a[i], &a[j]) - spherical_angle(&b[i], &b[j]));
        }
    }
    gain
}

/// Pushes every dual vertex away from the ball center by `pi/2 - radius`,
/// so the vertices on the boundary of the ball reach the equator.
pub fn extend_dual_to_equator(dual: &Simplex, ball: &EnclosingBall, tol: &TolerancePolicy) -> Result<DualChain> {
    if dual.tag() != GeometryTag::Spherical {
        return Err(invalid("the dual must be a spherical simplex"));
    }
    let dim = dual.dimension() + 1;
    let rotation = translate_to_basepoint(&ball.ball.center)?;
    let south = basepoint(GeometryTag::Spherical, dim)?;
    let centered = dual
        .vertices()
        .iter()
        .map(|v| rotation.apply(v))
        .collect::<Result<Vec<ModelPoint>>>()?;
    let t_hat = FRAC_PI_2 - ball.ball.radius;
    let mut extended = Vec::with_capacity(centered.len());
    for (i, v) in centered.iter().enumerate() {
        let mut u = spherical_ray_extend(&south, v, t_hat)?.into_coords();
        if ball.support.contains(&i) {
            u[dim - 1] = 0.0;
            let n = u.norm();
            u /= n;
        }
        extended.push(u);
    }
    let centered_dual: Vec<DVector<f64>> = centered.into_iter().map(ModelPoint::into_coords).collect();
    let barycentric = barycentric_coordinates(&centered_dual, south.coords(), tol)?;
    Ok(DualChain {
        dual: dual.clone(),
        ball: ball.ball.clone(),
        support: ball.support.clone(),
        rotation,
        centered_dual,
        barycentric,
        t_hat,
        extended,
        face: None,
        delta: 0.0,
        halvings: 0,
        perturbed: Vec::new(),
        coefficients: Vec::new(),
        span: DMatrix::zeros(0, 0),
    })
}

/// Moves the vertices `u_i`, `i` in `face`, by `-delta` times the sum of the
/// vertices outside the face. Returns the moved (unnormalized) vectors and
/// the weights `b` with `sum b_i w_i = 0`: `a_i / sum a` on the face, where
/// `sum a_i u_i = 0` with `a > 0`, and `delta` off it.
pub fn perturb_face(u: &[DVector<f64>], face: &[usize], delta: f64) -> Result<(Vec<DVector<f64>>, Vec<f64>)> {
    let k = u.len();
    if face.len() < 2 || face.iter().any(|&i| i >= k) {
        return Err(invalid("face must list at least two valid vertex indices"));
    }
    let outside: Vec<usize> = (0..k).filter(|i| !face.contains(i)).collect();
    let shift = outside
        .iter()
        .fold(DVector::zeros(u[0].len()), |acc, &j| acc + &u[j])
        * delta;
    let w: Vec<DVector<f64>> = (0..k)
        .map(|i| if face.contains(&i) { &u[i] - &shift } else { u[i].clone() })
        .collect();

    let face_vectors: Vec<DVector<f64>> = face.iter().map(|&i| u[i].clone()).collect();
    let a = positive_kernel(&face_vectors).ok_or_else(|| {
        Error::PreconditionViolated("face vertices have no positive linear relation".into())
    })?;
    let mut b = vec![delta; k];
    for (slot, &i) in face.iter().enumerate() {
        b[i] = a[slot];
    }
    Ok((w, b))
}

/// Null vector of the matrix with columns `vectors`, scaled to sum to 1, if
/// it is entrywise positive.
fn positive_kernel(vectors: &[DVector<f64>]) -> Option<Vec<f64>> {
    let k = vectors.len();
    let rows = vectors[0].len().max(k);
    let m = DMatrix::from_fn(rows, k, |r, c| if r < vectors[c].len() { vectors[c][r] } else { 0.0 });
    let svd = m.svd(false, true);
    let vt = svd.v_t?;
    let smallest = (0..k).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))?;
    let x: Vec<f64> = vt.row(smallest).iter().copied().collect();
    let sum: f64 = x.iter().sum();
    if sum.abs() <= f64::EPSILON {
        return None;
    }
    let x: Vec<f64> = x.iter().map(|v| v / sum).collect();
    x.iter().all(|&v| v > 0.0).then_some(x)
}

fn normalized(vs: &[DVector<f64>]) -> Vec<DVector<f64>> {
    vs.iter().map(|v| v / v.norm()).collect()
}

/// Basis of the span of `vs` if its rank is exactly `vs.len() - 1`.
fn hyperplane_basis(vs: &[DVector<f64>]) -> Option<DMatrix<f64>> {
    let n = vs.len() - 1;
    let (basis, sv) = span_basis(vs, n);
    let smax = sv[0];
    let full = sv.get(n).copied().unwrap_or(0.0);
    (sv[n - 1] > RANK_TOL * smax && full <= RANK_TOL * smax).then_some(basis)
}

fn coordinates_in(basis: &DMatrix<f64>, vs: &[DVector<f64>]) -> Vec<DVector<f64>> {
    vs.iter()
        .map(|v| {
            let c = basis.transpose() * v;
            let n = c.norm();
            c / n
        })
        .collect()
}

/// Signed hemisphere margin of `vs` inside the hyperplane they span; below
/// `-strict_margin` means no closed hemisphere holds them.
fn margin_in_span(vs: &[DVector<f64>]) -> Result<f64> {
    let basis = hyperplane_basis(vs)
        .ok_or_else(|| Error::NumericalFailure("points do not span a hyperplane".into()))?;
    Ok(hemisphere_margin(&coordinates_in(&basis, vs))?.value)
}

/// Smallest `sigma_min / sigma_max` over all subsets of `vs.len() - 1`
/// vectors. The principal blocks of the output Gram matrix are the Gram
/// matrices of these subsets.
fn subset_conditioning(vs: &[DVector<f64>]) -> f64 {
    let k = vs.len();
    combinations(k, k - 1)
        .into_iter()
        .map(|subset| {
            let cols: Vec<DVector<f64>> = subset.iter().map(|&i| vs[i].clone()).collect();
            let sv = DMatrix::from_columns(&cols).singular_values();
            sv.min() / sv.max()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Completes the chain: if the extended vertices already lie in no closed
/// hemisphere of their span they are kept; otherwise the face of the dual
/// holding the ball center is perturbed with a shrinking step until the
/// perturbed vertices are in general position, lie in no closed hemisphere
/// and are still pairwise farther apart than the dual vertices.
pub fn perturb_off_closed_hemisphere(mut chain: DualChain, tol: &TolerancePolicy) -> Result<DualChain> {
    let u = chain.extended.clone();
    let v = chain.centered_dual.clone();
    let k = u.len();
    if hyperplane_basis(&u).is_none() {
        return Err(Error::NumericalFailure("extended vertices do not span a hyperplane".into()));
    }

    let perturbed = if margin_in_span(&u)? < -tol.strict_margin {
        chain.face = None;
        chain.delta = 0.0;
        chain.halvings = 0;
        u
    } else {
        let mut face: Vec<usize> = (0..k).filter(|&i| chain.barycentric[i] > BARYCENTRIC_TOL).collect();
        if face.len() == k {
            let weakest = (0..k)
                .min_by(|&a, &b| chain.barycentric[a].total_cmp(&chain.barycentric[b]))
                .expect("non-empty");
            face.retain(|&i| i != weakest);
        }
        if face.len() < 2 {
            return Err(Error::NumericalFailure(format!(
                "ball center lies on a face with {} vertices",
                face.len()
            )));
        }
        let epsilon = 0.5 * pairwise_min_gain(&u, &v);
        if !(epsilon > 0.0) {
            return Err(Error::NumericalFailure(format!(
                "extension did not increase all distances (gain {epsilon:e})"
            )));
        }
        // Every accepted step yields a valid simplex. Among the large steps,
        // take the one maximizing the smaller of the angle margin it leaves
        // and the conditioning of its output; failing that, shrink from
        // the small-step bound until one is accepted.
        let small = epsilon / (2.0 * k as f64);
        let candidate = |delta: f64| -> Result<Option<(Vec<DVector<f64>>, f64)>> {
            let (w, _) = perturb_face(&u, &face, delta)?;
            let w = normalized(&w);
            let conditioning = subset_conditioning(&w);
            let gain = pairwise_min_gain(&w, &v);
            let ok = conditioning > RANK_TOL
                && gain > tol.angle_eps
                && margin_in_span(&w).is_ok_and(|m| m < -tol.strict_margin);
            Ok(ok.then_some((w, conditioning.min(gain))))
        };
        let mut accepted: Option<(Vec<DVector<f64>>, f64, usize)> = None;
        let mut best_score = 0.0;
        let large: Vec<f64> = (0..).map(|j| LARGEST_DELTA * 0.5f64.powi(j)).take_while(|&d| d > small).collect();
        for (step, &delta) in large.iter().enumerate() {
            if let Some((w, score)) = candidate(delta)? {
                if score > best_score {
                    best_score = score;
                    accepted = Some((w, delta, step));
                }
            }
        }
        if accepted.is_none() {
            for j in 0..MAX_HALVINGS {
                let delta = small * 0.5f64.powi(j as i32);
                if let Some((w, _)) = candidate(delta)? {
                    accepted = Some((w, delta, large.len() + j));
                    break;
                }
            }
        }
        let (w, delta, halvings) = accepted.ok_or_else(|| {
            Error::NumericalFailure(format!(
                "no perturbation found after {MAX_HALVINGS} halvings (face {face:?}, epsilon {epsilon:e})"
            ))
        })?;
        chain.face = Some(face);
        chain.delta = delta;
        chain.halvings = halvings;
        w
    };

    let span = hyperplane_basis(&perturbed)
        .ok_or_else(|| Error::NumericalFailure("perturbed vertices do not span a hyperplane".into()))?;
    let coefficients = positive_kernel(&perturbed).ok_or_else(|| {
        Error::NumericalFailure("perturbed vertices have no positive linear relation".into())
    })?;
    let residual = perturbed
        .iter()
        .zip(&coefficients)
        .fold(DVector::zeros(k), |acc, (w, b)| acc + w * *b)
        .norm();
    if residual > BALANCE_TOL {
        return Err(Error::NumericalFailure(format!("linear relation residual {residual:e}")));
    }
    chain.perturbed = perturbed;
    chain.coefficients = coefficients;
    chain.span = span;
    Ok(chain)
}

/// Invariants of a completed chain, measured.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainCheck {
    pub boundary_count: usize,
    /// Support of the ball fits in no open hemisphere of its boundary.
    pub support_balanced: bool,
    /// Largest `|last coordinate|` over the support after extension.
    pub equator_residual: f64,
    /// Vertices off the support end strictly below the equator.
    pub others_below_equator: bool,
    /// `min_{i<j} d(u_i, u_j) - d(v_i, v_j)`.
    pub extension_gain: f64,
    /// The extended vertices fit in no open hemisphere of their span.
    pub extended_not_in_open_hemisphere: bool,
    /// `min_{i<j} d(w_i, w_j) - d(v_i, v_j)`.
    pub perturbed_gain: f64,
    /// Hemisphere margin of the perturbed vertices in their span; negative
    /// means no closed hemisphere holds them.
    pub perturbed_margin: f64,
    pub balance_residual: f64,
    pub coefficients_positive: bool,
}

impl ChainCheck {
    pub fn passed(&self, tol: &TolerancePolicy) -> bool {
        self.boundary_count >= 2
            && self.support_balanced
            && self.equator_residual <= 1e-10
            && self.others_below_equator
            && self.extension_gain > 0.0
            && self.extended_not_in_open_hemisphere
            && self.perturbed_gain > tol.angle_eps
            && self.perturbed_margin < -tol.strict_margin
            && self.balance_residual <= BALANCE_TOL
            && self.coefficients_positive
    }
}

/// Re-measures every invariant of a completed chain from its stored data.
pub fn check_chain(chain: &DualChain, tol: &TolerancePolicy) -> Result<ChainCheck> {
    if chain.perturbed.is_empty() {
        return Err(invalid("chain has not been perturbed yet"));
    }
    let k = chain.extended.len();
    let last = k - 1;
    let enclosing = EnclosingBall {
        ball: chain.ball.clone(),
        support: chain.support.clone(),
    };
    let support_balanced = enclosing.support_is_balanced(chain.dual.vertices(), tol)?;
    let equator_residual = chain
        .support
        .iter()
        .map(|&i| chain.extended[i][last].abs())
        .fold(0.0, f64::max);
    let others_below_equator = (0..k)
        .filter(|i| !chain.support.contains(i))
        .all(|i| chain.extended[i][last] < 0.0);
    let extended_not_in_open_hemisphere = margin_in_span(&chain.extended)? < tol.strict_margin;
    let balance_residual = chain
        .perturbed
        .iter()
        .zip(&chain.coefficients)
        .fold(DVector::zeros(k), |acc, (w, b)| acc + w * *b)
        .norm();
    Ok(ChainCheck {
        boundary_count: chain.boundary_count(),
        support_balanced,
        equator_residual,
        others_below_equator,
        extension_gain: pairwise_min_gain(&chain.extended, &chain.centered_dual),
        extended_not_in_open_hemisphere,
        perturbed_gain: pairwise_min_gain(&chain.perturbed, &chain.centered_dual),
        perturbed_margin: margin_in_span(&chain.perturbed)?,
        balance_residual,
        coefficients_positive: chain.coefficients.iter().all(|&b| b > 0.0),
    })
}

#[derive(Debug, Clone)]
pub struct M1Result {
    pub euclidean: Simplex,
    /// Angles of the Euclidean simplex.
    pub xi: DihedralAngles,
    /// Angles of the spherical input.
    pub sigma: DihedralAngles,
    pub chain: DualChain,
    /// `xi` compared with `sigma`.
    pub order: OrderRelation,
    /// Largest gap between `xi` and the angles measured on `euclidean`.
    pub angle_residual: f64,
}

/// A Euclidean simplex whose angles are strictly smaller than those of the
/// spherical simplex `s`, built from its dual: enclose the dual in its
/// smallest ball, push the dual vertices away from the center until the
/// farthest reach the equator, perturb off closed hemispheres if the center
/// sits on a face, and take the simplex tangent to the unit sphere of their
/// span at the resulting points.
pub fn m1_euclidean_from_spherical(s: &Simplex, tol: &TolerancePolicy) -> Result<M1Result> {
    if s.tag() != GeometryTag::Spherical {
        return Err(invalid(format!("M1 needs a spherical simplex, got {}", s.tag())));
    }
    let dual = spherical_dual(s)?;
    let ball = min_enclosing_spherical_ball(dual.vertices(), tol)?;
    let chain = extend_dual_to_equator(&dual, &ball, tol)?;
    let chain = perturb_off_closed_hemisphere(chain, tol)?;
    let coords = chain.span_coordinates();
    let euclidean = tangent_simplex(&coords, tol)?;
    let xi = tangent_angles(&coords)?;
    let sigma = s.dihedral_angles()?;
    let angle_residual = euclidean.dihedral_angles()?.max_abs_diff(&xi);
    let order = compare(&xi, &sigma, tol)?;
    Ok(M1Result {
        euclidean,
        xi,
        sigma,
        chain,
        order,
        angle_residual,
    })
}
