//! Hemisphere feasibility for small sets of unit vectors.
//!
//! The quantity behind every question here is the signed margin
//!
//! ```text
//! tau = max_{|w| = 1} min_i <w, u_i>
//! ```
//!
//! When the origin lies outside `conv{u_i}`, `tau` is the distance from the
//! origin to the hull and the optimal `w` points at the nearest hull point.
//! When the origin lies inside, `-tau` is the distance from the origin to
//! the nearest facet of the hull. Both are found by exhaustive enumeration
//! of active sets, which is cheap for at most eight vectors.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::tolerance::TolerancePolicy;

use super::solve::{kernel_vector, span_basis};

const UNIT_TOL: f64 = 1e-9;
const FACET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HemisphereMode {
    /// `<w, u_i> >= strict_margin` for every `i`.
    Open,
    /// `<w, u_i> >= -strict_margin` for every `i`.
    Closed,
}

/// Closest point of a convex hull to the origin, with its convex weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MinNormPoint {
    pub point: DVector<f64>,
    pub weights: Vec<f64>,
}

/// Minimum-norm point of `conv(points)`.
///
/// Every subset of at most `dim + 1` points is tried: the affine projection
/// of the origin onto its hull is solved from the KKT system, kept if the
/// weights are nonnegative, and the shortest resulting point wins. Every
/// candidate is a genuine hull point and the optimum's support is one of the
/// subsets, so the minimum over candidates is the answer.
pub fn min_norm_point(points: &[DVector<f64>]) -> MinNormPoint {
    let m = points.len();
    assert!(m > 0 && m <= 16, "min_norm_point supports 1..=16 points");
    let dim = points[0].len();
    let gram = DMatrix::from_fn(m, m, |i, j| points[i].dot(&points[j]));

    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1u32 << m) {
        let idx: Vec<usize> = (0..m).filter(|i| (mask >> i) & 1 == 1).collect();
        let s = idx.len();
        if s > dim + 1 {
            continue;
        }
        let mut kkt = DMatrix::zeros(s + 1, s + 1);
        for a in 0..s {
            for b in 0..s {
                kkt[(a, b)] = gram[(idx[a], idx[b])];
            }
            kkt[(a, s)] = 1.0;
            kkt[(s, a)] = 1.0;
        }
        let mut rhs = DVector::zeros(s + 1);
        rhs[s] = 1.0;
        let Some(sol) = kkt.lu().solve(&rhs) else {
            continue;
        };
        if sol.iter().any(|v| !v.is_finite()) || (0..s).any(|a| sol[a] < -1e-10) {
            continue;
        }
        let mut weights = vec![0.0; m];
        for (a, &i) in idx.iter().enumerate() {
            weights[i] = sol[a].max(0.0);
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            continue;
        }
        weights.iter_mut().for_each(|w| *w /= total);
        let p = combine(points, &weights);
        let norm2 = p.norm_squared();
        if best.as_ref().is_none_or(|(b, _)| norm2 < *b) {
            best = Some((norm2, weights));
        }
    }
    let (_, weights) = best.expect("singleton subsets always yield a candidate");
    MinNormPoint {
        point: combine(points, &weights),
        weights,
    }
}

fn combine(points: &[DVector<f64>], weights: &[f64]) -> DVector<f64> {
    let mut p = DVector::zeros(points[0].len());
    for (u, &w) in points.iter().zip(weights) {
        p.axpy(w, u, 1.0);
    }
    p
}

/// The signed margin `tau` and a unit direction attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct HemisphereMargin {
    pub value: f64,
    pub direction: DVector<f64>,
}

fn validate_unit_points(points: &[DVector<f64>]) -> Result<usize> {
    let first = points.first().ok_or_else(|| invalid("empty point set"))?;
    let dim = first.len();
    if dim == 0 {
        return Err(invalid("points must have at least one coordinate"));
    }
    if points.len() > 16 {
        return Err(invalid("at most 16 points are supported"));
    }
    for (i, u) in points.iter().enumerate() {
        if u.len() != dim {
            return Err(invalid(format!("point {i} has dimension {}, expected {dim}", u.len())));
        }
        if u.iter().any(|v| !v.is_finite()) || (u.norm() - 1.0).abs() > UNIT_TOL {
            return Err(invalid(format!("point {i} is not a unit vector (norm {})", u.norm())));
        }
    }
    Ok(dim)
}

fn min_product(points: &[DVector<f64>], w: &DVector<f64>) -> f64 {
    points.iter().map(|u| u.dot(w)).fold(f64::INFINITY, f64::min)
}

/// Flips `v` so that its largest-magnitude component (first on ties) is positive.
fn canonical_sign(mut v: DVector<f64>) -> DVector<f64> {
    let amax = v.amax();
    if let Some(lead) = v.iter().copied().find(|x| x.abs() >= amax * (1.0 - 1e-12)) {
        if lead < 0.0 {
            v.neg_mut();
        }
    }
    v
}

/// Computes `tau = max_{|w|=1} min_i <w, u_i>` and a maximizing `w`.
pub fn hemisphere_margin(points: &[DVector<f64>]) -> Result<HemisphereMargin> {
    let dim = validate_unit_points(points)?;

    let nearest = min_norm_point(points).point;
    let dist = nearest.norm();
    if dist > FACET_TOL {
        let direction = nearest / dist;
        return Ok(HemisphereMargin {
            value: min_product(points, &direction),
            direction,
        });
    }

    // The origin is in the hull. If the points do not span the space, any
    // vector orthogonal to their span is a closed witness.
    let (basis, singular) = span_basis(points, dim);
    let smax = singular[0];
    if points.len() < dim || singular[dim - 1] <= 1e-12 * smax {
        let direction = canonical_sign(basis.column(dim - 1).into_owned());
        return Ok(HemisphereMargin {
            value: min_product(points, &direction),
            direction,
        });
    }

    // Full rank with the origin inside: nearest facet of the hull.
    let mut best: Option<(f64, DVector<f64>)> = None;
    for subset in combinations(points.len(), dim) {
        let m = DMatrix::from_fn(dim, dim + 1, |r, c| {
            if c < dim {
                points[subset[r]][c]
            } else {
                -1.0
            }
        });
        let Some(x) = kernel_vector(&m, 1e-12) else {
            continue;
        };
        let normal = x.rows(0, dim).into_owned();
        let norm = normal.norm();
        if norm <= 1e-14 {
            continue;
        }
        let (mut normal, mut offset) = (normal / norm, x[dim] / norm);
        let sides: Vec<f64> = points.iter().map(|u| u.dot(&normal) - offset).collect();
        let outward = if sides.iter().all(|&s| s <= FACET_TOL) {
            true
        } else if sides.iter().all(|&s| s >= -FACET_TOL) {
            false
        } else {
            continue;
        };
        if !outward {
            normal.neg_mut();
            offset = -offset;
        }
        if best.as_ref().is_none_or(|(c, _)| offset < *c) {
            best = Some((offset, normal));
        }
    }
    let (_, normal) = best.ok_or_else(|| {
        Error::NumericalFailure("no supporting facet found for a full-rank point set".into())
    })?;
    let direction = -normal;
    Ok(HemisphereMargin {
        value: min_product(points, &direction),
        direction,
    })
}

/// A unit vector `w` placing every point in the open (or closed) hemisphere
/// centred at `w`, or `None` when no such vector exists.
pub fn hemisphere_witness(
    points: &[DVector<f64>],
    mode: HemisphereMode,
    tol: &TolerancePolicy,
) -> Result<Option<DVector<f64>>> {
    let margin = hemisphere_margin(points)?;
    let threshold = match mode {
        HemisphereMode::Open => tol.strict_margin,
        HemisphereMode::Closed => -tol.strict_margin,
    };
    let w = margin.direction;
    if margin.value >= threshold && points.iter().all(|u| u.dot(&w) >= threshold) {
        Ok(Some(w))
    } else {
        Ok(None)
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}
