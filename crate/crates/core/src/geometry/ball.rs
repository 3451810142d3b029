//! Smallest geodesic ball containing a finite set of sphere points.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DVector;

use crate::error::{invalid, Error, Result};
use crate::numeric::{hemisphere_witness, min_norm_point, HemisphereMode};
use crate::tolerance::TolerancePolicy;

use super::point::{GeometryTag, ModelPoint};

/// Points at distance `radius ± SUPPORT_TOL` from the center form the support.
const SUPPORT_TOL: f64 = 1e-8;

/// A closed geodesic ball on `S^n` with radius below `pi/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalBall {
    pub center: ModelPoint,
    pub radius: f64,
}

impl SphericalBall {
    pub fn new(center: ModelPoint, radius: f64) -> Result<Self> {
        if center.tag() != GeometryTag::Spherical {
            return Err(invalid("ball center must be a spherical point"));
        }
        if !(0.0..FRAC_PI_2).contains(&radius) {
            return Err(Error::BallTooLarge { radius });
        }
        Ok(SphericalBall { center, radius })
    }

    pub fn contains(&self, p: &ModelPoint, slack: f64) -> bool {
        spherical_angle(self.center.coords(), p.coords()) <= self.radius + slack
    }
}

/// The minimal ball together with the indices of the points on its boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct EnclosingBall {
    pub ball: SphericalBall,
    pub support: Vec<usize>,
}

impl EnclosingBall {
    /// Optimality certificate: the support points, seen from the center as
    /// tangent directions, do not fit in any open hemisphere of `∂B`.
    pub fn support_is_balanced(&self, points: &[ModelPoint], tol: &TolerancePolicy) -> Result<bool> {
        if self.ball.radius == 0.0 {
            return Ok(true);
        }
        let s = self.ball.center.coords();
        let dirs: Vec<DVector<f64>> = self
            .support
            .iter()
            .map(|&i| {
                let v = points[i].coords();
                let t = v - s * s.dot(v);
                let n = t.norm();
                t / n
            })
            .collect();
        Ok(hemisphere_witness(&dirs, HemisphereMode::Open, tol)?.is_none())
    }
}

/// Accurate angle between unit vectors, good near 0 and pi.
pub(crate) fn spherical_angle(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).norm().atan2((a + b).norm()) * 2.0
}

/// Smallest closed ball on the sphere containing `points`.
///
/// For points inside an open hemisphere, maximizing `min_i <c, v_i>` over
/// unit `c` is the same as finding the point of `conv{v_i}` closest to the
/// origin; the center is that point normalized and `cos(radius)` is its
/// norm. Fails with [`Error::BallTooLarge`] when the radius reaches
/// `pi/2 - eq_zero`.
pub fn min_enclosing_spherical_ball(points: &[ModelPoint], tol: &TolerancePolicy) -> Result<EnclosingBall> {
    let first = points.first().ok_or_else(|| invalid("no points to enclose"))?;
    if points.len() > 16 {
        return Err(invalid("at most 16 points are supported"));
    }
    for p in points {
        if p.tag() != GeometryTag::Spherical || p.coords().len() != first.coords().len() {
            return Err(invalid("all points must be spherical points of the same dimension"));
        }
    }
    let coords: Vec<DVector<f64>> = points.iter().map(|p| p.coords().clone()).collect();
    let nearest = min_norm_point(&coords).point;
    let norm = nearest.norm();
    if norm <= tol.eq_zero {
        return Err(Error::BallTooLarge { radius: FRAC_PI_2 });
    }
    let center = ModelPoint::project(GeometryTag::Spherical, nearest / norm)?;
    let dists: Vec<f64> = coords.iter().map(|v| spherical_angle(center.coords(), v)).collect();
    let radius = dists.iter().copied().fold(0.0, f64::max);
    if radius >= FRAC_PI_2 - tol.eq_zero {
        return Err(Error::BallTooLarge { radius });
    }
    let support = (0..points.len())
        .filter(|&i| radius - dists[i] <= SUPPORT_TOL)
        .collect();
    Ok(EnclosingBall {
        ball: SphericalBall::new(center, radius)?,
        support,
    })
}
