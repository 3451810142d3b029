use std::fmt;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest accepted normalization residual for a model point.
pub const MODEL_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryTag {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl GeometryTag {
    pub const ALL: [GeometryTag; 3] = [
        GeometryTag::Spherical,
        GeometryTag::Euclidean,
        GeometryTag::Hyperbolic,
    ];

    /// Number of coordinates a point of the `n`-dimensional model carries.
    pub fn ambient_dim(self, n: usize) -> usize {
        match self {
            GeometryTag::Euclidean => n,
            GeometryTag::Spherical | GeometryTag::Hyperbolic => n + 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GeometryTag::Spherical => "spherical",
            GeometryTag::Euclidean => "euclidean",
            GeometryTag::Hyperbolic => "hyperbolic",
        }
    }
}

impl fmt::Display for GeometryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Minkowski form `sum_{i<n} a_i b_i - a_n b_n`.
pub fn minkowski(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len() - 1;
    a.rows(0, n).dot(&b.rows(0, n)) - a[n] * b[n]
}

/// The ambient bilinear form of a model: Euclidean dot product for `S^n`
/// and `E^n`, Minkowski form for `H^n`.
pub fn ambient_inner(tag: GeometryTag, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    match tag {
        GeometryTag::Hyperbolic => minkowski(a, b),
        _ => a.dot(b),
    }
}

/// A point of `S^n`, `E^n` or `H^n` in its concrete model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint {
    tag: GeometryTag,
    coords: DVector<f64>,
}

impl ModelPoint {
    /// Wraps `coords` after checking the model constraint to [`MODEL_RESIDUAL`].
    pub fn new(tag: GeometryTag, coords: DVector<f64>) -> Result<Self> {
        let min_len = if tag == GeometryTag::Euclidean { 1 } else { 2 };
        if coords.len() < min_len {
            return Err(invalid(format!("{tag} point needs at least {min_len} coordinates")));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(invalid("point has non-finite coordinates"));
        }
        let p = ModelPoint { tag, coords };
        let r = p.residual();
        if r >= MODEL_RESIDUAL {
            return Err(invalid(format!("{tag} point off its model (residual {r:e})")));
        }
        if tag == GeometryTag::Hyperbolic && p.coords[p.coords.len() - 1] <= 0.0 {
            return Err(invalid("hyperboloid point must lie on the upper sheet"));
        }
        Ok(p)
    }

    pub fn spherical(coords: impl Into<Vec<f64>>) -> Result<Self> {
        ModelPoint::new(GeometryTag::Spherical, DVector::from_vec(coords.into()))
    }

    pub fn euclidean(coords: impl Into<Vec<f64>>) -> Result<Self> {
        ModelPoint::new(GeometryTag::Euclidean, DVector::from_vec(coords.into()))
    }

    pub fn hyperbolic(coords: impl Into<Vec<f64>>) -> Result<Self> {
        ModelPoint::new(GeometryTag::Hyperbolic, DVector::from_vec(coords.into()))
    }

    /// Pulls `coords` back onto the model: normalizes on the sphere, rescales
    /// onto the upper hyperboloid sheet. Used for internally constructed
    /// points whose constraint only holds up to roundoff.
    pub fn project(tag: GeometryTag, coords: DVector<f64>) -> Result<Self> {
        let coords = match tag {
            GeometryTag::Euclidean => coords,
            GeometryTag::Spherical => {
                let n = coords.norm();
                if !(n > 0.0) || !n.is_finite() {
                    return Err(invalid("cannot normalize a zero vector onto the sphere"));
                }
                coords / n
            }
            GeometryTag::Hyperbolic => {
                let q = minkowski(&coords, &coords);
                if !(q < 0.0) || !q.is_finite() {
                    return Err(invalid("vector is not time-like; no hyperboloid point"));
                }
                let sign = if coords[coords.len() - 1] < 0.0 { -1.0 } else { 1.0 };
                coords * (sign / (-q).sqrt())
            }
        };
        ModelPoint::new(tag, coords)
    }

    /// Lifts a point of `E^n` to the hyperboloid above it.
    pub fn hyperbolic_from_spatial(spatial: &DVector<f64>) -> Result<Self> {
        let n = spatial.len();
        let mut x = DVector::zeros(n + 1);
        x.rows_mut(0, n).copy_from(spatial);
        x[n] = (1.0 + spatial.norm_squared()).sqrt();
        ModelPoint::new(GeometryTag::Hyperbolic, x)
    }

    pub fn tag(&self) -> GeometryTag {
        self.tag
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn into_coords(self) -> DVector<f64> {
        self.coords
    }

    /// Intrinsic dimension `n` of the space the point lives in.
    pub fn model_dim(&self) -> usize {
        match self.tag {
            GeometryTag::Euclidean => self.coords.len(),
            _ => self.coords.len() - 1,
        }
    }

    /// `|‖x‖ - 1|` on the sphere, `|<x,x>_M + 1|` on the hyperboloid, 0 in `E^n`.
    pub fn residual(&self) -> f64 {
        match self.tag {
            GeometryTag::Euclidean => 0.0,
            GeometryTag::Spherical => (self.coords.norm() - 1.0).abs(),
            GeometryTag::Hyperbolic => (minkowski(&self.coords, &self.coords) + 1.0).abs(),
        }
    }

    pub fn antipode(&self) -> Result<Self> {
        if self.tag != GeometryTag::Spherical {
            return Err(invalid("antipode is only defined on the sphere"));
        }
        Ok(ModelPoint {
            tag: self.tag,
            coords: -&self.coords,
        })
    }
}

fn check_same_space(p: &ModelPoint, q: &ModelPoint) -> Result<()> {
    if p.tag != q.tag {
        return Err(invalid(format!("cannot measure between {} and {} points", p.tag, q.tag)));
    }
    if p.coords.len() != q.coords.len() {
        return Err(invalid("points have different dimensions"));
    }
    Ok(())
}

/// Geodesic distance: radians on `S^n` and `H^n`, length in `E^n`.
pub fn distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    check_same_space(p, q)?;
    Ok(match p.tag {
        GeometryTag::Spherical => p.coords.dot(&q.coords).clamp(-1.0, 1.0).acos(),
        GeometryTag::Euclidean => (&p.coords - &q.coords).norm(),
        GeometryTag::Hyperbolic => (-minkowski(&p.coords, &q.coords)).max(1.0).acosh(),
    })
}

/// Poincaré ball coordinates `x_{1..n} / (1 + x_{n+1})` of a hyperboloid point.
pub fn hyperboloid_to_poincare(p: &ModelPoint) -> Result<DVector<f64>> {
    if p.tag != GeometryTag::Hyperbolic {
        return Err(invalid("Poincaré conversion needs a hyperbolic point"));
    }
    let n = p.coords.len() - 1;
    Ok(p.coords.rows(0, n) / (1.0 + p.coords[n]))
}

/// Inverse of [`hyperboloid_to_poincare`]; `y` must lie in the open unit ball.
pub fn poincare_to_hyperboloid(y: &DVector<f64>) -> Result<ModelPoint> {
    if y.is_empty() || y.iter().any(|v| !v.is_finite()) {
        return Err(invalid("Poincaré point needs finite coordinates"));
    }
    let r2 = y.norm_squared();
    if r2 >= 1.0 {
        return Err(invalid(format!("Poincaré point has norm {} >= 1", r2.sqrt())));
    }
    let n = y.len();
    let denom = 1.0 - r2;
    let mut x = DVector::zeros(n + 1);
    x.rows_mut(0, n).copy_from(&(y * (2.0 / denom)));
    x[n] = (1.0 + r2) / denom;
    ModelPoint::project(GeometryTag::Hyperbolic, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn distances_in_each_model() {
        let e1 = ModelPoint::spherical([1.0, 0.0, 0.0]).unwrap();
        let e2 = ModelPoint::spherical([0.0, 1.0, 0.0]).unwrap();
        assert!((distance(&e1, &e2).unwrap() - FRAC_PI_2).abs() < 1e-15);

        let o = ModelPoint::hyperbolic([0.0, 0.0, 1.0]).unwrap();
        let p = ModelPoint::hyperbolic([1f64.sinh(), 0.0, 1f64.cosh()]).unwrap();
        assert!((distance(&o, &p).unwrap() - 1.0).abs() < 1e-12);

        let a = ModelPoint::euclidean([0.0, 0.0]).unwrap();
        let b = ModelPoint::euclidean([3.0, 4.0]).unwrap();
        assert_eq!(distance(&a, &b).unwrap(), 5.0);
    }

    #[test]
    fn tag_mismatch_is_an_error() {
        let s = ModelPoint::spherical([1.0, 0.0]).unwrap();
        let e = ModelPoint::euclidean([1.0, 0.0]).unwrap();
        assert!(distance(&s, &e).is_err());
    }

    #[test]
    fn model_constraints_are_enforced() {
        assert!(ModelPoint::spherical([1.0, 1.0]).is_err());
        assert!(ModelPoint::hyperbolic([0.0, -1.0]).is_err());
        assert!(ModelPoint::hyperbolic([1.0, 1.0]).is_err());
    }

    #[test]
    fn poincare_conversion() {
        let o = ModelPoint::hyperbolic([0.0, 0.0, 1.0]).unwrap();
        assert_eq!(hyperboloid_to_poincare(&o).unwrap().as_slice(), &[0.0, 0.0]);
        let p = ModelPoint::hyperbolic([1f64.sinh(), 0.0, 1f64.cosh()]).unwrap();
        let y = hyperboloid_to_poincare(&p).unwrap();
        // sinh t / (1 + cosh t) = tanh(t/2)
        assert!((y[0] - 0.5f64.tanh()).abs() < 1e-15);
        assert!(y[1].abs() < 1e-15);
        let back = poincare_to_hyperboloid(&y).unwrap();
        assert!((back.coords() - p.coords()).amax() < 1e-12);
        assert!(poincare_to_hyperboloid(&DVector::from_vec(vec![1.0, 0.0])).is_err());
    }
}
