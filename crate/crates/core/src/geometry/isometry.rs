use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};

use super::point::{GeometryTag, ModelPoint, MODEL_RESIDUAL};

/// A linear isometry of `S^n` (orthogonal matrix) or `H^n` (Lorentz matrix).
///
/// Because both models are linear, the same matrix also transports facet
/// normals and other ambient vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    tag: GeometryTag,
    matrix: DMatrix<f64>,
}

/// `(0, ..., 0, -1)` on the sphere, `(0, ..., 0, 1)` on the hyperboloid.
pub fn basepoint(tag: GeometryTag, ambient_dim: usize) -> Result<ModelPoint> {
    let mut c = DVector::zeros(ambient_dim);
    match tag {
        GeometryTag::Spherical => c[ambient_dim - 1] = -1.0,
        GeometryTag::Hyperbolic => c[ambient_dim - 1] = 1.0,
        GeometryTag::Euclidean => {}
    }
    ModelPoint::new(tag, c)
}

impl Isometry {
    pub fn identity(tag: GeometryTag, ambient_dim: usize) -> Self {
        Isometry {
            tag,
            matrix: DMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    pub fn tag(&self) -> GeometryTag {
        self.tag
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Maps a point and re-checks the model invariant on the image.
    pub fn apply(&self, p: &ModelPoint) -> Result<ModelPoint> {
        if p.tag() != self.tag || p.coords().len() != self.matrix.ncols() {
            return Err(invalid("isometry applied to a point of another space"));
        }
        let image = &self.matrix * p.coords();
        let q = ModelPoint::project(self.tag, image)?;
        let moved = (q.coords() - &self.matrix * p.coords()).amax();
        if moved >= MODEL_RESIDUAL * q.coords().amax().max(1.0) {
            return Err(invalid(format!("isometry image off the model by {moved:e}")));
        }
        Ok(q)
    }

    pub fn apply_vector(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.tag != other.tag || self.matrix.ncols() != other.matrix.nrows() {
            return Err(invalid("cannot compose isometries of different spaces"));
        }
        Ok(Isometry {
            tag: self.tag,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn inverse(&self) -> Isometry {
        let matrix = match self.tag {
            GeometryTag::Hyperbolic => {
                let n = self.matrix.nrows();
                let mut j = DMatrix::identity(n, n);
                j[(n - 1, n - 1)] = -1.0;
                &j * self.matrix.transpose() * &j
            }
            _ => self.matrix.transpose(),
        };
        Isometry { tag: self.tag, matrix }
    }
}

/// An isometry carrying `p` to the model's basepoint.
///
/// On the sphere this is the rotation in the plane of `p` and the south pole
/// `(0, ..., 0, -1)`; on the hyperboloid it is the boost along the spatial
/// direction of `p` that brings it to `(0, ..., 0, 1)`.
pub fn translate_to_basepoint(p: &ModelPoint) -> Result<Isometry> {
    let dim = p.coords().len();
    let x = p.coords();
    match p.tag() {
        GeometryTag::Euclidean => Err(invalid("translate_to_basepoint needs a spherical or hyperbolic point")),
        GeometryTag::Spherical => {
            let b = basepoint(GeometryTag::Spherical, dim)?.into_coords();
            let c = x.dot(&b).clamp(-1.0, 1.0);
            let perp = &b - x * c;
            let s = perp.norm();
            let mut m = DMatrix::identity(dim, dim);
            if s <= 1e-15 {
                if c > 0.0 {
                    return Ok(Isometry::identity(GeometryTag::Spherical, dim));
                }
                // p is the north pole: half-turn in the (x_0, x_last) plane.
                let mut e2 = DVector::zeros(dim);
                e2[0] = 1.0;
                m -= (x * x.transpose() + &e2 * e2.transpose()) * 2.0;
            } else {
                let e2 = perp / s;
                m += (x * x.transpose() + &e2 * e2.transpose()) * (c - 1.0)
                    + (&e2 * x.transpose() - x * e2.transpose()) * s;
            }
            Ok(Isometry {
                tag: GeometryTag::Spherical,
                matrix: m,
            })
        }
        GeometryTag::Hyperbolic => {
            let n = dim - 1;
            let spatial = x.rows(0, n).into_owned();
            let sinh = spatial.norm();
            let cosh = x[n];
            if sinh <= 1e-15 {
                return Ok(Isometry::identity(GeometryTag::Hyperbolic, dim));
            }
            let d = spatial / sinh;
            let mut m = DMatrix::identity(dim, dim);
            let outer = &d * d.transpose() * (cosh - 1.0);
            let mut block = m.view_mut((0, 0), (n, n));
            block += outer;
            for i in 0..n {
                m[(i, n)] = -sinh * d[i];
                m[(n, i)] = -sinh * d[i];
            }
            m[(n, n)] = cosh;
            Ok(Isometry {
                tag: GeometryTag::Hyperbolic,
                matrix: m,
            })
        }
    }
}
