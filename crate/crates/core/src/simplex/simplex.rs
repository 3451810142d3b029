use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::geometry::{ambient_inner, GeometryTag, ModelPoint};
use crate::tolerance::TolerancePolicy;

use super::gram::GramMatrix;

/// Largest simplex dimension supported.
pub const MAX_DIMENSION: usize = 7;

/// A geodesic `n`-simplex with labelled vertices `z_1, ..., z_{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    tag: GeometryTag,
    vertices: Vec<ModelPoint>,
}

/// Inward unit normals of the facets; `normals[i]` belongs to the facet
/// opposite vertex `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetNormals {
    pub tag: GeometryTag,
    pub normals: Vec<DVector<f64>>,
}

impl FacetNormals {
    pub fn gram_matrix(&self) -> Result<GramMatrix> {
        let k = self.normals.len();
        let m = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                1.0
            } else {
                ambient_inner(self.tag, &self.normals[i], &self.normals[j])
            }
        });
        GramMatrix::from_matrix(m)
    }
}

impl Simplex {
    pub fn new(tag: GeometryTag, vertices: Vec<ModelPoint>) -> Result<Self> {
        Simplex::with_tolerance(tag, vertices, &TolerancePolicy::default())
    }

    /// Builds a simplex, rejecting it when its vertices lie (to
    /// `tol.eq_zero`) in a totally geodesic hypersurface.
    pub fn with_tolerance(tag: GeometryTag, vertices: Vec<ModelPoint>, tol: &TolerancePolicy) -> Result<Self> {
        let count = vertices.len();
        if count < 3 || count > MAX_DIMENSION + 1 {
            return Err(invalid(format!(
                "a simplex needs between 3 and {} vertices, got {count}",
                MAX_DIMENSION + 1
            )));
        }
        let n = count - 1;
        for (i, v) in vertices.iter().enumerate() {
            if v.tag() != tag {
                return Err(invalid(format!("vertex {i} is {}, expected {tag}", v.tag())));
            }
            if v.coords().len() != tag.ambient_dim(n) {
                return Err(invalid(format!(
                    "vertex {i} has {} coordinates, expected {} for a {tag} {n}-simplex",
                    v.coords().len(),
                    tag.ambient_dim(n)
                )));
            }
        }
        let simplex = Simplex { tag, vertices };
        let residual = simplex.nondegeneracy_residual();
        if !(residual > tol.eq_zero) {
            return Err(Error::DegenerateSimplex(format!(
                "vertices lie in a totally geodesic hypersurface (residual {residual:e})"
            )));
        }
        Ok(simplex)
    }

    pub fn from_coords(tag: GeometryTag, rows: &[Vec<f64>]) -> Result<Self> {
        let vertices = rows
            .iter()
            .map(|r| ModelPoint::new(tag, DVector::from_vec(r.clone())))
            .collect::<Result<Vec<_>>>()?;
        Simplex::new(tag, vertices)
    }

    pub fn tag(&self) -> GeometryTag {
        self.tag
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[ModelPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &ModelPoint {
        &self.vertices[i]
    }

    pub fn vertex_rows(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.coords().iter().copied().collect()).collect()
    }

    /// Coordinate matrix used for the rank test: vertices as columns for
    /// `S^n`/`H^n`, edge vectors `z_j - z_1` for `E^n`.
    fn rank_matrix(&self) -> DMatrix<f64> {
        match self.tag {
            GeometryTag::Euclidean => {
                let z0 = self.vertices[0].coords();
                let cols: Vec<_> = self.vertices[1..].iter().map(|v| v.coords() - z0).collect();
                DMatrix::from_columns(&cols)
            }
            _ => {
                let cols: Vec<_> = self.vertices.iter().map(|v| v.coords().clone()).collect();
                DMatrix::from_columns(&cols)
            }
        }
    }

    /// Ratio of smallest to largest singular value of the rank matrix; zero
    /// for a degenerate simplex.
    pub fn nondegeneracy_residual(&self) -> f64 {
        let sv = self.rank_matrix().singular_values();
        let max = sv.max();
        if max > 0.0 {
            sv.min() / max
        } else {
            0.0
        }
    }

    /// Inward unit facet normals.
    ///
    /// For `S^n` and `H^n` the normal of facet `i` is orthogonal, under the
    /// ambient form, to every vertex except `z_i`, oriented so that
    /// `<n_i, z_i> > 0`. For `E^n` it is orthogonal to the facet's edges and
    /// points from the facet toward `z_i`.
    pub fn facet_normals(&self) -> Result<FacetNormals> {
        let k = self.vertices.len();
        let normals = match self.tag {
            GeometryTag::Euclidean => {
                let n = k - 1;
                let m = DMatrix::from_fn(k, k, |r, c| {
                    if r < n {
                        self.vertices[c].coords()[r]
                    } else {
                        1.0
                    }
                });
                let inv = m
                    .try_inverse()
                    .ok_or_else(|| Error::DegenerateSimplex("affine vertex matrix is singular".into()))?;
                (0..k)
                    .map(|i| {
                        let a = inv.row(i).columns(0, n).transpose();
                        let norm = a.norm();
                        a / norm
                    })
                    .collect()
            }
            GeometryTag::Spherical | GeometryTag::Hyperbolic => {
                let z = DMatrix::from_columns(&self.vertices.iter().map(|v| v.coords().clone()).collect::<Vec<_>>());
                let dual = z
                    .try_inverse()
                    .ok_or_else(|| Error::DegenerateSimplex("vertex matrix is singular".into()))?;
                let mut normals = Vec::with_capacity(k);
                for i in 0..k {
                    let mut d = dual.row(i).transpose();
                    if self.tag == GeometryTag::Hyperbolic {
                        d[k - 1] = -d[k - 1];
                    }
                    let q = ambient_inner(self.tag, &d, &d);
                    if !(q > 0.0) {
                        return Err(Error::DegenerateSimplex(format!(
                            "facet {i} has no space-like normal"
                        )));
                    }
                    normals.push(d / q.sqrt());
                }
                normals
            }
        };
        Ok(FacetNormals {
            tag: self.tag,
            normals,
        })
    }

    /// Gram matrix `G_ij = <n_i, n_j>` of the inward unit normals, which
    /// equals `-cos` of the dihedral angle between facets `i` and `j`.
    pub fn gram(&self) -> Result<GramMatrix> {
        self.facet_normals()?.gram_matrix()
    }

    pub fn dihedral_angles(&self) -> Result<super::DihedralAngles> {
        Ok(self.gram()?.dihedral_angles())
    }

    /// Relabels vertices: vertex `i` of the result is vertex `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.vertices.len() {
            return Err(invalid("permutation length does not match vertex count"));
        }
        Simplex::new(self.tag, perm.iter().map(|&i| self.vertices[i].clone()).collect())
    }
}
