use crate::error::{invalid, Result};
use crate::geometry::{GeometryTag, ModelPoint};

use super::simplex::Simplex;

/// The polar simplex: vertex `i` is the outward unit normal of the facet
/// opposite vertex `i`, so vertex distances are `π` minus the dihedral
/// angles of the input.
pub fn spherical_dual(s: &Simplex) -> Result<Simplex> {
    if s.tag() != GeometryTag::Spherical {
        return Err(invalid(format!("the dual is defined for spherical simplexes, got {}", s.tag())));
    }
    let normals = s.facet_normals()?;
    let vertices = normals
        .normals
        .into_iter()
        .map(|n| ModelPoint::project(GeometryTag::Spherical, -n))
        .collect::<Result<Vec<_>>>()?;
    Simplex::new(GeometryTag::Spherical, vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::distance;
    use std::f64::consts::PI;

    #[test]
    fn orthant_dual_is_negated_orthant() {
        let s = Simplex::from_coords(
            GeometryTag::Spherical,
            &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        )
        .unwrap();
        let d = spherical_dual(&s).unwrap();
        for i in 0..3 {
            assert_eq!(d.vertex(i).coords()[i], -1.0);
        }
    }

    #[test]
    fn distance_law_and_involution() {
        let s = Simplex::from_coords(
            GeometryTag::Spherical,
            &[
                vec![0.1, 0.2, -0.97],
                vec![0.5, -0.1, -0.86],
                vec![-0.3, 0.4, -0.87],
            ]
            .iter()
            .map(|v| {
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter().map(|x| x / n).collect()
            })
            .collect::<Vec<Vec<f64>>>(),
        )
        .unwrap();
        let angles = s.dihedral_angles().unwrap();
        let d = spherical_dual(&s).unwrap();
        for (i, j) in angles.pairs() {
            let dist = distance(d.vertex(i), d.vertex(j)).unwrap();
            assert!((dist - (PI - angles.get(i, j))).abs() < 1e-9);
        }
        let dd = spherical_dual(&d).unwrap();
        assert!(dd.gram().unwrap().max_abs_diff(&s.gram().unwrap()) < 1e-8);
        for i in 0..3 {
            assert!((dd.vertex(i).coords() - s.vertex(i).coords()).amax() < 1e-12);
        }
    }

    #[test]
    fn rejects_other_geometries() {
        let e = Simplex::from_coords(
            GeometryTag::Euclidean,
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert!(spherical_dual(&e).is_err());
    }
}
