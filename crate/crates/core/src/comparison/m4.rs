use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numeric::cofactor_matrix;
use crate::simplex::{compare, GramClass, GramMatrix, Order};
use crate::tolerance::TolerancePolicy;

/// Number of intervals in the sampled determinant path.
const PATH_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RigidityVerdict {
    Consistent,
    /// Two Euclidean Gram matrices with strictly ordered angles: the
    /// determinant path would have to dip below zero just before `t = 1`.
    TheoremViolationSuspected {
        f_prime_at_1: f64,
        class_1: String,
        class_2: String,
        pair: (usize, usize),
    },
}

/// Diagnostic for a pair of Gram matrices `g1, g2` with `f(t) = det((1-t) g1 + t g2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityReport {
    pub both_euclidean: bool,
    /// Every angle of the first is at most the matching angle of the second.
    pub dominated: bool,
    /// `both_euclidean && dominated`.
    pub premise_holds: bool,
    /// First pair whose angle grows by more than `angle_eps`.
    pub strict_pair: Option<(usize, usize)>,
    /// `sum_{i != j} (g2_ij - g1_ij) c_ij(g2)`.
    pub f_prime_at_1: f64,
    /// `(t, f(t))` on an even grid of `[0, 1]`.
    pub f_samples: Vec<(f64, f64)>,
    pub verdict: RigidityVerdict,
}

/// Tests whether two Gram matrices could both be Euclidean with the angles
/// of the first entrywise below those of the second.
///
/// If they were, every cofactor of `g2` would be positive, so `f'(1) > 0`
/// while `f(1) = 0`, making `f` negative just below 1. A convex combination
/// of positive semidefinite matrices cannot have a negative determinant, so
/// honest inputs never produce [`RigidityVerdict::TheoremViolationSuspected`].
pub fn m4_rigidity_witness(g1: &GramMatrix, g2: &GramMatrix, tol: &TolerancePolicy) -> Result<RigidityReport> {
    if g1.size() != g2.size() {
        return Err(invalid(format!(
            "Gram matrices have different sizes {} and {}",
            g1.size(),
            g2.size()
        )));
    }
    let class_1 = g1.classify(tol);
    let class_2 = g2.classify(tol);
    let both_euclidean = class_1 == GramClass::Euclidean && class_2 == GramClass::Euclidean;
    let a1 = g1.dihedral_angles();
    let a2 = g2.dihedral_angles();
    let relation = compare(&a1, &a2, tol)?;
    let dominated = matches!(relation.order, Order::Equal | Order::StrictlyLess);
    let strict_pair = if relation.order == Order::StrictlyLess {
        relation
            .margins
            .iter()
            .find(|m| m.margin > tol.angle_eps)
            .map(|m| (m.i, m.j))
    } else {
        None
    };

    let m1 = g1.matrix().entries();
    let m2 = g2.matrix().entries();
    let f_prime_at_1 = cofactor_matrix(m2).component_mul(&(m2 - m1)).sum();
    let f_samples = (0..=PATH_SAMPLES)
        .map(|k| {
            let t = k as f64 / PATH_SAMPLES as f64;
            (t, (m1 * (1.0 - t) + m2 * t).determinant())
        })
        .collect();

    let premise_holds = both_euclidean && dominated;
    let verdict = match (premise_holds, strict_pair) {
        (true, Some(pair)) => RigidityVerdict::TheoremViolationSuspected {
            f_prime_at_1,
            class_1: class_1.name().to_string(),
            class_2: class_2.name().to_string(),
            pair,
        },
        _ => RigidityVerdict::Consistent,
    };
    Ok(RigidityReport {
        both_euclidean,
        dominated,
        premise_holds,
        strict_pair,
        f_prime_at_1,
        f_samples,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regular() -> GramMatrix {
        GramMatrix::from_rows(&[
            vec![1.0, -0.5, -0.5],
            vec![-0.5, 1.0, -0.5],
            vec![-0.5, -0.5, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn identical_inputs_are_consistent() {
        let tol = TolerancePolicy::default();
        let g = regular();
        let r = m4_rigidity_witness(&g, &g, &tol).unwrap();
        assert!(r.premise_holds);
        assert_eq!(r.strict_pair, None);
        assert_eq!(r.verdict, RigidityVerdict::Consistent);
        assert!(r.f_prime_at_1.abs() < 1e-15);
    }

    #[test]
    fn raising_one_entry_leaves_euclidean() {
        let tol = TolerancePolicy::default();
        let g1 = regular();
        let mut rows = g1.to_rows();
        rows[0][1] += 0.05;
        rows[1][0] += 0.05;
        let g2 = GramMatrix::from_rows(&rows).unwrap();
        let r = m4_rigidity_witness(&g1, &g2, &tol).unwrap();
        assert!(r.dominated);
        assert_eq!(r.strict_pair, Some((0, 1)));
        assert!(!r.both_euclidean);
        assert_eq!(r.verdict, RigidityVerdict::Consistent);
        // Only the (0, 1) pair moved, so f'(1) = 2 * 0.05 * c_01(g2) with
        // c_01 = -(g01 - g02 g12) = 0.45 + 0.25.
        assert!((r.f_prime_at_1 - 0.1 * 0.7).abs() < 1e-14);
        assert_eq!(r.f_samples.len(), 11);
        assert!(r.f_samples[0].1.abs() < 1e-12);
    }

    #[test]
    fn size_mismatch() {
        let tol = TolerancePolicy::default();
        let g4 = GramMatrix::from_matrix(nalgebra::DMatrix::identity(4, 4)).unwrap();
        assert!(m4_rigidity_witness(&regular(), &g4, &tol).is_err());
    }
}
