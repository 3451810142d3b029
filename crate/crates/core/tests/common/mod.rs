//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut impl Rng, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| StandardNormal.sample(rng));
        let n: f64 = v.norm();
        if n > 1e-3 {
            return v / n;
        }
    }
}

/// Determinant by Laplace expansion along the first row.
pub fn laplace_det(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    match n {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => (0..n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[(0, j)] * laplace_det(&m.clone().remove_row(0).remove_column(j))
            })
            .sum(),
    }
}

/// Signed minor by explicit deletion and Laplace expansion.
pub fn laplace_cofactor(m: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
    sign * laplace_det(&m.clone().remove_row(i).remove_column(j))
}

/// `max_{|w|=1} min_i <w, u_i>` estimated from `samples` random directions
/// followed by a shrinking pattern search around the best one.
pub fn sampled_hemisphere_margin(points: &[DVector<f64>], samples: usize, seed: u64) -> f64 {
    let dim = points[0].len();
    let score = |w: &DVector<f64>| points.iter().map(|u| u.dot(w)).fold(f64::INFINITY, f64::min);
    let mut r = rng(seed);
    let mut best = unit_vector(&mut r, dim);
    let mut best_score = score(&best);
    for _ in 0..samples {
        let w = unit_vector(&mut r, dim);
        let s = score(&w);
        if s > best_score {
            best = w;
            best_score = s;
        }
    }
    let mut step = 0.05;
    while step > 1e-13 {
        let mut improved = false;
        for k in 0..dim {
            for sign in [1.0, -1.0] {
                let mut w = best.clone();
                w[k] += sign * step;
                let w = w.normalize();
                let s = score(&w);
                if s > best_score {
                    best = w;
                    best_score = s;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best_score
}

/// Smallest enclosing cap radius of points on `S^2` by enumeration: the
/// optimal cap is spanned by two points (as a diameter) or passes through
/// three, so the smallest candidate cap containing every point wins.
pub fn enumerated_min_cap_radius(points: &[DVector<f64>]) -> f64 {
    let covers = |c: &DVector<f64>, r: f64| points.iter().all(|p| p.dot(c).clamp(-1.0, 1.0).acos() <= r + 1e-12);
    let mut best = f64::INFINITY;
    let mut consider = |c: DVector<f64>| {
        let r = points.iter().map(|p| p.dot(&c).clamp(-1.0, 1.0).acos()).fold(0.0, f64::max);
        if r < best && covers(&c, r) {
            best = r;
        }
    };
    let n = points.len();
    if n == 1 {
        return 0.0;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let m = &points[i] + &points[j];
            if m.norm() > 1e-12 {
                consider(m.normalize());
            }
            for k in (j + 1)..n {
                // Equidistant from all three: normal of the plane through them.
                let c = (&points[j] - &points[i]).cross(&(&points[k] - &points[i]));
                if c.norm() > 1e-12 {
                    let c = c.normalize();
                    let c = if c.dot(&points[i]) < 0.0 { -c } else { c };
                    consider(c);
                }
            }
        }
    }
    best
}

/// Smallest enclosing cap radius on `S^2` from a latitude/longitude grid of
/// candidate centers; an upper bound within the grid spacing.
pub fn grid_min_cap_radius(points: &[DVector<f64>], steps: usize) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..steps {
        let theta = PI * (a as f64 + 0.5) / steps as f64;
        for b in 0..2 * steps {
            let phi = PI * b as f64 / steps as f64;
            let c = DVector::from_vec(vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]);
            let r = points.iter().map(|p| p.dot(&c).clamp(-1.0, 1.0).acos()).fold(0.0, f64::max);
            best = best.min(r);
        }
    }
    best
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            ((1.0 - x) / 2.0, w / 2.0)
        })
        .collect()
}

/// Hyperbolic area of the triangle with the given Klein-model vertices,
/// integrating the area density `(1 - |k|^2)^{-3/2}` over the (Euclidean)
/// triangle with a collapsed-square Gauss–Legendre rule.
pub fn klein_triangle_area(k: &[DVector<f64>; 3], order: usize) -> f64 {
    let rule = gauss_legendre(order);
    let e1 = &k[1] - &k[0];
    let e2 = &k[2] - &k[0];
    let jac = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
    let mut total = 0.0;
    for &(u, wu) in &rule {
        for &(v, wv) in &rule {
            // (u, v) in the square maps to (u, (1 - u) v) in the unit triangle.
            let p = &k[0] + &e1 * u + &e2 * ((1.0 - u) * v);
            let density = (1.0 - p.norm_squared()).powf(-1.5);
            total += wu * wv * (1.0 - u) * density;
        }
    }
    total * jac
}

/// Central difference of `f` at `x`.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Five-point central difference of `f` at `x`.
pub fn five_point_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}
