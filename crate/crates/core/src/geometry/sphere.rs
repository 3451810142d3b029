//! Spherical trigonometry used by the dual-extension construction.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

use super::point::{GeometryTag, ModelPoint};

/// Walks along the great circle from `s` through `v`, starting at `v` and
/// moving away from `s` by arclength `t` (negative `t` moves back toward
/// `s`). `t` ranges over `[-d(s, v), pi - d(s, v)]`, the far end being `-s`.
pub fn spherical_ray_extend(s: &ModelPoint, v: &ModelPoint, t: f64) -> Result<ModelPoint> {
    if s.tag() != GeometryTag::Spherical || v.tag() != GeometryTag::Spherical {
        return Err(invalid("spherical_ray_extend needs spherical points"));
    }
    if s.coords().len() != v.coords().len() {
        return Err(invalid("points have different dimensions"));
    }
    let c = s.coords().dot(v.coords());
    let tangent = v.coords() - s.coords() * c;
    let sin_d = tangent.norm();
    if sin_d <= 1e-12 {
        return Err(Error::DegenerateRay);
    }
    let d = sin_d.atan2(c);
    if !t.is_finite() || t < -d - 1e-12 || t > PI - d + 1e-12 {
        return Err(invalid(format!("extension {t} outside [{}, {}]", -d, PI - d)));
    }
    let angle = d + t;
    let e = tangent / sin_d;
    ModelPoint::project(GeometryTag::Spherical, s.coords() * angle.cos() + e * angle.sin())
}

/// Third side `z` of a spherical triangle with sides `x`, `y` enclosing the
/// angle `c`, from the spherical law of cosines.
pub fn spherical_third_side(x: f64, y: f64, c: f64) -> f64 {
    (x.cos() * y.cos() + x.sin() * y.sin() * c.cos()).clamp(-1.0, 1.0).acos()
}

/// Rate `z'(t)` at which the third side grows when both enclosing sides grow
/// at rate `g` with the angle `c` held fixed:
///
/// ```text
/// z' sin z = g (1 - cos c) sin(x + y)
/// ```
///
/// Positive whenever `x + y < pi` and `c > 0`.
pub fn extension_growth_rate(x: f64, y: f64, c: f64, g: f64) -> Result<f64> {
    if !(x > 0.0 && x < PI && y > 0.0 && y < PI) {
        return Err(invalid(format!("sides ({x}, {y}) must lie in (0, pi)")));
    }
    if !(c >= 0.0 && c <= PI) {
        return Err(invalid(format!("angle {c} must lie in [0, pi]")));
    }
    if x + y >= PI {
        return Err(Error::PreconditionViolated(format!(
            "x + y = {} is not below pi",
            x + y
        )));
    }
    let numerator = g * (1.0 - c.cos()) * (x + y).sin();
    if numerator == 0.0 {
        return Ok(0.0);
    }
    Ok(numerator / spherical_third_side(x, y, c).sin())
}

/// A spherical triangle given by two sides, the enclosed angle, and the
/// derived opposite side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSides {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub c: f64,
}

impl TriangleSides {
    pub fn from_two_sides(x: f64, y: f64, c: f64) -> Result<Self> {
        if !(x > 0.0 && x < PI && y > 0.0 && y < PI && c > 0.0 && c <= PI) {
            return Err(invalid(format!("invalid spherical triangle data ({x}, {y}, {c})")));
        }
        Ok(TriangleSides {
            x,
            y,
            z: spherical_third_side(x, y, c),
            c,
        })
    }

    /// The triangle after both enclosing sides grew by `g * t`.
    pub fn extended(&self, g: f64, t: f64) -> Result<Self> {
        TriangleSides::from_two_sides(self.x + g * t, self.y + g * t, self.c)
    }

    pub fn growth_rate(&self, g: f64) -> Result<f64> {
        extension_growth_rate(self.x, self.y, self.c, g)
    }
}
