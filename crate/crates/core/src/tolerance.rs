//! Numerical tolerances used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Environment variable that overrides [`TolerancePolicy::eq_zero`].
pub const TOLERANCE_ENV: &str = "SIMPLEX_ORDER_TOL";

/// Thresholds for "equal to zero", "strictly positive" and "same angle".
///
/// `eq_zero` is relative to the scale of the object it is applied to (for
/// matrices, the largest absolute entry). `strict_margin` is the absolute
/// amount by which a quantity must exceed zero to count as positive, and
/// `angle_eps` is the tie band for dihedral angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub eq_zero: f64,
    pub strict_margin: f64,
    pub angle_eps: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            eq_zero: 1e-9,
            strict_margin: 1e-12,
            angle_eps: 1e-10,
        }
    }
}

impl TolerancePolicy {
    pub fn new(eq_zero: f64, strict_margin: f64, angle_eps: f64) -> Result<Self> {
        let policy = TolerancePolicy {
            eq_zero,
            strict_margin,
            angle_eps,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.eq_zero, self.strict_margin, self.angle_eps];
        if all.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(invalid(format!("tolerances must be positive and finite: {self:?}")));
        }
        if self.eq_zero <= self.strict_margin {
            return Err(invalid(format!(
                "eq_zero ({}) must exceed strict_margin ({})",
                self.eq_zero, self.strict_margin
            )));
        }
        Ok(())
    }

    pub fn with_eq_zero(self, eq_zero: f64) -> Result<Self> {
        TolerancePolicy::new(eq_zero, self.strict_margin, self.angle_eps)
    }

    /// Default policy, with `eq_zero` taken from `SIMPLEX_ORDER_TOL` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(raw) => {
                let value: f64 = raw.trim().parse().map_err(|_| {
                    invalid(format!("{TOLERANCE_ENV}={raw:?} is not a decimal number"))
                })?;
                TolerancePolicy::default().with_eq_zero(value)
            }
            Err(_) => Ok(TolerancePolicy::default()),
        }
    }
}
