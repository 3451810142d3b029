use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::tolerance::TolerancePolicy;

use super::gram::DihedralAngles;

/// Outcome of comparing two labelled angle tables entrywise.
///
/// A non-strict `≤` that is not `Equal` cannot occur under a single
/// tolerance: if no entry is below by more than `angle_eps` and none above,
/// all entries agree to `angle_eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Equal,
    StrictlyLess,
    StrictlyGreater,
    Incomparable,
}

impl Order {
    pub fn name(self) -> &'static str {
        match self {
            Order::Equal => "equal",
            Order::StrictlyLess => "strictly_less",
            Order::StrictlyGreater => "strictly_greater",
            Order::Incomparable => "incomparable",
        }
    }

    pub fn reversed(self) -> Order {
        match self {
            Order::StrictlyLess => Order::StrictlyGreater,
            Order::StrictlyGreater => Order::StrictlyLess,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMargin {
    pub i: usize,
    pub j: usize,
    /// `b_ij - a_ij`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderRelation {
    pub order: Order,
    pub margins: Vec<PairMargin>,
    /// Smallest `b_ij - a_ij`.
    pub min_difference: f64,
    /// Largest `b_ij - a_ij`.
    pub max_difference: f64,
}

impl OrderRelation {
    /// Margin by which the order holds: the smallest `|b_ij - a_ij|` for a
    /// strict order, zero otherwise.
    pub fn strict_margin(&self) -> f64 {
        match self.order {
            Order::StrictlyLess => self.min_difference,
            Order::StrictlyGreater => -self.max_difference,
            _ => 0.0,
        }
    }

    /// `true` when every pair is strictly ordered the same way by more than
    /// `eps`, which is stronger than the strict order.
    pub fn all_pairs_strict(&self, eps: f64) -> bool {
        match self.order {
            Order::StrictlyLess => self.min_difference > eps,
            Order::StrictlyGreater => self.max_difference < -eps,
            _ => false,
        }
    }
}

/// Compares `a` with `b` entrywise, with `angle_eps` as the equality band.
pub fn compare(a: &DihedralAngles, b: &DihedralAngles, tol: &TolerancePolicy) -> Result<OrderRelation> {
    if a.size() != b.size() {
        return Err(invalid(format!(
            "cannot compare a {}-simplex with a {}-simplex",
            a.size() - 1,
            b.size() - 1
        )));
    }
    let eps = tol.angle_eps;
    let margins: Vec<PairMargin> = a
        .pairs()
        .map(|(i, j)| PairMargin {
            i,
            j,
            margin: b.get(i, j) - a.get(i, j),
        })
        .collect();
    let min_difference = margins.iter().map(|m| m.margin).fold(f64::INFINITY, f64::min);
    let max_difference = margins.iter().map(|m| m.margin).fold(f64::NEG_INFINITY, f64::max);
    let order = if min_difference >= -eps && max_difference <= eps {
        Order::Equal
    } else if min_difference >= -eps && max_difference > eps {
        Order::StrictlyLess
    } else if max_difference <= eps && min_difference < -eps {
        Order::StrictlyGreater
    } else {
        Order::Incomparable
    };
    Ok(OrderRelation {
        order,
        margins,
        min_difference,
        max_difference,
    })
}
