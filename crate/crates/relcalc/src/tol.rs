//! Tolerance policy shared by every rank and containment decision.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToleranceError {
    #[error("{name} must lie in (0, 1e-2), got {value}")]
    OutOfRange { name: &'static str, value: f64 },
}

/// The two knobs every numerical decision in the crate reduces to:
/// `rank_rel_tol` truncates singular values relative to the largest one,
/// `angle_tol` (radians) bounds principal angles for containment tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub rank_rel_tol: f64,
    pub angle_tol: f64,
}

impl TolerancePolicy {
    pub const DEFAULT_RANK_REL_TOL: f64 = 1e-10;
    pub const DEFAULT_ANGLE_TOL: f64 = 1e-8;

    pub fn new(rank_rel_tol: f64, angle_tol: f64) -> Result<Self, ToleranceError> {
        for (name, value) in [("rank_rel_tol", rank_rel_tol), ("angle_tol", angle_tol)] {
            if !(value > 0.0 && value < 1e-2) {
                return Err(ToleranceError::OutOfRange { name, value });
            }
        }
        Ok(Self {
            rank_rel_tol,
            angle_tol,
        })
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_rel_tol: Self::DEFAULT_RANK_REL_TOL,
            angle_tol: Self::DEFAULT_ANGLE_TOL,
        }
    }
}
