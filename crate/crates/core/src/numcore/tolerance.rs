use crate::error::{Error, Result};

pub const DEFAULT_RANK_RTOL: f64 = 1e-10;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;

/// Rank cutoff and residual acceptance threshold, both relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rank_rtol: f64,
    pub residual_tol: f64,
}

impl Tolerance {
    pub fn new(rank_rtol: f64, residual_tol: f64) -> Result<Self> {
        for (name, v) in [("rank_rtol", rank_rtol), ("residual_tol", residual_tol)] {
            if !(v.is_finite() && v > 0.0 && v <= 1e-3) {
                return Err(Error::InvalidTolerance(format!("{name} = {v} must lie in (0, 1e-3]")));
            }
        }
        Ok(Self {
            rank_rtol,
            residual_tol,
        })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rtol: DEFAULT_RANK_RTOL,
            residual_tol: DEFAULT_RESIDUAL_TOL,
        }
    }
}
