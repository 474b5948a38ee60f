//! The single tolerance record threaded through every module.
//!
//! All eigenvalue comparisons are made against a relative band
//! `tau_rel = tau_abs * (1 + scale)` where `scale` is the spectral norm of
//! the matrix at hand. Exact arithmetic in the underlying statements becomes
//! a band of width `tau_rel` here.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Absolute base tolerance used when none is supplied.
pub const DEFAULT_ABS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute floor `tau_abs`.
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            abs: DEFAULT_ABS_TOL,
        }
    }
}

impl Tolerances {
    pub fn new(abs: f64) -> Result<Self> {
        let positive = abs > 0.0;
        if !positive || !abs.is_finite() {
            return Err(Error::InvalidTolerance {
                reason: format!("tau_abs must be a positive finite number, got {abs}"),
            });
        }
        Ok(Tolerances { abs })
    }

    /// Relative band `tau_abs * (1 + scale)`.
    pub fn rel(&self, scale: f64) -> f64 {
        self.abs * (1.0 + scale.abs())
    }
}
