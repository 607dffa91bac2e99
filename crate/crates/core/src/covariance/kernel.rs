//! Smoothing kernels for the distance-weighted variance estimator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kernel shape applied to the normalized distance `z = d / (b + 1)`.
///
/// All three are symmetric, equal 1 at the origin, and vanish for `|z| > 1`,
/// so cross-products beyond distance `b + 1` never contribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// Indicator of `|z| <= 1`.
    Truncated,
    /// Triangular taper `1 - |z|`.
    Bartlett,
    /// Piecewise cubic: `1 - 6z^2 + 6|z|^3` up to `|z| = 1/2`, then
    /// `2(1 - |z|)^3` up to 1.
    Parzen,
}

impl Kernel {
    /// Evaluate the kernel at `z`. Infinite `z` maps to 0 so that
    /// unreachable node pairs drop out without arithmetic on the sentinel.
    pub fn eval(self, z: f64) -> f64 {
        if z.is_infinite() {
            return 0.0;
        }
        let a = z.abs();
        if a > 1.0 {
            return 0.0;
        }
        match self {
            Kernel::Truncated => 1.0,
            Kernel::Bartlett => 1.0 - a,
            Kernel::Parzen => {
                if a <= 0.5 {
                    1.0 - 6.0 * a * a + 6.0 * a * a * a
                } else {
                    2.0 * (1.0 - a).powi(3)
                }
            }
        }
    }

    /// Parse a kernel name as used in configuration and on the command line.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "truncated" => Ok(Kernel::Truncated),
            "bartlett" => Ok(Kernel::Bartlett),
            "parzen" => Ok(Kernel::Parzen),
            other => Err(Error::InvalidParameter {
                name: "kernel",
                reason: format!(
                    "unknown kernel {other:?}; expected truncated, bartlett, or parzen"
                ),
            }),
        }
    }

    /// Canonical lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            Kernel::Truncated => "truncated",
            Kernel::Bartlett => "bartlett",
            Kernel::Parzen => "parzen",
        }
    }
}
