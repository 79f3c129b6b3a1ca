//! Nitsche-type feasibility bound for the radial minimizer.
//!
//! For `lambda != 1` the radial construction needs
//! `r <= (R^k + sqrt(R^(2k) - 1))^((a/b)/k)` with `k = |lambda - 1|`.
//! For `lambda = 1` there is no restriction.

use crate::error::{Error, Result};
use crate::math;
use crate::types::{Config, EnergyParams};

/// Relative slack, in ulps of the bound, under which `r` still counts as
/// sitting on the boundary `r = bound`.
const BOUNDARY_ULPS: f64 = 8.0;

/// `ln(R^k + sqrt(R^(2k) - 1)) = acosh(R^k)`, evaluated without forming `R^k`.
pub(crate) fn log_acosh_power(target_radius: f64, k: f64) -> f64 {
    let u = k * math::ln(target_radius);
    u + math::ln_1p(math::sqrt(-math::expm1(-2.0 * u)))
}

/// Largest admissible domain radius `r` for the given target radius.
/// Returns `+inf` on the `lambda = 1` branch.
#[allow(non_snake_case)]
pub fn nitsche_bound(R: f64, params: &EnergyParams) -> Result<f64> {
    if !R.is_finite() {
        return Err(Error::NonFinite { name: "R" });
    }
    if R <= 1.0 {
        return Err(Error::DegenerateAnnulus { radius: R });
    }
    #[allow(clippy::float_cmp)]
    if params.lambda == 1.0 {
        return Ok(f64::INFINITY);
    }
    let k = (params.lambda - 1.0).abs();
    let exponent = params.weight_ratio() / k;
    Ok(math::exp(exponent * log_acosh_power(R, k)))
}

/// Outcome of the feasibility test.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Feasibility {
    pub feasible: bool,
    pub bound: f64,
    pub r: f64,
    /// `bound - r`; negative when infeasible.
    pub margin: f64,
}

/// Whether the radial extremal map exists for this configuration.
///
/// `r = bound` counts as feasible; an `r` within a few ulps of the bound is
/// treated as lying on it.
pub fn is_feasible(config: &Config) -> Feasibility {
    let r = config.r();
    let bound =
        nitsche_bound(config.R(), &config.params()).expect("validated configuration has R > 1");
    let feasible = r <= bound || r <= bound * (1.0 + BOUNDARY_ULPS * f64::EPSILON);
    Feasibility {
        feasible,
        bound,
        r,
        margin: bound - r,
    }
}

/// Like [`is_feasible`] but returns [`Error::Infeasible`] when the test fails.
pub fn require_feasible(config: &Config) -> Result<Feasibility> {
    let report = is_feasible(config);
    if report.feasible {
        Ok(report)
    } else {
        Err(Error::Infeasible {
            r: report.r,
            bound: report.bound,
        })
    }
}
