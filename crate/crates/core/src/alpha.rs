//! The first-integral constant `alpha` of the extremal map.
//!
//! For `lambda != 1` the domain radius produced by a given `alpha` is
//!
//! ```text
//! phi(alpha) = [ R^(lambda-1) (1 + sqrt(1 + alpha/b^2))
//!                / (1 + sqrt(1 + R^(2 lambda - 2) alpha/b^2)) ]^((a/b)/(lambda-1))
//! ```
//!
//! which is strictly decreasing on `[alpha_min, inf)` and tends to 1, so
//! `phi(alpha) = r` is solved by bisection. For `lambda = 1` the constant is
//! explicit: `alpha = a^2 (ln R / ln r)^2 - b^2`.

use crate::error::{Error, Result};
use crate::math;
use crate::nitsche::require_feasible;
use crate::types::{Config, EnergyParams};

/// Radicands in `[-RADICAND_CLAMP, 0)` are rounding noise and are set to 0.
pub(crate) const RADICAND_CLAMP: f64 = 1e-14;

/// `lambda` closer than this to 1 (but not equal) is refused.
pub(crate) const NEAR_ONE: f64 = 1e-9;

pub(crate) fn check_lambda(params: &EnergyParams) -> Result<()> {
    #[allow(clippy::float_cmp)]
    if params.lambda == 1.0 {
        return Err(Error::LambdaOne);
    }
    if (params.lambda - 1.0).abs() < NEAR_ONE {
        return Err(Error::NearLambdaOne {
            lambda: params.lambda,
        });
    }
    Ok(())
}

/// Smallest admissible `alpha`: `-b^2 / R^(2(lambda-1))` for `lambda > 1`,
/// `-b^2` otherwise.
#[allow(non_snake_case)]
pub fn alpha_min(R: f64, b: f64, lambda: f64) -> f64 {
    if lambda > 1.0 {
        -b * b * math::exp(-2.0 * (lambda - 1.0) * math::ln(R))
    } else {
        -b * b
    }
}

fn clamp_radicand(v: f64, alpha: f64, alpha_min: f64) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v >= -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::OutOfDomain { alpha, alpha_min })
    }
}

/// `1 + s^(2 lambda - 2) alpha / b^2`, with the product fused so that the
/// radicand keeps its precision as it approaches 0.
pub(crate) fn radicand(alpha: f64, s: f64, params: &EnergyParams) -> f64 {
    let b2 = params.tangential_weight * params.tangential_weight;
    let scale = math::exp((2.0 * params.lambda - 2.0) * math::ln(s));
    math::fma(scale, alpha / b2, 1.0)
}

/// `ln t` of the extremal trajectory at modulus `y`, i.e. the inverse of the
/// closed-form profile: `phi` with `R` replaced by `y`.
pub(crate) fn log_radius_at(alpha: f64, y: f64, params: &EnergyParams) -> Result<f64> {
    let amin = alpha_min(y.max(1.0), params.tangential_weight, params.lambda);
    let b2 = params.tangential_weight * params.tangential_weight;
    // The radicand that can vanish is written as a multiple of alpha - alpha_min,
    // which is exact at the boundary.
    let (inner, outer) = if params.lambda > 1.0 {
        let scale = math::exp((2.0 * params.lambda - 2.0) * math::ln(y));
        (radicand(alpha, 1.0, params), scale * (alpha - amin) / b2)
    } else {
        ((alpha + b2) / b2, radicand(alpha, y, params))
    };
    let inner = clamp_radicand(inner, alpha, amin)?;
    let outer = clamp_radicand(outer, alpha, amin)?;
    let lm1 = params.lambda - 1.0;
    let log_ratio = math::ln_1p(math::sqrt(inner)) - math::ln_1p(math::sqrt(outer));
    Ok(params.weight_ratio() * (math::ln(y) + log_ratio / lm1))
}

/// `phi(alpha)`: the domain radius whose extremal map reaches modulus `R`.
#[allow(non_snake_case)]
pub fn phi(alpha: f64, R: f64, params: &EnergyParams) -> Result<f64> {
    check_lambda(params)?;
    if !alpha.is_finite() {
        return Err(Error::NonFinite { name: "alpha" });
    }
    let amin = alpha_min(R, params.tangential_weight, params.lambda);
    if alpha < amin {
        // Rounding in alpha_min itself is tolerated through the radicand clamp.
        let slack = RADICAND_CLAMP * amin.abs().max(1.0);
        if alpha < amin - slack {
            return Err(Error::OutOfDomain {
                alpha,
                alpha_min: amin,
            });
        }
    }
    Ok(math::exp(log_radius_at(alpha, R, params)?))
}

/// Bracket `[lo, hi]` with `phi(lo) >= r >= phi(hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBracket {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

/// A solved `alpha` with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRoot {
    pub alpha: f64,
    /// `phi(alpha) - r`.
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection settings for `phi(alpha) = r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSolver {
    /// Accept when `|phi(alpha) - r| <= rel_tol * max(1, r)`.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for AlphaSolver {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}

impl AlphaSolver {
    pub fn with_tolerance(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    fn tolerance(&self, r: f64) -> f64 {
        self.rel_tol * r.max(1.0)
    }

    /// Upper bracket: start at `max(0, alpha_min + 1)` and double the offset
    /// from `alpha_min` until `phi` drops below `r`.
    pub fn bracket(&self, config: &Config) -> Result<AlphaBracket> {
        let params = config.params();
        let (r, big_r) = (config.r(), config.R());
        let lo = alpha_min(big_r, params.tangential_weight, params.lambda);
        let mut offset = (0.0f64.max(lo + 1.0)) - lo;
        let mut hi = lo + offset;
        for _ in 0..2048 {
            if phi(hi, big_r, &params)? < r {
                return Ok(AlphaBracket {
                    lo,
                    hi,
                    tol: self.tolerance(r),
                });
            }
            offset *= 2.0;
            hi = lo + offset;
            if !hi.is_finite() {
                break;
            }
        }
        Err(Error::NoConvergence { iterations: 2048 })
    }

    /// Solve `phi(alpha) = r`. On the feasibility boundary this returns
    /// `alpha_min` exactly.
    pub fn solve(&self, config: &Config) -> Result<AlphaRoot> {
        let params = config.params();
        check_lambda(&params)?;
        require_feasible(config)?;
        let (r, big_r) = (config.r(), config.R());
        let tol = self.tolerance(r);
        let amin = alpha_min(big_r, params.tangential_weight, params.lambda);
        let at_min = phi(amin, big_r, &params)? - r;
        if at_min <= tol {
            return Ok(AlphaRoot {
                alpha: amin,
                residual: at_min,
                iterations: 0,
            });
        }
        let AlphaBracket { mut lo, mut hi, .. } = self.bracket(config)?;
        let mut f_lo = at_min;
        let mut f_hi = phi(hi, big_r, &params)? - r;
        if f_hi.abs() <= tol {
            return Ok(AlphaRoot {
                alpha: hi,
                residual: f_hi,
                iterations: 0,
            });
        }
        for iteration in 1..=self.max_iter {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                // Float resolution exhausted; phi is steep near alpha_min.
                let (alpha, residual) = if f_lo.abs() <= f_hi.abs() {
                    (lo, f_lo)
                } else {
                    (hi, f_hi)
                };
                return Ok(AlphaRoot {
                    alpha,
                    residual,
                    iterations: iteration,
                });
            }
            let f_mid = phi(mid, big_r, &params)? - r;
            if f_mid.abs() <= tol {
                return Ok(AlphaRoot {
                    alpha: mid,
                    residual: f_mid,
                    iterations: iteration,
                });
            }
            if f_mid > 0.0 {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
                f_hi = f_mid;
            }
        }
        Err(Error::NoConvergence {
            iterations: self.max_iter,
        })
    }
}

/// Solve `phi(alpha) = r` with the default tolerance.
pub fn solve_alpha(config: &Config) -> Result<f64> {
    AlphaSolver::default().solve(config).map(|root| root.alpha)
}

/// `alpha = a^2 (ln R / ln r)^2 - b^2` for the logarithmic branch.
pub fn alpha_for_lambda1(config: &Config) -> Result<f64> {
    let params = config.params();
    #[allow(clippy::float_cmp)]
    if params.lambda != 1.0 {
        return Err(Error::BranchMismatch {
            lambda: params.lambda,
        });
    }
    let k = math::ln(config.R()) / math::ln(config.r());
    let (a, b) = (params.normal_weight, params.tangential_weight);
    Ok(a * a * k * k - b * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nitsche::nitsche_bound;
    use crate::types::{validate, AnnulusPair};
    use core::f64::consts::E;

    fn params(a: f64, b: f64, lambda: f64) -> EnergyParams {
        EnergyParams::new(a, b, lambda)
    }

    fn config(r: f64, big_r: f64, a: f64, b: f64, lambda: f64) -> Config {
        validate(AnnulusPair::new(r, big_r), params(a, b, lambda)).unwrap()
    }

    #[test]
    fn phi_at_zero_is_power() {
        for &(big_r, a, b, lambda) in &[
            (1.25, 1.0, 1.0, 2.0),
            (2.0, 0.5, 1.5, -1.0),
            (1.1, 3.0, 1.0, 0.5),
        ] {
            let got = phi(0.0, big_r, &params(a, b, lambda)).unwrap();
            let want = math::powf(big_r, a / b);
            assert!((got - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn phi_at_alpha_min_is_bound() {
        let p = params(1.0, 1.0, 2.0);
        let amin = alpha_min(1.25, 1.0, 2.0);
        assert!((amin + 0.64).abs() < 1e-15);
        assert!((phi(amin, 1.25, &p).unwrap() - 2.0).abs() < 1e-12);
        let p0 = params(1.0, 1.0, 0.0);
        assert!((phi(-1.0, 1.25, &p0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn phi_errors() {
        assert_eq!(
            phi(0.0, 1.25, &params(1.0, 1.0, 1.0)),
            Err(Error::LambdaOne)
        );
        assert!(matches!(
            phi(-0.7, 1.25, &params(1.0, 1.0, 2.0)),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            phi(-1.5, 1.25, &params(1.0, 1.0, 0.0)),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            phi(0.0, 1.25, &params(1.0, 1.0, 1.0 + 1e-12)),
            Err(Error::NearLambdaOne { .. })
        ));
    }

    #[test]
    fn phi_tends_to_one() {
        let v = phi(1e8, 1.5, &params(1.0, 1.0, 2.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-3);
        let v = phi(1e8, 1.5, &params(1.0, 1.0, 0.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-3);
    }

    #[test]
    fn solve_reference_example() {
        // Reference value from an independent high-precision shooting run.
        let root = AlphaSolver::default()
            .solve(&config(1.5, 1.25, 1.0, 1.0, 2.0))
            .unwrap();
        assert!((root.alpha + 0.5376).abs() < 1e-11, "{}", root.alpha);
        assert!(root.residual.abs() <= 1.5e-12);
    }

    #[test]
    fn solve_power_map_gives_zero() {
        let r = math::powf(1.4, 0.8);
        let alpha = solve_alpha(&config(r, 1.4, 0.8, 1.0, 3.0)).unwrap();
        assert!(alpha.abs() < 1e-11, "{alpha}");
    }

    #[test]
    fn solve_on_boundary_returns_alpha_min() {
        for &lambda in &[0.0, 2.0, -1.0, 3.0] {
            let p = params(1.0, 1.3, lambda);
            let bound = nitsche_bound(1.25, &p).unwrap();
            let alpha = solve_alpha(&config(bound, 1.25, 1.0, 1.3, lambda)).unwrap();
            assert_eq!(alpha, alpha_min(1.25, 1.3, lambda));
        }
    }

    #[test]
    fn solve_rejects_infeasible_and_lambda_one() {
        assert!(matches!(
            solve_alpha(&config(2.5, 1.25, 1.0, 1.0, 0.0)),
            Err(Error::Infeasible { .. })
        ));
        assert_eq!(
            solve_alpha(&config(2.0, 1.25, 1.0, 1.0, 1.0)),
            Err(Error::LambdaOne)
        );
    }

    #[test]
    fn lambda_one_examples() {
        let a = alpha_for_lambda1(&config(E, E * E, 1.0, 1.0, 1.0)).unwrap();
        assert!((a - 3.0).abs() < 1e-12);
        let a = alpha_for_lambda1(&config(E, E, 1.0, 2.0, 1.0)).unwrap();
        assert!((a + 3.0).abs() < 1e-12);
        let r: f64 = 1.7;
        let a = alpha_for_lambda1(&config(r, math::powf(r, 2.0 / 0.5), 0.5, 2.0, 1.0)).unwrap();
        assert!(a.abs() < 1e-12);
        assert!(matches!(
            alpha_for_lambda1(&config(E, E, 1.0, 2.0, 0.0)),
            Err(Error::BranchMismatch { .. })
        ));
    }
}
