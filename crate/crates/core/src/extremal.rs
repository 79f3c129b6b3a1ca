//! Closed-form extremal radial maps `h(t e^{i theta}) = H(t) e^{i(theta + beta)}`.
//!
//! For `lambda != 1`, with `c = 1 + sqrt(1 + alpha/b^2)` and `beta_ = alpha/b^2`,
//!
//! ```text
//! H(t) = (2c)^(1/(lambda-1)) t^(b/a) / (c^2 - beta_ t^(2(lambda-1)b/a))^(1/(lambda-1))
//! ```
//!
//! and for `lambda = 1`, `H(t) = t^(ln R / ln r)`. All powers with exponent
//! `1/(lambda-1)` are taken in the log domain.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::alpha::{self, alpha_for_lambda1, alpha_min, check_lambda, radicand, AlphaSolver};
use crate::error::{Error, Result};
use crate::math;
use crate::quad::Quadrature;
use crate::root::brent;
use crate::types::{
    log_grid, AnnulusPair, Branch, Config, EnergyParams, PolarField, RadialProfile,
};

/// Value and first two derivatives of a radial profile at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// Solved extremal map for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalSolution {
    alpha: f64,
    params: EnergyParams,
    annuli: AnnulusPair,
    branch: Branch,
}

impl ExtremalSolution {
    /// Wrap an already known `alpha`. For `lambda != 1` the constant must be
    /// admissible; `lambda` within `1e-9` of 1 is refused.
    pub fn new(config: &Config, alpha: f64) -> Result<Self> {
        let params = config.params();
        let branch = params.branch();
        if !alpha.is_finite() {
            return Err(Error::NonFinite { name: "alpha" });
        }
        match branch {
            Branch::LambdaNeOne => {
                check_lambda(&params)?;
                let amin = alpha_min(config.R(), params.tangential_weight, params.lambda);
                if alpha < amin - alpha::RADICAND_CLAMP * amin.abs().max(1.0) {
                    return Err(Error::OutOfDomain {
                        alpha,
                        alpha_min: amin,
                    });
                }
            }
            Branch::LambdaEqOne => {
                let b = params.tangential_weight;
                if alpha <= -b * b {
                    return Err(Error::OutOfDomain {
                        alpha,
                        alpha_min: -b * b,
                    });
                }
            }
        }
        Ok(Self {
            alpha,
            params,
            annuli: config.annuli(),
            branch,
        })
    }

    /// Solve for `alpha` with the default solver and build the map.
    pub fn solve(config: &Config) -> Result<Self> {
        Self::solve_with(config, &AlphaSolver::default())
    }

    pub fn solve_with(config: &Config, solver: &AlphaSolver) -> Result<Self> {
        let alpha = match config.params().branch() {
            Branch::LambdaEqOne => alpha_for_lambda1(config)?,
            Branch::LambdaNeOne => solver.solve(config)?.alpha,
        };
        Self::new(config, alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn params(&self) -> EnergyParams {
        self.params
    }

    pub fn annuli(&self) -> AnnulusPair {
        self.annuli
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn r(&self) -> f64 {
        self.annuli.domain_radius
    }

    #[allow(non_snake_case)]
    pub fn R(&self) -> f64 {
        self.annuli.target_radius
    }

    /// `ln R / ln r`, the exponent of the `lambda = 1` power map.
    fn log_exponent(&self) -> f64 {
        math::ln(self.R()) / math::ln(self.r())
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(1.0..=self.r()).contains(&t) {
            return Err(Error::OutOfRange {
                value: t,
                lo: 1.0,
                hi: self.r(),
            });
        }
        Ok(())
    }

    fn check_modulus(&self, y: f64) -> Result<()> {
        if !(1.0..=self.R()).contains(&y) {
            return Err(Error::OutOfRange {
                value: y,
                lo: 1.0,
                hi: self.R(),
            });
        }
        Ok(())
    }

    /// `(c, beta_, Q, D)` of the closed form at `t`.
    fn closed_form_parts(&self, t: f64) -> Result<(f64, f64, f64, f64)> {
        let p = &self.params;
        let b2 = p.tangential_weight * p.tangential_weight;
        let s1 = radicand(self.alpha, 1.0, p).max(0.0);
        let c = 1.0 + math::sqrt(s1);
        let beta = self.alpha / b2;
        let q = math::exp(2.0 * (p.lambda - 1.0) / p.weight_ratio() * math::ln(t));
        let d = c * c - beta * q;
        if !(d > 0.0) {
            return Err(Error::DegenerateDenominator { t });
        }
        Ok((c, beta, q, d))
    }

    /// `H(t)` on `[1, r]`.
    pub fn profile(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        #[allow(clippy::float_cmp)]
        if t == 1.0 {
            return Ok(1.0);
        }
        match self.branch {
            Branch::LambdaEqOne => Ok(math::powf(t, self.log_exponent())),
            Branch::LambdaNeOne => {
                let p = &self.params;
                let (c, _, _, d) = self.closed_form_parts(t)?;
                let log_h = math::ln(t) / p.weight_ratio()
                    + (core::f64::consts::LN_2 + math::ln(c) - math::ln(d)) / (p.lambda - 1.0);
                Ok(math::exp(log_h))
            }
        }
    }

    /// `H'(t) = sqrt(alpha H^(2 lambda) + b^2 H^2) / (a t)`.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        let h = self.profile(t)?;
        let p = &self.params;
        match self.branch {
            Branch::LambdaEqOne => {
                let k = self.log_exponent();
                Ok(k * math::powf(t, k - 1.0))
            }
            Branch::LambdaNeOne => {
                let s = radicand(self.alpha, h, p);
                let s = if (-alpha::RADICAND_CLAMP..0.0).contains(&s) {
                    0.0
                } else {
                    s
                };
                Ok(h * p.tangential_weight * math::sqrt(s) / (p.normal_weight * t))
            }
        }
    }

    /// `H`, `H'`, `H''` by differentiating the closed form itself (log-derivative
    /// chain rule), independent of the first-order ODE.
    pub fn jet(&self, t: f64) -> Result<Jet> {
        let value = self.profile(t)?;
        match self.branch {
            Branch::LambdaEqOne => {
                let k = self.log_exponent();
                Ok(Jet {
                    value,
                    first: k * math::powf(t, k - 1.0),
                    second: k * (k - 1.0) * math::powf(t, k - 2.0),
                })
            }
            Branch::LambdaNeOne => {
                let p = &self.params;
                let (c, beta, q, d) = self.closed_form_parts(t)?;
                let ba = 1.0 / p.weight_ratio();
                let g = 1.0 + 2.0 * beta * q / d;
                let log_d1 = ba / t * g;
                let dq = 2.0 * (p.lambda - 1.0) * ba * q / t;
                let log_d2 = -ba / (t * t) * g + ba / t * 2.0 * beta * dq * c * c / (d * d);
                Ok(Jet {
                    value,
                    first: value * log_d1,
                    second: value * (log_d2 + log_d1 * log_d1),
                })
            }
        }
    }

    /// `t(y) = exp(int_1^y a / sqrt(alpha s^(2 lambda) + b^2 s^2) ds)` by adaptive quadrature.
    pub fn t_of_y(&self, y: f64) -> Result<f64> {
        self.t_of_y_with(y, &Quadrature::default())
    }

    pub fn t_of_y_with(&self, y: f64, quad: &Quadrature) -> Result<f64> {
        self.check_modulus(y)?;
        #[allow(clippy::float_cmp)]
        if y == 1.0 {
            return Ok(1.0);
        }
        let p = self.params;
        let alpha = self.alpha;
        let est = quad.integrate(
            |s| {
                let rad = radicand(alpha, s, &p).max(0.0);
                p.normal_weight / (p.tangential_weight * s * math::sqrt(rad))
            },
            1.0,
            y,
        )?;
        Ok(math::exp(est.value))
    }

    /// `H^{-1}(rho)` by Brent's method on the closed form.
    pub fn inverse_profile(&self, rho: f64) -> Result<f64> {
        self.check_modulus(rho)?;
        #[allow(clippy::float_cmp)]
        if rho == 1.0 {
            return Ok(1.0);
        }
        #[allow(clippy::float_cmp)]
        if rho == self.R() {
            return Ok(self.r());
        }
        let r = self.r();
        // H(r) carries the alpha tolerance; clamp the bracket end to rho.
        let mut err = None;
        let t = brent(
            |t| match self.profile(t) {
                Ok(h) if t == r => h.max(rho) - rho,
                Ok(h) => h - rho,
                Err(e) => {
                    err = Some(e);
                    f64::NAN
                }
            },
            1.0,
            r,
            4.0 * f64::EPSILON * r,
            200,
        );
        if let Some(e) = err {
            return Err(e);
        }
        t
    }

    /// `H^{-1}(rho)` from the explicit inverse of the closed form.
    pub fn inverse_profile_closed_form(&self, rho: f64) -> Result<f64> {
        self.check_modulus(rho)?;
        match self.branch {
            Branch::LambdaEqOne => Ok(math::powf(rho, 1.0 / self.log_exponent())),
            Branch::LambdaNeOne => Ok(math::exp(alpha::log_radius_at(
                self.alpha,
                rho,
                &self.params,
            )?)),
        }
    }

    /// `z = t e^{i theta} -> H(t) e^{i(theta + rotation)}`.
    pub fn full_map(&self, rotation: f64, z: Complex64) -> Result<Complex64> {
        let (t, theta) = z.to_polar();
        let t = self.snap_radius(t);
        Ok(Complex64::from_polar(self.profile(t)?, theta + rotation))
    }

    /// Moduli within a few ulps of a ring are snapped onto it.
    fn snap_radius(&self, t: f64) -> f64 {
        let eps = 8.0 * f64::EPSILON;
        if t < 1.0 && t >= 1.0 - eps {
            1.0
        } else if t > self.r() && t <= self.r() * (1.0 + eps) {
            self.r()
        } else {
            t
        }
    }

    /// Sample `h`, `h_N = H' e^{i phi}` and `h_T = i (H/t) e^{i phi}` with
    /// `phi = theta + rotation` on a polar grid. The outer ring is pinned to `R`.
    pub fn polar_field(
        &self,
        rotation: f64,
        t_grid: Vec<f64>,
        theta_grid: Vec<f64>,
    ) -> Result<PolarField> {
        let (r, big_r) = (self.r(), self.R());
        PolarField::from_fn(t_grid, theta_grid, |t, theta| {
            #[allow(clippy::float_cmp)]
            let h = if t == r { big_r } else { self.profile(t)? };
            let dh = self.derivative(t)?;
            let phase = Complex64::from_polar(1.0, theta + rotation);
            Ok((phase * h, phase * dh, phase * Complex64::new(0.0, h / t)))
        })
    }

    /// Closed form sampled on an `n`-node log grid. The outer value is pinned
    /// to `R`; the discarded difference is bounded by the solver tolerance.
    pub fn sample_profile(&self, n: usize) -> Result<RadialProfile> {
        let t = log_grid(self.r(), n);
        let mut h = t
            .iter()
            .map(|&t| self.profile(t))
            .collect::<Result<Vec<_>>>()?;
        let last = h.len() - 1;
        h[last] = self.R();
        RadialProfile::new(self.annuli, t, h)
    }
}
