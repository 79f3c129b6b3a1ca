//! Shared domain types and the polar-grid conventions every other module uses.
//!
//! Both annuli have inner radius 1. The domain is `A1 = {1 <= |z| <= r}` and
//! the target is `A2 = {1 <= |w| <= R}`. Area integrals use the polar element
//! `t dt dtheta`.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Outer radii of the domain and target annuli.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnnulusPair {
    /// Outer radius `r` of the domain annulus.
    pub domain_radius: f64,
    /// Outer radius `R` of the target annulus.
    pub target_radius: f64,
}

impl AnnulusPair {
    pub fn new(domain_radius: f64, target_radius: f64) -> Self {
        Self {
            domain_radius,
            target_radius,
        }
    }

    fn check(&self) -> Result<()> {
        for (name, v) in [("r", self.domain_radius), ("R", self.target_radius)] {
            if !v.is_finite() {
                return Err(Error::NonFinite { name });
            }
            if v <= 1.0 {
                return Err(Error::DegenerateAnnulus { radius: v });
            }
        }
        Ok(())
    }
}

/// Weights of the normal and tangential derivatives and the metric exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyParams {
    /// Weight `a` on `|h_N|^2`.
    pub normal_weight: f64,
    /// Weight `b` on `|h_T|^2`.
    pub tangential_weight: f64,
    /// Exponent `lambda` of the `1/|h|^(2 lambda)` metric factor.
    pub lambda: f64,
}

impl EnergyParams {
    pub fn new(normal_weight: f64, tangential_weight: f64, lambda: f64) -> Self {
        Self {
            normal_weight,
            tangential_weight,
            lambda,
        }
    }

    fn check(&self) -> Result<()> {
        for (name, v) in [
            ("a", self.normal_weight),
            ("b", self.tangential_weight),
            ("lambda", self.lambda),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite { name });
            }
        }
        for w in [self.normal_weight, self.tangential_weight] {
            if w <= 0.0 {
                return Err(Error::NonPositiveWeight { weight: w });
            }
        }
        Ok(())
    }

    /// Which closed-form family applies. Exact comparison: only a literal
    /// `lambda = 1` selects the logarithmic branch.
    pub fn branch(&self) -> Branch {
        #[allow(clippy::float_cmp)]
        if self.lambda == 1.0 {
            Branch::LambdaEqOne
        } else {
            Branch::LambdaNeOne
        }
    }

    /// `a / b`.
    pub fn weight_ratio(&self) -> f64 {
        self.normal_weight / self.tangential_weight
    }
}

/// Closed-form family of the extremal map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Branch {
    #[cfg_attr(feature = "serde", serde(rename = "lambda_ne_1"))]
    LambdaNeOne,
    #[cfg_attr(feature = "serde", serde(rename = "lambda_eq_1"))]
    LambdaEqOne,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::LambdaNeOne => "lambda_ne_1",
            Branch::LambdaEqOne => "lambda_eq_1",
        }
    }
}

/// A validated `(annuli, params)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    annuli: AnnulusPair,
    params: EnergyParams,
}

impl Config {
    pub fn annuli(&self) -> AnnulusPair {
        self.annuli
    }

    pub fn params(&self) -> EnergyParams {
        self.params
    }

    pub fn r(&self) -> f64 {
        self.annuli.domain_radius
    }

    #[allow(non_snake_case)]
    pub fn R(&self) -> f64 {
        self.annuli.target_radius
    }
}

/// Check every type invariant and bundle the pair.
pub fn validate(annuli: AnnulusPair, params: EnergyParams) -> Result<Config> {
    annuli.check()?;
    params.check()?;
    Ok(Config { annuli, params })
}

/// `n` nodes on `[1, r]`, uniformly spaced in `ln t`, with both endpoints exact.
pub fn log_grid(r: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "log grid needs at least two nodes");
    let span = math::ln(r);
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| match i {
            0 => 1.0,
            i if i == n - 1 => r,
            i => math::exp(span * i as f64 / last),
        })
        .collect()
}

fn strictly_increasing(xs: &[f64]) -> Option<usize> {
    xs.windows(2).position(|w| !(w[1] > w[0])).map(|i| i + 1)
}

/// Sampled radial profile `H: [1, r] -> [1, R]` with pinned endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    t: Vec<f64>,
    h: Vec<f64>,
}

impl RadialProfile {
    /// Requires `t[0] = 1`, `t[last] = r`, `h[0] = 1`, `h[last] = R` exactly and
    /// both arrays strictly increasing.
    pub fn new(annuli: AnnulusPair, t: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if t.len() != h.len() {
            return Err(Error::InvalidGrid("t and H arrays differ in length"));
        }
        if t.len() < 2 {
            return Err(Error::InvalidGrid("profile needs at least two nodes"));
        }
        let last = t.len() - 1;
        #[allow(clippy::float_cmp)]
        if t[0] != 1.0 || t[last] != annuli.domain_radius {
            return Err(Error::InvalidGrid("t grid must run from 1 to r"));
        }
        #[allow(clippy::float_cmp)]
        if h[0] != 1.0 || h[last] != annuli.target_radius {
            return Err(Error::InvalidGrid("H must be pinned to 1 and R"));
        }
        if strictly_increasing(&t).is_some() {
            return Err(Error::InvalidGrid("t grid is not strictly increasing"));
        }
        if let Some(index) = strictly_increasing(&h) {
            return Err(Error::MonotonicityViolation { index });
        }
        Ok(Self { t, h })
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.t, self.h)
    }
}

/// Samples of a map `h` on a polar tensor grid over `A1`.
///
/// Values are stored row-major: index `i * theta_grid.len() + j` holds the
/// sample at `(t_grid[i], theta_grid[j])`. The theta grid is uniform on
/// `[0, 2 pi)` so the angular rule is the periodic trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField {
    t_grid: Vec<f64>,
    theta_grid: Vec<f64>,
    values: Vec<Complex64>,
    normal: Option<Vec<Complex64>>,
    tangential: Option<Vec<Complex64>>,
}

impl PolarField {
    pub fn new(
        t_grid: Vec<f64>,
        theta_grid: Vec<f64>,
        values: Vec<Complex64>,
        normal: Option<Vec<Complex64>>,
        tangential: Option<Vec<Complex64>>,
    ) -> Result<Self> {
        if t_grid.len() < 3 || theta_grid.is_empty() {
            return Err(Error::InvalidGrid("polar grid too small"));
        }
        if strictly_increasing(&t_grid).is_some() || strictly_increasing(&theta_grid).is_some() {
            return Err(Error::InvalidGrid("polar grid is not strictly increasing"));
        }
        if theta_grid[0] < 0.0 || theta_grid[theta_grid.len() - 1] >= core::f64::consts::TAU {
            return Err(Error::InvalidGrid("theta grid must lie in [0, 2 pi)"));
        }
        let size = t_grid.len() * theta_grid.len();
        let sized = |v: &Option<Vec<Complex64>>| v.as_ref().is_none_or(|v| v.len() == size);
        if values.len() != size || !sized(&normal) || !sized(&tangential) {
            return Err(Error::InvalidGrid("sample count does not match the grid"));
        }
        Ok(Self {
            t_grid,
            theta_grid,
            values,
            normal,
            tangential,
        })
    }

    /// Sample `map(t, theta) -> (h, h_N, h_T)` on the tensor grid.
    pub fn from_fn<F>(t_grid: Vec<f64>, theta_grid: Vec<f64>, mut map: F) -> Result<Self>
    where
        F: FnMut(f64, f64) -> Result<(Complex64, Complex64, Complex64)>,
    {
        let size = t_grid.len() * theta_grid.len();
        let mut values = Vec::with_capacity(size);
        let mut normal = Vec::with_capacity(size);
        let mut tangential = Vec::with_capacity(size);
        for &t in &t_grid {
            for &theta in &theta_grid {
                let (h, hn, ht) = map(t, theta)?;
                values.push(h);
                normal.push(hn);
                tangential.push(ht);
            }
        }
        Self::new(t_grid, theta_grid, values, Some(normal), Some(tangential))
    }

    /// `n` equally spaced angles on `[0, 2 pi)`.
    pub fn uniform_theta(n: usize) -> Vec<f64> {
        let step = core::f64::consts::TAU / n as f64;
        (0..n).map(|j| j as f64 * step).collect()
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn theta_grid(&self) -> &[f64] {
        &self.theta_grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn normal(&self) -> Option<&[Complex64]> {
        self.normal.as_deref()
    }

    pub fn tangential(&self) -> Option<&[Complex64]> {
        self.tangential.as_deref()
    }

    /// Mutable access to the tangential samples, for building defective fields in tests.
    pub fn tangential_mut(&mut self) -> Option<&mut [Complex64]> {
        self.tangential.as_deref_mut()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.theta_grid.len() + j
    }

    /// Largest deviation of `|h|` from 1 on the inner ring and from `target_radius`
    /// on the outer ring.
    pub fn boundary_defect(&self, target_radius: f64) -> f64 {
        let m = self.theta_grid.len();
        let last = self.t_grid.len() - 1;
        let mut worst = 0.0f64;
        for j in 0..m {
            worst = worst.max((self.values[self.index(0, j)].norm() - 1.0).abs());
            worst = worst.max((self.values[self.index(last, j)].norm() - target_radius).abs());
        }
        worst
    }
}
