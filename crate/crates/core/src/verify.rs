//! Independent checks of the extremal map: Euler–Lagrange residuals, the
//! first integral, and initial-value shooting.
//!
//! In `x = ln t`, `y = H(e^x)`, `zeta = dy/dx` the Euler–Lagrange equation is
//! autonomous:
//!
//! ```text
//! a^2 y y'' + (lambda - 1) b^2 y^2 = lambda a^2 y'^2
//! ```
//!
//! and it conserves `(a^2 zeta^2 - b^2 y^2) / y^(2 lambda) = alpha`. The shooter
//! integrates this second-order form from `(y, zeta) = (1, sqrt(alpha + b^2)/a)`;
//! the first integral is never fed back into the right-hand side, so its drift
//! measures integrator error.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::extremal::{ExtremalSolution, Jet};
use crate::math;
use crate::ode::Dopri5;
use crate::types::EnergyParams;

/// `a^2 t^2 H H'' + a^2 t H H' + (lambda - 1) b^2 H^2 - lambda a^2 t^2 H'^2`.
pub fn euler_lagrange_residual(jet: &Jet, t: f64, params: &EnergyParams) -> f64 {
    let (a2, b2) = (
        params.normal_weight * params.normal_weight,
        params.tangential_weight * params.tangential_weight,
    );
    let lambda = params.lambda;
    let Jet {
        value: h,
        first: dh,
        second: ddh,
    } = *jet;
    a2 * t * t * h * ddh + a2 * t * h * dh + (lambda - 1.0) * b2 * h * h
        - lambda * a2 * t * t * dh * dh
}

/// `(a^2 zeta^2 - b^2 y^2) / y^(2 lambda)` with `y = H(t)`, `zeta = t H'(t)`.
pub fn first_integral(h: f64, dh: f64, t: f64, params: &EnergyParams) -> f64 {
    omega_ratio(h, t * dh, params)
}

fn omega_ratio(y: f64, zeta: f64, params: &EnergyParams) -> f64 {
    let (a, b) = (params.normal_weight, params.tangential_weight);
    (a * a * zeta * zeta - b * b * y * y) * math::powf(y, -2.0 * params.lambda)
}

/// Largest Euler–Lagrange residual of an extremal map on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualScan {
    pub max_abs: f64,
    /// `a^2 r^2 sup H'^2` over the grid.
    pub scale: f64,
}

impl ResidualScan {
    pub fn normalized(&self) -> f64 {
        self.max_abs / self.scale
    }
}

/// Residual of the closed form on `n` interior points of `(1, r)`, using
/// derivatives of the closed form itself.
pub fn residual_scan(solution: &ExtremalSolution, n: usize) -> Result<ResidualScan> {
    let params = solution.params();
    let r = solution.r();
    let mut max_abs = 0.0f64;
    let mut sup_dh = 0.0f64;
    for i in 1..=n {
        let t = 1.0 + (r - 1.0) * i as f64 / (n + 1) as f64;
        let jet = solution.jet(t)?;
        max_abs = max_abs.max(euler_lagrange_residual(&jet, t, &params).abs());
        sup_dh = sup_dh.max(jet.first.abs());
    }
    let a = params.normal_weight;
    Ok(ResidualScan {
        max_abs,
        scale: a * a * r * r * sup_dh * sup_dh,
    })
}

/// One sample of a shooting trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShootingState {
    /// Log-radius `x = ln t`.
    pub x: f64,
    /// Modulus `y = H(e^x)`.
    pub y: f64,
    /// `dy/dx`.
    pub zeta: f64,
}

impl ShootingState {
    /// `omega = a^2 zeta^2 - b^2 y^2`.
    pub fn omega(&self, params: &EnergyParams) -> f64 {
        let (a, b) = (params.normal_weight, params.tangential_weight);
        a * a * self.zeta * self.zeta - b * b * self.y * self.y
    }

    /// `omega / y^(2 lambda)`, constant along extremal trajectories.
    pub fn first_integral(&self, params: &EnergyParams) -> f64 {
        omega_ratio(self.y, self.zeta, params)
    }

    pub fn t(&self) -> f64 {
        math::exp(self.x)
    }
}

/// States sampled on a uniform grid in `x`, from `x = 0` to `x = ln r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: EnergyParams,
    states: Vec<ShootingState>,
}

impl Trajectory {
    pub fn states(&self) -> &[ShootingState] {
        &self.states
    }

    pub fn params(&self) -> EnergyParams {
        self.params
    }

    pub fn terminal(&self) -> ShootingState {
        self.states[self.states.len() - 1]
    }

    /// `max - min` of the first integral over the samples.
    pub fn first_integral_variation(&self) -> f64 {
        let (lo, hi) = self
            .states
            .iter()
            .map(|s| s.first_integral(&self.params))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    }

    /// `(t, H)` pairs with `t = e^x`; the first node is `t = 1` exactly.
    pub fn radial_samples(&self) -> (Vec<f64>, Vec<f64>) {
        self.states
            .iter()
            .enumerate()
            .map(|(i, s)| (if i == 0 { 1.0 } else { s.t() }, s.y))
            .unzip()
    }
}

/// `zeta` below this is a genuine sign change, not rounding at a turning point.
const ZETA_FLOOR: f64 = -1e-8;

/// Integrate the Euler–Lagrange equation in `x` from `(y, zeta) = (1, sqrt(alpha + b^2)/a)`
/// to `x = ln r`, sampling `samples` equally spaced points.
pub fn shoot(alpha: f64, params: &EnergyParams, r: f64, samples: usize) -> Result<Trajectory> {
    shoot_with(alpha, params, r, samples, &Dopri5::default())
}

pub fn shoot_with(
    alpha: f64,
    params: &EnergyParams,
    r: f64,
    samples: usize,
    integrator: &Dopri5,
) -> Result<Trajectory> {
    if samples < 2 {
        return Err(Error::InvalidGrid("shooting needs at least two samples"));
    }
    if !(r > 1.0) {
        return Err(Error::DegenerateAnnulus { radius: r });
    }
    let (a, b) = (params.normal_weight, params.tangential_weight);
    let (a2, b2) = (a * a, b * b);
    let lambda = params.lambda;
    let start = alpha + b2;
    if start < -crate::alpha::RADICAND_CLAMP * b2 {
        return Err(Error::RadicandNegative { x: 0.0 });
    }
    let zeta0 = math::sqrt(start.max(0.0)) / a;
    let rhs = |_x: f64, s: &[f64; 2]| {
        let (y, zeta) = (s[0], s[1]);
        [
            zeta,
            (lambda * a2 * zeta * zeta - (lambda - 1.0) * b2 * y * y) / (a2 * y),
        ]
    };
    let guard = |x: f64, s: &[f64; 2]| {
        if s[1] < ZETA_FLOOR || s[0] < 1.0 - 1e-12 {
            Err(Error::RadicandNegative { x })
        } else {
            Ok(())
        }
    };
    let span = math::ln(r);
    let last = (samples - 1) as f64;
    let mut states = Vec::with_capacity(samples);
    let mut state = [1.0, zeta0];
    states.push(ShootingState {
        x: 0.0,
        y: 1.0,
        zeta: zeta0,
    });
    let mut x = 0.0;
    for i in 1..samples {
        let next = if i == samples - 1 {
            span
        } else {
            span * i as f64 / last
        };
        state = integrator.integrate(rhs, x, next, state, guard)?;
        x = next;
        states.push(ShootingState {
            x,
            y: state[0],
            zeta: state[1],
        });
    }
    Ok(Trajectory {
        params: *params,
        states,
    })
}

/// Largest pointwise gap between a shot trajectory and the closed form.
pub fn shooting_gap(solution: &ExtremalSolution, trajectory: &Trajectory) -> Result<f64> {
    let (t, h) = trajectory.radial_samples();
    let r = solution.r();
    let mut worst = 0.0f64;
    for (t, h) in t.into_iter().zip(h) {
        worst = worst.max((solution.profile(t.min(r))? - h).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nitsche::nitsche_bound;
    use crate::types::{validate, AnnulusPair};
    use core::f64::consts::E;

    fn solution(r: f64, big_r: f64, a: f64, b: f64, lambda: f64) -> ExtremalSolution {
        let cfg = validate(AnnulusPair::new(r, big_r), EnergyParams::new(a, b, lambda)).unwrap();
        ExtremalSolution::solve(&cfg).unwrap()
    }

    #[test]
    fn power_map_satisfies_el_when_alpha_is_zero() {
        // H = t^(b/a): residual a^2 k(k-1) t^k.. collapses to (a^2 k^2 - b^2)(1 - lambda) t^(2k) = 0.
        for &(a, b, lambda) in &[(1.0, 1.0, 0.0), (0.7, 1.3, 2.5), (1.2, 0.4, -1.0)] {
            let k: f64 = b / a;
            let p = EnergyParams::new(a, b, lambda);
            for &t in &[1.1, 1.5, 2.3] {
                let jet = Jet {
                    value: math::powf(t, k),
                    first: k * math::powf(t, k - 1.0),
                    second: k * (k - 1.0) * math::powf(t, k - 2.0),
                };
                let scale = a * a * t * t * jet.first * jet.first;
                assert!(euler_lagrange_residual(&jet, t, &p).abs() < 1e-13 * scale.max(1.0));
                assert!(first_integral(jet.value, jet.first, t, &p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_residuals() {
        let identity = |t: f64| Jet {
            value: t,
            first: 1.0,
            second: 0.0,
        };
        // a = b: the identity is the alpha = 0 power map, extremal for every lambda.
        let p = EnergyParams::new(1.0, 1.0, 2.0);
        for &t in &[1.2, 1.5, 3.0] {
            assert!(euler_lagrange_residual(&identity(t), t, &p).abs() < 1e-13);
        }
        // b = 2a: t^2 + 4 t^2 - 2 t^2 = 3 t^2, so the identity is not extremal.
        let p = EnergyParams::new(1.0, 2.0, 2.0);
        for &t in &[1.2, 1.5, 3.0] {
            let res = euler_lagrange_residual(&identity(t), t, &p);
            assert!((res - 3.0 * t * t).abs() < 1e-12);
        }
        let p0 = EnergyParams::new(1.0, 1.0, 0.0);
        assert!(first_integral(1.7, 1.0, 1.7, &p0).abs() < 1e-15);
    }

    #[test]
    fn extremal_residual_is_small() {
        for &(r, big_r, a, b, lambda) in &[
            (1.5, 1.25, 1.0, 1.0, 2.0),
            (1.6, 1.8, 1.0, 1.4, -1.0),
            (2.0, 1.5, 1.3, 1.0, 0.5),
            (2.0, 3.0, 1.0, 1.0, 1.0),
        ] {
            let s = solution(r, big_r, a, b, lambda);
            let scan = residual_scan(&s, 100).unwrap();
            assert!(scan.normalized() < 1e-12, "{scan:?}");
            for i in 0..=10 {
                let t = 1.0 + (r - 1.0) * i as f64 / 10.0;
                let fi = first_integral(
                    s.profile(t).unwrap(),
                    s.derivative(t).unwrap(),
                    t,
                    &s.params(),
                );
                assert!((fi - s.alpha()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn shoot_power_map() {
        let (a, b) = (0.9, 1.2);
        let p = EnergyParams::new(a, b, 2.0);
        let traj = shoot(0.0, &p, 2.0, 65).unwrap();
        let (t, h) = traj.radial_samples();
        assert_eq!(t.len(), 65);
        for (t, h) in t.iter().zip(&h) {
            assert!((h - math::powf(*t, b / a)).abs() < 1e-10);
        }
    }

    #[test]
    fn shoot_reproduces_reference() {
        let p = EnergyParams::new(1.0, 1.0, 2.0);
        let traj = shoot(-0.5376, &p, 1.5, 65).unwrap();
        assert!((traj.terminal().y - 1.25).abs() < 1e-8);
        assert!(traj.first_integral_variation() < 1e-9);
        let p1 = EnergyParams::new(1.0, 1.0, 1.0);
        let traj = shoot(3.0, &p1, E, 65).unwrap();
        assert!((traj.terminal().y - E * E).abs() < 1e-8);
    }

    #[test]
    fn shoot_agrees_with_closed_form() {
        for &(r, big_r, a, b, lambda) in &[
            (1.6, 1.8, 1.0, 1.4, -1.0),
            (2.0, 1.5, 1.3, 1.0, 0.5),
            (1.3, 1.6, 1.0, 1.0, 3.0),
        ] {
            let s = solution(r, big_r, a, b, lambda);
            let traj = shoot(s.alpha(), &s.params(), r, 101).unwrap();
            assert!(shooting_gap(&s, &traj).unwrap() < 1e-8);
            assert!(traj.first_integral_variation() < 1e-9);
        }
    }

    #[test]
    fn shoot_on_boundary() {
        for &lambda in &[2.0, 0.0, 3.0] {
            let p = EnergyParams::new(1.0, 1.0, lambda);
            let bound = nitsche_bound(1.25, &p).unwrap();
            let s = solution(bound, 1.25, 1.0, 1.0, lambda);
            let traj = shoot(s.alpha(), &p, bound, 65).unwrap();
            assert!(
                (traj.terminal().y - 1.25).abs() < 1e-8,
                "{}",
                traj.terminal().y
            );
        }
    }

    #[test]
    fn shoot_below_alpha_min_fails() {
        let p = EnergyParams::new(1.0, 1.0, 2.0);
        // alpha < alpha_min: the trajectory turns around before x = ln 2.
        assert!(matches!(
            shoot(-0.7, &p, 2.0, 33),
            Err(Error::RadicandNegative { .. })
        ));
        let p0 = EnergyParams::new(1.0, 1.0, 0.0);
        assert!(
            matches!(shoot(-1.5, &p0, 2.0, 33), Err(Error::RadicandNegative { x }) if x == 0.0)
        );
    }
}
