//! Weighted combined energy, its closed forms, and the dual distortion functional.
//!
//! Radial integrals are taken in `x = ln t`, where `t dt dtheta` becomes
//! `t^2 dx dtheta` and the extremal integrands are smooth.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::alpha::radicand;
use crate::error::{Error, Result};
use crate::extremal::ExtremalSolution;
use crate::math;
use crate::quad::{Estimate, Quadrature};
use crate::types::{AnnulusPair, Branch, EnergyParams, PolarField};

/// How an energy value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    ClosedForm,
    RadialQuadrature,
    GridQuadrature,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::RadialQuadrature => "radial_quadrature",
            Method::GridQuadrature => "grid_quadrature",
        }
    }
}

/// An energy value with its provenance and error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyReport {
    pub value: f64,
    pub method: Method,
    pub est_error: f64,
}

impl EnergyReport {
    fn quadrature(est: Estimate, method: Method) -> Self {
        Self {
            value: est.value,
            method,
            est_error: est.error,
        }
    }

    pub fn relative_gap(&self, other: &EnergyReport) -> f64 {
        (self.value - other.value).abs() / self.value.abs().max(other.value.abs())
    }
}

/// Number of equal panels in `ln t` the adaptive quadrature starts from.
const INITIAL_PANELS: usize = 8;

fn log_breakpoints(hi: f64) -> Vec<f64> {
    let span = math::ln(hi);
    (0..=INITIAL_PANELS)
        .map(|i| span * i as f64 / INITIAL_PANELS as f64)
        .collect()
}

/// Integrate `g(t) dt / t` over `[1, hi]` as `int g(e^x) dx`, propagating the
/// first error `g` reports.
fn integrate_log<G>(quad: &Quadrature, hi: f64, mut g: G) -> Result<Estimate>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut first_err = None;
    let est = quad.integrate_panels(
        |x| {
            if first_err.is_some() {
                return 0.0;
            }
            // Keep quadrature nodes inside [1, hi] despite rounding in exp.
            let t = math::exp(x).clamp(1.0, hi);
            match g(t) {
                Ok(v) => v,
                Err(e) => {
                    first_err = Some(e);
                    0.0
                }
            }
        },
        &log_breakpoints(hi),
    );
    if let Some(e) = first_err {
        return Err(e);
    }
    est
}

/// `E = 2 pi int_1^r (a^2 t^2 H'^2 + b^2 H^2) / (t H^(2 lambda)) dt` for a radial map.
pub fn radial_energy<H, D>(
    profile: H,
    derivative: D,
    annuli: &AnnulusPair,
    params: &EnergyParams,
) -> Result<EnergyReport>
where
    H: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    radial_energy_with(profile, derivative, annuli, params, &Quadrature::default())
}

pub fn radial_energy_with<H, D>(
    profile: H,
    derivative: D,
    annuli: &AnnulusPair,
    params: &EnergyParams,
    quad: &Quadrature,
) -> Result<EnergyReport>
where
    H: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let (a2, b2) = squares(params);
    let lambda = params.lambda;
    let est = integrate_log(quad, annuli.domain_radius, |t| {
        let h = profile(t)?;
        let dh = derivative(t)?;
        Ok((a2 * t * t * dh * dh + b2 * h * h) * math::powf(h, -2.0 * lambda))
    })?;
    Ok(EnergyReport::quadrature(
        scale(est),
        Method::RadialQuadrature,
    ))
}

/// Radial energy of an extremal solution, evaluated by quadrature.
pub fn extremal_radial_energy(solution: &ExtremalSolution) -> Result<EnergyReport> {
    radial_energy(
        |t| solution.profile(t),
        |t| solution.derivative(t),
        &solution.annuli(),
        &solution.params(),
    )
}

fn squares(params: &EnergyParams) -> (f64, f64) {
    (
        params.normal_weight * params.normal_weight,
        params.tangential_weight * params.tangential_weight,
    )
}

fn scale(est: Estimate) -> Estimate {
    Estimate {
        value: TAU * est.value,
        error: TAU * est.error,
    }
}

/// Closed-form energy of the extremal map.
///
/// `lambda != 1`: `(2 pi a b / (lambda-1)) (sqrt(1 + alpha/b^2) - R^(-2(lambda-1)) sqrt(1 + R^(2(lambda-1)) alpha/b^2))`,
/// which is the familiar `R^-(lambda-1) sqrt(R^-2(lambda-1) + alpha/b^2)` term with
/// the radicand kept in fused form.
///
/// `lambda = 1`: `2 pi ln R (a^2 ln R / ln r + b^2 ln r / ln R)`.
pub fn closed_form_energy(solution: &ExtremalSolution) -> EnergyReport {
    let p = solution.params();
    let (a, b) = (p.normal_weight, p.tangential_weight);
    let value = match solution.branch() {
        Branch::LambdaEqOne => {
            let (ln_r, ln_big_r) = (math::ln(solution.r()), math::ln(solution.R()));
            TAU * ln_big_r * (a * a * ln_big_r / ln_r + b * b * ln_r / ln_big_r)
        }
        Branch::LambdaNeOne => {
            let lm1 = p.lambda - 1.0;
            let alpha = solution.alpha();
            let inner = math::sqrt(radicand(alpha, 1.0, &p).max(0.0));
            let outer = math::sqrt(radicand(alpha, solution.R(), &p).max(0.0));
            let decay = math::exp(-2.0 * lm1 * math::ln(solution.R()));
            TAU * a * b / lm1 * (inner - decay * outer)
        }
    };
    EnergyReport {
        value,
        method: Method::ClosedForm,
        est_error: 0.0,
    }
}

/// Weights of the periodic trapezoid rule on a (possibly non-uniform) angle grid.
fn angular_weights(theta: &[f64]) -> Vec<f64> {
    let m = theta.len();
    if m == 1 {
        return vec![TAU];
    }
    (0..m)
        .map(|j| {
            let next = if j + 1 == m {
                theta[0] + TAU
            } else {
                theta[j + 1]
            };
            let prev = if j == 0 {
                theta[m - 1] - TAU
            } else {
                theta[j - 1]
            };
            0.5 * (next - prev)
        })
        .collect()
}

/// Composite Simpson weights on arbitrary nodes. An odd number of intervals
/// closes with the one-interval quadratic rule on the last three nodes.
pub(crate) fn simpson_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    let pairs = (n - 1) / 2;
    for k in 0..pairs {
        let i = 2 * k;
        let (h0, h1) = (x[i + 1] - x[i], x[i + 2] - x[i + 1]);
        let s = (h0 + h1) / 6.0;
        w[i] += s * (2.0 - h1 / h0);
        w[i + 1] += s * (h0 + h1) * (h0 + h1) / (h0 * h1);
        w[i + 2] += s * (2.0 - h0 / h1);
    }
    if (n - 1) % 2 == 1 {
        let i = n - 3;
        let (h0, h1) = (x[i + 1] - x[i], x[i + 2] - x[i + 1]);
        w[i] += -h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
        w[i + 1] += h1 * h1 / (6.0 * h0) + 0.5 * h1;
        w[i + 2] += (h1 * h1 / 3.0 + 0.5 * h0 * h1) / (h0 + h1);
    }
    w
}

fn trapezoid_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = 0.5 * (x[i + 1] - x[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

/// Tensor-product rule over `A1`: periodic trapezoid in theta, Simpson in
/// `ln t` (area element `t^2 dx dtheta`). The error estimate is the gap to the
/// trapezoid rule in `ln t`, a deliberately loose bound.
fn grid_integrate<F>(field: &PolarField, mut density: F) -> Result<EnergyReport>
where
    F: FnMut(usize, f64) -> Result<f64>,
{
    let t = field.t_grid();
    let m = field.theta_grid().len();
    let ang = angular_weights(field.theta_grid());
    let x: Vec<f64> = t.iter().map(|&t| math::ln(t)).collect();
    let mut rows = Vec::with_capacity(t.len());
    for (i, &ti) in t.iter().enumerate() {
        let mut row = 0.0;
        for (j, w) in ang.iter().enumerate() {
            row += w * density(i * m + j, ti)?;
        }
        rows.push(row * ti * ti);
    }
    let dot = |w: Vec<f64>| w.iter().zip(&rows).map(|(w, r)| w * r).sum::<f64>();
    let simpson = dot(simpson_weights(&x));
    let trapezoid = dot(trapezoid_weights(&x));
    Ok(EnergyReport {
        value: simpson,
        method: Method::GridQuadrature,
        est_error: (simpson - trapezoid).abs(),
    })
}

fn derivative_samples(field: &PolarField) -> Result<(&[Complex64], &[Complex64])> {
    match (field.normal(), field.tangential()) {
        (Some(n), Some(t)) => Ok((n, t)),
        _ => Err(Error::MissingDerivatives),
    }
}

/// `E_lambda[h]` of a sampled map on a polar grid.
pub fn grid_energy(field: &PolarField, params: &EnergyParams) -> Result<EnergyReport> {
    let (hn, ht) = derivative_samples(field)?;
    let (a2, b2) = squares(params);
    let values = field.values();
    grid_integrate(field, |k, _| {
        let modulus = values[k].norm();
        Ok((a2 * hn[k].norm_sqr() + b2 * ht[k].norm_sqr())
            * math::powf(modulus, -2.0 * params.lambda))
    })
}

/// Weighted combined distortion
/// `K_lambda[h] = iint (a^2 rho^2 |grad Theta|^2 + b^2 |grad rho|^2) / (J |z|^(2 lambda)) dz`
/// of a sampled map `h = rho e^{i Theta}`.
///
/// The polar gradients come straight from the derivative samples: with
/// `u = e^{-i Theta} h_N` and `v = e^{-i Theta} h_T`,
/// `|grad rho|^2 = Re(u)^2 + Re(v)^2`, `rho^2 |grad Theta|^2 = Im(u)^2 + Im(v)^2`
/// and `J = Im(conj(h_N) h_T)`.
pub fn distortion_energy(field: &PolarField, params: &EnergyParams) -> Result<EnergyReport> {
    let (hn, ht) = derivative_samples(field)?;
    let (a2, b2) = squares(params);
    let values = field.values();
    grid_integrate(field, |k, t| {
        let jacobian = (hn[k].conj() * ht[k]).im;
        if !(jacobian > 0.0) {
            return Err(Error::NonPositiveJacobian { index: k, jacobian });
        }
        let phase = values[k].conj() / values[k].norm();
        let (u, v) = (phase * hn[k], phase * ht[k]);
        let angular = u.im * u.im + v.im * v.im;
        let radial = u.re * u.re + v.re * v.re;
        Ok((a2 * angular + b2 * radial) / (jacobian * math::powf(t, 2.0 * params.lambda)))
    })
}

/// `K_lambda` of a radial map `H(t) e^{i theta}`, for which the integrand reduces to
/// `a^2 H t^(-2 lambda) / H' + b^2 H' t^(2 - 2 lambda) / H` per unit `t dt dtheta / t`.
pub fn radial_distortion_energy<H, D>(
    profile: H,
    derivative: D,
    annuli: &AnnulusPair,
    params: &EnergyParams,
) -> Result<EnergyReport>
where
    H: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let (a2, b2) = squares(params);
    let lambda = params.lambda;
    let mut nodes = 0usize;
    let est = integrate_log(&Quadrature::default(), annuli.domain_radius, |t| {
        nodes += 1;
        let h = profile(t)?;
        let dh = derivative(t)?;
        let jacobian = dh * h / t;
        if !(jacobian > 0.0) {
            return Err(Error::NonPositiveJacobian {
                index: nodes - 1,
                jacobian,
            });
        }
        let weight = math::powf(t, -2.0 * lambda);
        // Extra factor t converts dt into t dx.
        Ok(t * (a2 * h * weight / dh + b2 * dh * t * t * weight / h))
    })?;
    Ok(EnergyReport::quadrature(
        scale(est),
        Method::RadialQuadrature,
    ))
}

/// `E_lambda[f]` for `f = h^{-1}: A2 -> A1` with `h` the extremal map,
/// `2 pi int_1^R (a^2 T'(s)^2 s^2 + b^2 T(s)^2) / (s T(s)^(2 lambda)) ds`, `T = H^{-1}`.
pub fn inverse_energy(solution: &ExtremalSolution) -> Result<EnergyReport> {
    let p = solution.params();
    let (a2, b2) = squares(&p);
    let est = integrate_log(&Quadrature::default(), solution.R(), |s| {
        let t = solution.inverse_profile(s)?;
        let dt = 1.0 / solution.derivative(t)?;
        Ok((a2 * dt * dt * s * s + b2 * t * t) * math::powf(t, -2.0 * p.lambda))
    })?;
    Ok(EnergyReport::quadrature(
        scale(est),
        Method::RadialQuadrature,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nitsche::nitsche_bound;
    use crate::types::{log_grid, validate, Config};
    use core::f64::consts::{E, PI};

    fn config(r: f64, big_r: f64, a: f64, b: f64, lambda: f64) -> Config {
        validate(AnnulusPair::new(r, big_r), EnergyParams::new(a, b, lambda)).unwrap()
    }

    fn solution(r: f64, big_r: f64, a: f64, b: f64, lambda: f64) -> ExtremalSolution {
        ExtremalSolution::solve(&config(r, big_r, a, b, lambda)).unwrap()
    }

    #[test]
    fn identity_map_energy() {
        let annuli = AnnulusPair::new(2.0, 2.0);
        let e = radial_energy(Ok, |_| Ok(1.0), &annuli, &EnergyParams::new(1.0, 1.0, 0.0)).unwrap();
        assert!((e.value - 6.0 * PI).abs() < 1e-12);
        assert_eq!(e.method, Method::RadialQuadrature);
    }

    #[test]
    fn power_map_energy() {
        // 2 pi a b / (1 - lambda) (r^(2b(1-lambda)/a) - 1)
        for &(r, a, b, lambda) in &[
            (2.0, 1.0, 1.0, 2.0),
            (1.7, 0.6, 1.3, -0.5),
            (3.0, 1.2, 0.9, 0.3),
        ] {
            let k = b / a;
            let annuli = AnnulusPair::new(r, math::powf(r, k));
            let e = radial_energy(
                |t| Ok(math::powf(t, k)),
                |t| Ok(k * math::powf(t, k - 1.0)),
                &annuli,
                &EnergyParams::new(a, b, lambda),
            )
            .unwrap();
            let want =
                TAU * a * b / (1.0 - lambda) * (math::powf(r, 2.0 * b * (1.0 - lambda) / a) - 1.0);
            assert!(
                (e.value - want).abs() <= 1e-11 * want.abs(),
                "{} vs {want}",
                e.value
            );
        }
        let e = radial_energy(
            Ok,
            |_| Ok(1.0),
            &AnnulusPair::new(2.0, 2.0),
            &EnergyParams::new(1.0, 1.0, 2.0),
        )
        .unwrap();
        assert!((e.value - 4.712_388_980_384_69).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let s = solution(E, E * E, 1.0, 1.0, 1.0);
        assert!((closed_form_energy(&s).value - 10.0 * PI).abs() < 1e-12);
        let cfg = config(2.0, 2.0, 1.0, 1.0, 2.0);
        let s = ExtremalSolution::new(&cfg, 0.0).unwrap();
        assert!((closed_form_energy(&s).value - 1.5 * PI).abs() < 1e-12);
        // High-precision reference from an independent quadrature in y.
        let s = solution(1.5, 1.25, 1.0, 1.0, 2.0);
        assert!((closed_form_energy(&s).value - 2.664_070_570_244_145).abs() < 1e-10);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for &(r, big_r, a, b, lambda) in &[
            (1.5, 1.25, 1.0, 1.0, 2.0),
            (1.9, 1.25, 1.0, 1.0, 0.0),
            (1.6, 1.8, 1.0, 1.4, -1.0),
            (2.0, 1.5, 1.3, 1.0, 0.5),
            (1.3, 1.6, 1.0, 1.0, 3.0),
            (2.0, 3.0, 0.7, 1.1, 1.0),
        ] {
            let s = solution(r, big_r, a, b, lambda);
            let closed = closed_form_energy(&s);
            let quad = extremal_radial_energy(&s).unwrap();
            assert!(
                closed.relative_gap(&quad) < 1e-8,
                "{lambda}: {} vs {}",
                closed.value,
                quad.value
            );
        }
    }

    #[test]
    fn closed_form_matches_quadrature_on_boundary() {
        for &lambda in &[2.0, 0.0] {
            let p = EnergyParams::new(1.0, 1.0, lambda);
            let bound = nitsche_bound(1.25, &p).unwrap();
            let s = solution(bound, 1.25, 1.0, 1.0, lambda);
            let closed = closed_form_energy(&s);
            let quad = extremal_radial_energy(&s).unwrap();
            assert!(closed.relative_gap(&quad) < 1e-8);
        }
    }

    #[test]
    fn grid_energy_matches_radial_and_is_rotation_invariant() {
        let s = solution(1.5, 1.25, 1.0, 1.0, 2.0);
        let radial = closed_form_energy(&s).value;
        let field = |beta| {
            s.polar_field(beta, log_grid(1.5, 1025), PolarField::uniform_theta(32))
                .unwrap()
        };
        let e0 = grid_energy(&field(0.0), &s.params()).unwrap();
        assert!(
            (e0.value - radial).abs() < 1e-8 * radial,
            "{} vs {radial}",
            e0.value
        );
        for beta in [PI / 3.0, PI] {
            let e = grid_energy(&field(beta), &s.params()).unwrap();
            assert!((e.value - e0.value).abs() <= 1e-12 * e0.value);
        }
    }

    #[test]
    fn perturbed_field_costs_more() {
        let s = solution(1.5, 1.25, 1.0, 1.0, 2.0);
        let closed = closed_form_energy(&s).value;
        let ln_r = math::ln(1.5);
        // Radial bump pinned at both rings plus an angular twist.
        let field = PolarField::from_fn(
            log_grid(1.5, 1025),
            PolarField::uniform_theta(32),
            |t, theta| {
                let xi = math::ln(t) / ln_r;
                let bump = 0.02 * math::sin(PI * xi);
                let dbump = 0.02 * PI * math::cos(PI * xi) / (ln_r * t);
                let twist = 0.05 * math::sin(PI * xi) * math::sin(theta);
                let dtwist_t = 0.05 * PI * math::cos(PI * xi) * math::sin(theta) / (ln_r * t);
                let dtwist_theta = 0.05 * math::sin(PI * xi) * math::cos(theta);
                let h = s.profile(t)? + bump;
                let dh = s.derivative(t)? + dbump;
                let phase = Complex64::from_polar(1.0, theta + twist);
                let hn = phase * Complex64::new(dh, h * dtwist_t);
                let ht = phase * Complex64::new(0.0, h * (1.0 + dtwist_theta) / t);
                Ok((phase * h, hn, ht))
            },
        )
        .unwrap();
        let e = grid_energy(&field, &s.params()).unwrap();
        assert!(e.value > closed + 1e-6);
    }

    #[test]
    fn missing_derivatives() {
        let t = log_grid(1.5, 5);
        let n = t.len() * 4;
        let field = PolarField::new(
            t,
            PolarField::uniform_theta(4),
            vec![Complex64::new(1.0, 0.0); n],
            None,
            None,
        )
        .unwrap();
        let p = EnergyParams::new(1.0, 1.0, 0.0);
        assert_eq!(grid_energy(&field, &p), Err(Error::MissingDerivatives));
        assert_eq!(
            distortion_energy(&field, &p),
            Err(Error::MissingDerivatives)
        );
    }

    #[test]
    fn identity_distortion() {
        // h = identity, lambda = 0, a = b = 1, r = R = 2: integrand 2/t^0 * t dt -> 2 pi * 3 = 6 pi.
        let annuli = AnnulusPair::new(2.0, 2.0);
        let p = EnergyParams::new(1.0, 1.0, 0.0);
        let k = radial_distortion_energy(Ok, |_| Ok(1.0), &annuli, &p).unwrap();
        assert!((k.value - 6.0 * PI).abs() < 1e-12);
        let field = PolarField::from_fn(
            log_grid(2.0, 257),
            PolarField::uniform_theta(8),
            |t, theta| {
                let phase = Complex64::from_polar(1.0, theta);
                Ok((phase * t, phase, phase * Complex64::new(0.0, 1.0)))
            },
        )
        .unwrap();
        let kg = distortion_energy(&field, &p).unwrap();
        assert!((kg.value - 6.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn duality_of_extremal() {
        for &(r, big_r, a, b, lambda) in &[
            (1.5, 1.25, 1.0, 1.0, 2.0),
            (1.6, 1.8, 1.0, 1.4, -1.0),
            (2.0, 3.0, 1.0, 1.0, 1.0),
        ] {
            let s = solution(r, big_r, a, b, lambda);
            let k = radial_distortion_energy(
                |t| s.profile(t),
                |t| s.derivative(t),
                &s.annuli(),
                &s.params(),
            )
            .unwrap();
            let e = inverse_energy(&s).unwrap();
            assert!(k.relative_gap(&e) < 1e-7, "{} vs {}", k.value, e.value);
            let field = s
                .polar_field(0.4, log_grid(r, 1025), PolarField::uniform_theta(16))
                .unwrap();
            let kg = distortion_energy(&field, &s.params()).unwrap();
            assert!(kg.relative_gap(&k) < 1e-8);
        }
    }

    #[test]
    fn inverse_energy_of_power_map() {
        // T(s) = s^(a/b): 2 pi (a^4/b^2 + b^2) b / (2a(1-lambda)) (R^(2a(1-lambda)/b) - 1).
        let (a, b, lambda, big_r) = (0.8, 1.1, 2.5, 1.6);
        let cfg = config(math::powf(big_r, a / b), big_r, a, b, lambda);
        let s = ExtremalSolution::new(&cfg, 0.0).unwrap();
        let e = inverse_energy(&s).unwrap();
        let want = TAU * (a * a * a * a / (b * b) + b * b) * b / (2.0 * a * (1.0 - lambda))
            * (math::powf(big_r, 2.0 * a * (1.0 - lambda) / b) - 1.0);
        assert!(
            (e.value - want).abs() < 1e-10 * want,
            "{} vs {want}",
            e.value
        );
    }

    #[test]
    fn flipped_jacobian_is_rejected() {
        let s = solution(1.5, 1.25, 1.0, 1.0, 2.0);
        let mut field = s
            .polar_field(0.0, log_grid(1.5, 33), PolarField::uniform_theta(8))
            .unwrap();
        let k = field.index(5, 3);
        field.tangential_mut().unwrap()[k] *= -1.0;
        assert!(matches!(
            distortion_energy(&field, &s.params()),
            Err(Error::NonPositiveJacobian { index, .. }) if index == k
        ));
        let bad = radial_distortion_energy(Ok, |_| Ok(-1.0), &s.annuli(), &s.params());
        assert!(matches!(bad, Err(Error::NonPositiveJacobian { .. })));
    }

    #[test]
    fn simpson_weights_are_exact_for_cubics() {
        let x = [0.0, 0.1, 0.35, 0.5, 0.9, 1.0];
        let w = simpson_weights(&x);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((integral - 1.0 / 3.0).abs() < 1e-14);
        let x = [0.0, 0.25, 0.5, 0.75, 1.0];
        let w = simpson_weights(&x);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x * x).sum();
        assert!((integral - 0.25).abs() < 1e-15);
    }
}
