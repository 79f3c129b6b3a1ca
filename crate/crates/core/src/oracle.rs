//! Brute-force minimizer of the discretized radial energy.
//!
//! Profiles are piecewise linear on a log-spaced grid with pinned endpoints.
//! Each segment contributes `2 pi w F(t_m, H_m, P)` where `w` is its width,
//! `t_m`, `H_m` are midpoint values and `P` is the slope:
//!
//! ```text
//! F(t, H, P) = a^2 t P^2 H^(-2 lambda) + (b^2 / t) H^(2 - 2 lambda)
//! ```
//!
//! Only neighbouring nodes interact, so the Hessian is tridiagonal and a
//! projected Newton iteration is cheap. Nothing here consults the closed form.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::extremal::ExtremalSolution;
use crate::math;
use crate::types::{log_grid, AnnulusPair, Config, EnergyParams, RadialProfile};

/// 64-bit linear congruential generator (Knuth's MMIX constants).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    const MUL: u64 = 6_364_136_223_846_793_005;
    const INC: u64 = 1_442_695_040_888_963_407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(Self::MUL).wrapping_add(Self::INC);
        self.state
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Discretization of the radial problem.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteProblem {
    annuli: AnnulusPair,
    params: EnergyParams,
    t_grid: Vec<f64>,
    /// Stop once the largest gradient component is at most this.
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
}

impl DiscreteProblem {
    pub fn new(config: &Config, n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidGrid("oracle needs at least 8 nodes"));
        }
        Ok(Self {
            annuli: config.annuli(),
            params: config.params(),
            t_grid: log_grid(config.r(), n),
            tol: 1e-11,
            seed: 42,
            max_iter: 200,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn n(&self) -> usize {
        self.t_grid.len()
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn annuli(&self) -> AnnulusPair {
        self.annuli
    }

    pub fn params(&self) -> EnergyParams {
        self.params
    }

    /// Power map `t^(ln R / ln r)`: linear in log-log coordinates between the pins.
    pub fn initial_guess(&self) -> Vec<f64> {
        let (r, big_r) = (self.annuli.domain_radius, self.annuli.target_radius);
        let k = math::ln(big_r) / math::ln(r);
        let mut h: Vec<f64> = self.t_grid.iter().map(|&t| math::powf(t, k)).collect();
        h[0] = 1.0;
        let last = h.len() - 1;
        h[last] = big_r;
        h
    }

    fn check(&self, h: &[f64]) -> Result<()> {
        if h.len() != self.n() {
            return Err(Error::InvalidGrid("profile length does not match the grid"));
        }
        if let Some(i) = h.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::MonotonicityViolation { index: i + 1 });
        }
        Ok(())
    }

    /// Partial derivatives of `F` at one segment midpoint.
    fn local(&self, i: usize, h: &[f64]) -> Local {
        let (a2, b2) = (
            self.params.normal_weight * self.params.normal_weight,
            self.params.tangential_weight * self.params.tangential_weight,
        );
        let lambda = self.params.lambda;
        let (t0, t1) = (self.t_grid[i], self.t_grid[i + 1]);
        let w = t1 - t0;
        let t = 0.5 * (t0 + t1);
        let hm = 0.5 * (h[i] + h[i + 1]);
        let p = (h[i + 1] - h[i]) / w;
        let pow = math::powf(hm, -2.0 * lambda);
        let kin = a2 * t * pow;
        let pot = b2 / t * pow * hm * hm;
        Local {
            w,
            f: kin * p * p + pot,
            f_p: 2.0 * kin * p,
            f_h: -2.0 * lambda * kin * p * p / hm + (2.0 - 2.0 * lambda) * pot / hm,
            f_pp: 2.0 * kin,
            f_ph: -4.0 * lambda * kin * p / hm,
            f_hh: 2.0 * lambda * (2.0 * lambda + 1.0) * kin * p * p / (hm * hm)
                + (2.0 - 2.0 * lambda) * (1.0 - 2.0 * lambda) * pot / (hm * hm),
        }
    }

    fn energy_unchecked(&self, h: &[f64]) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n() - 1 {
            let l = self.local(i, h);
            sum += l.w * l.f;
        }
        TAU * sum
    }

    /// Composite midpoint value of the radial energy for a piecewise-linear profile.
    pub fn discrete_energy(&self, h: &[f64]) -> Result<f64> {
        self.check(h)?;
        Ok(self.energy_unchecked(h))
    }

    /// Gradient with respect to the interior nodes `1..n-1` (index `i - 1`).
    pub fn gradient(&self, h: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut g = vec![0.0; n];
        for i in 0..n - 1 {
            let l = self.local(i, h);
            g[i] += 0.5 * l.w * l.f_h - l.f_p;
            g[i + 1] += 0.5 * l.w * l.f_h + l.f_p;
        }
        g[1..n - 1].iter().map(|v| TAU * v).collect()
    }

    /// Tridiagonal Hessian over the interior nodes as `(diag, off)`, `off[k]`
    /// coupling interior nodes `k` and `k + 1`.
    pub fn hessian(&self, h: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.n();
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n - 1];
        for i in 0..n - 1 {
            let l = self.local(i, h);
            let quarter = 0.25 * l.w * l.f_hh;
            let stiff = l.f_pp / l.w;
            diag[i] += quarter - l.f_ph + stiff;
            diag[i + 1] += quarter + l.f_ph + stiff;
            off[i] += quarter - stiff;
        }
        (
            diag[1..n - 1].iter().map(|v| TAU * v).collect(),
            off[1..n - 2].iter().map(|v| TAU * v).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy)]
struct Local {
    w: f64,
    f: f64,
    f_p: f64,
    f_h: f64,
    f_pp: f64,
    f_ph: f64,
    f_hh: f64,
}

/// Solve a symmetric tridiagonal system by LDL^T; `None` unless every pivot is
/// positive (the matrix is positive definite).
fn solve_tridiagonal_spd(diag: &[f64], off: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let m = diag.len();
    let mut d = vec![0.0; m];
    let mut l = vec![0.0; m];
    let mut z = vec![0.0; m];
    d[0] = diag[0];
    if !(d[0] > 0.0) {
        return None;
    }
    z[0] = rhs[0];
    for k in 1..m {
        l[k] = off[k - 1] / d[k - 1];
        d[k] = diag[k] - l[k] * off[k - 1];
        if !(d[k] > 0.0) {
            return None;
        }
        z[k] = rhs[k] - l[k] * z[k - 1];
    }
    let mut x = vec![0.0; m];
    x[m - 1] = z[m - 1] / d[m - 1];
    for k in (0..m - 1).rev() {
        x[k] = z[k] / d[k] - l[k + 1] * x[k + 1];
    }
    Some(x)
}

/// Least-squares non-decreasing fit (pool adjacent violators), equal weights.
pub fn isotonic_projection(values: &[f64]) -> Vec<f64> {
    let mut means: Vec<f64> = Vec::with_capacity(values.len());
    let mut counts: Vec<usize> = Vec::with_capacity(values.len());
    for &v in values {
        means.push(v);
        counts.push(1);
        while means.len() > 1 && means[means.len() - 2] > means[means.len() - 1] {
            let (m1, c1) = (means.pop().unwrap(), counts.pop().unwrap());
            let (m0, c0) = (means.pop().unwrap(), counts.pop().unwrap());
            let c = c0 + c1;
            means.push((m0 * c0 as f64 + m1 * c1 as f64) / c as f64);
            counts.push(c);
        }
    }
    means
        .iter()
        .zip(&counts)
        .flat_map(|(&m, &c)| core::iter::repeat_n(m, c))
        .collect()
}

/// Clamp interior values into `[1, R]` and project them onto non-decreasing
/// sequences. Returns `None` when the result is not strictly increasing.
fn project(h: &[f64], target_radius: f64) -> Option<Vec<f64>> {
    let n = h.len();
    let interior: Vec<f64> = h[1..n - 1]
        .iter()
        .map(|v| v.clamp(1.0, target_radius))
        .collect();
    let mut out = Vec::with_capacity(n);
    out.push(1.0);
    out.extend(isotonic_projection(&interior));
    out.push(target_radius);
    out.windows(2).all(|w| w[1] > w[0]).then_some(out)
}

/// Result of [`minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub profile: RadialProfile,
    pub energy: f64,
    pub iterations: usize,
    /// Largest gradient component at the returned profile.
    pub gradient_norm: f64,
    /// Discrete energy after each accepted iterate, starting with the initial guess.
    pub history: Vec<f64>,
}

impl OracleResult {
    /// Sup-norm distance to the closed form at the grid nodes.
    pub fn sup_norm_gap(&self, solution: &ExtremalSolution) -> Result<f64> {
        let mut worst = 0.0f64;
        for (&t, &h) in self.profile.t().iter().zip(self.profile.values()) {
            worst = worst.max((solution.profile(t)? - h).abs());
        }
        Ok(worst)
    }
}

/// Exported oracle summary.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleSummary {
    pub n: usize,
    pub iterations: usize,
    pub energy: f64,
    pub sup_norm_gap_to_closed_form: f64,
}

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACK: usize = 60;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Minimize the discrete energy from the log-log linear initial guess.
pub fn minimize(problem: &DiscreteProblem) -> Result<OracleResult> {
    minimize_from(problem, problem.initial_guess())
}

/// Projected Newton on the tridiagonal Hessian, with an Armijo line search
/// along the projected path. When the Hessian is not positive definite the
/// step falls back to the gradient scaled by the Hessian diagonal.
pub fn minimize_from(problem: &DiscreteProblem, start: Vec<f64>) -> Result<OracleResult> {
    problem.check(&start)?;
    let big_r = problem.annuli.target_radius;
    let n = problem.n();
    let mut h = start;
    let mut energy = problem.energy_unchecked(&h);
    let mut history = vec![energy];
    let mut iterations = 0;
    loop {
        let g = problem.gradient(&h);
        let g_norm = max_abs(&g);
        if g_norm <= problem.tol {
            return finish(problem, h, energy, iterations, g_norm, history);
        }
        if iterations >= problem.max_iter {
            return Err(Error::NoConvergence { iterations });
        }
        let (diag, off) = problem.hessian(&h);
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let direction = solve_tridiagonal_spd(&diag, &off, &neg_g).unwrap_or_else(|| {
            neg_g
                .iter()
                .zip(&diag)
                .map(|(v, d)| v / d.abs().max(f64::MIN_POSITIVE))
                .collect()
        });

        let mut step = 1.0;
        let mut accepted = None;
        let mut saw_valid = false;
        for _ in 0..MAX_BACKTRACK {
            let mut trial = h.clone();
            for k in 0..n - 2 {
                trial[k + 1] += step * direction[k];
            }
            if let Some(trial) = project(&trial, big_r) {
                saw_valid = true;
                let e = problem.energy_unchecked(&trial);
                let decrease: f64 = (0..n - 2).map(|k| g[k] * (trial[k + 1] - h[k + 1])).sum();
                if e <= energy + ARMIJO * decrease {
                    accepted = Some((trial, e));
                    break;
                }
            }
            step *= 0.5;
        }
        match accepted {
            Some((trial, e)) => {
                let motion = trial
                    .iter()
                    .zip(&h)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                h = trial;
                energy = e;
                history.push(e);
                iterations += 1;
                if motion <= 4.0 * f64::EPSILON * big_r {
                    let g_norm = max_abs(&problem.gradient(&h));
                    return finish(problem, h, energy, iterations, g_norm, history);
                }
            }
            None if !saw_valid => return Err(Error::MonotonicityLost),
            // No descent left at working precision: stationary.
            None => return finish(problem, h, energy, iterations, g_norm, history),
        }
    }
}

fn finish(
    problem: &DiscreteProblem,
    h: Vec<f64>,
    energy: f64,
    iterations: usize,
    gradient_norm: f64,
    history: Vec<f64>,
) -> Result<OracleResult> {
    let profile = RadialProfile::new(problem.annuli, problem.t_grid.clone(), h)?;
    Ok(OracleResult {
        profile,
        energy,
        iterations,
        gradient_norm,
        history,
    })
}

/// Closed form sampled on the problem grid, outer node pinned to `R`.
pub fn sample_closed_form(
    problem: &DiscreteProblem,
    solution: &ExtremalSolution,
) -> Result<Vec<f64>> {
    let mut h = problem
        .t_grid
        .iter()
        .map(|&t| solution.profile(t))
        .collect::<Result<Vec<_>>>()?;
    let last = h.len() - 1;
    h[last] = problem.annuli.target_radius;
    Ok(h)
}

/// Energy changes `E(H* + delta_i) - E(H*)` for `count` random pinned bumps
/// `delta_i = magnitude (R - 1) u sin(k pi xi) 4 xi (1 - xi)`, `xi = ln t / ln r`,
/// with mode `k` in `1..=4` and amplitude `|u|` in `[1/4, 1]` drawn from the
/// problem's generator.
pub fn perturbation_sweep(
    problem: &DiscreteProblem,
    solution: &ExtremalSolution,
    count: usize,
    magnitude: f64,
) -> Result<Vec<f64>> {
    let base = sample_closed_form(problem, solution)?;
    let e0 = problem.discrete_energy(&base)?;
    let span = math::ln(problem.annuli.domain_radius);
    let scale = magnitude * (problem.annuli.target_radius - 1.0);
    let xi: Vec<f64> = problem.t_grid.iter().map(|&t| math::ln(t) / span).collect();
    let mut rng = Lcg64::new(problem.seed);
    let mut deltas = Vec::with_capacity(count);
    for _ in 0..count {
        let mode = 1 + (rng.next_u64() >> 62) as usize;
        let u = 0.25 + 0.75 * rng.next_f64();
        let u = if rng.next_u64() >> 63 == 1 { -u } else { u };
        let perturbed: Vec<f64> = base
            .iter()
            .zip(&xi)
            .map(|(&h, &s)| h + scale * u * math::sin(mode as f64 * PI * s) * 4.0 * s * (1.0 - s))
            .collect();
        let e = problem.discrete_energy(&perturbed)?;
        deltas.push(e - e0);
    }
    Ok(deltas)
}
