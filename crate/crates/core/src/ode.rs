//! Dormand–Prince 5(4) with adaptive step control for small autonomous-or-not
//! systems `y' = f(x, y)` with a fixed-size state.

use crate::error::{Error, Result};
use crate::math;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order solution minus embedded fourth-order solution.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Step-size controller settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub safety: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-12,
            max_steps: 200_000,
            safety: 0.9,
        }
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl Dopri5 {
    /// Advance `y` from `x0` to `x1`, calling `accept(x, &y)` after every accepted
    /// step. `accept` may abort the integration by returning an error.
    pub fn integrate<const N: usize, F, A>(
        &self,
        mut f: F,
        x0: f64,
        x1: f64,
        y0: [f64; N],
        mut accept: A,
    ) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        A: FnMut(f64, &[f64; N]) -> Result<()>,
    {
        let span = x1 - x0;
        if span == 0.0 {
            return Ok(y0);
        }
        let dir = span.signum();
        let mut x = x0;
        let mut y = y0;
        let mut k1 = f(x, &y);
        let mut h = dir * (span.abs() * 1e-3).max(1e-8).min(span.abs());
        let mut err_prev: f64 = 1e-4;
        for _ in 0..self.max_steps {
            if (x1 - x) * dir <= 0.0 {
                return Ok(y);
            }
            if (x + h - x1) * dir > 0.0 {
                h = x1 - x;
            }
            let k2 = f(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                x + C4 * h,
                &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                x + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                x + h,
                &axpy(
                    &y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f(x + h, &y_new);

            let mut err = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / scale) * (e / scale);
            }
            let err = math::sqrt(err / N as f64);

            if err.is_finite() && err <= 1.0 {
                let tiny = 16.0 * f64::EPSILON * x1.abs().max(1.0);
                x = if (x + h - x1) * dir >= -tiny {
                    x1
                } else {
                    x + h
                };
                y = y_new;
                k1 = k7;
                accept(x, &y)?;
                // PI controller (Hairer's beta = 0.04).
                let err_c = err.max(1e-10);
                let fac = self.safety * math::powf(err_c, -0.17) * math::powf(err_prev, 0.04);
                h *= fac.clamp(0.2, 10.0);
                err_prev = err_c;
            } else {
                let fac = if err.is_finite() {
                    (self.safety * math::powf(err, -0.2)).max(0.2)
                } else {
                    0.1
                };
                h *= fac;
                if h.abs() <= 16.0 * f64::EPSILON * x.abs().max(1.0) {
                    return Err(Error::StepFailure { x });
                }
            }
        }
        Err(Error::NoConvergence {
            iterations: self.max_steps,
        })
    }
}
