//! Extremal radial mappings for the weighted combined energy
//!
//! ```text
//! E_lambda[h] = iint_{A1} (a^2 |h_N|^2 + b^2 |h_T|^2) / |h|^(2 lambda) dz
//! ```
//!
//! between the annuli `A1 = {1 <= |z| <= r}` and `A2 = {1 <= |w| <= R}`.
//!
//! The crate builds the minimizing radial map in closed form and checks it
//! several independent ways:
//!
//! * [`nitsche`]: the feasibility bound on `r` for given `R, a, b, lambda`.
//! * [`alpha`]: the first-integral constant `alpha` via bisection on `phi`.
//! * [`extremal`]: the closed-form profile, its derivatives and inverses.
//! * [`energy`]: closed-form, radial and polar-grid energies, and the dual
//!   distortion functional.
//! * [`verify`]: Euler–Lagrange residuals, first-integral conservation and
//!   initial-value shooting.
//! * [`oracle`]: a brute-force minimizer of the discretized radial energy that
//!   never looks at the closed form.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod math;

pub mod alpha;
pub mod energy;
pub mod error;
pub mod extremal;
pub mod nitsche;
pub mod ode;
pub mod oracle;
pub mod quad;
pub mod root;
pub mod types;
pub mod verify;

pub use alpha::{
    alpha_for_lambda1, alpha_min, phi, solve_alpha, AlphaBracket, AlphaRoot, AlphaSolver,
};
pub use error::{Error, Result};
pub use extremal::{ExtremalSolution, Jet};
pub use nitsche::{is_feasible, nitsche_bound, Feasibility};
pub use num_complex::Complex64;
pub use oracle::{
    minimize, perturbation_sweep, DiscreteProblem, Lcg64, OracleResult, OracleSummary,
};
pub use types::{
    log_grid, validate, AnnulusPair, Branch, Config, EnergyParams, PolarField, RadialProfile,
};
