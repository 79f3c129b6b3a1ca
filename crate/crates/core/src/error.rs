use core::fmt;

/// Everything that can go wrong while building or checking an extremal map.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An annulus outer radius is not strictly greater than 1.
    DegenerateAnnulus { radius: f64 },
    /// One of the derivative weights is not strictly positive.
    NonPositiveWeight { weight: f64 },
    /// A parameter is NaN or infinite.
    NonFinite { name: &'static str },
    /// `r` exceeds the Nitsche-type bound for this target radius.
    Infeasible { r: f64, bound: f64 },
    /// `alpha` lies below the smallest admissible first-integral constant.
    OutOfDomain { alpha: f64, alpha_min: f64 },
    /// The requested operation has no meaning on the `lambda = 1` branch.
    LambdaOne,
    /// The operation needs the `lambda = 1` branch but `lambda` is something else.
    BranchMismatch { lambda: f64 },
    /// `lambda` is within `1e-9` of 1 without being exactly 1.
    NearLambdaOne { lambda: f64 },
    /// An iterative method hit its iteration cap.
    NoConvergence { iterations: usize },
    /// A coordinate lies outside the interval the evaluator is defined on.
    OutOfRange { value: f64, lo: f64, hi: f64 },
    /// The closed-form denominator vanished or went negative.
    DegenerateDenominator { t: f64 },
    /// Adaptive quadrature could not reach the requested tolerance.
    QuadratureFailure { estimate: f64, error: f64 },
    /// A polar field has no derivative samples.
    MissingDerivatives,
    /// The Jacobian is not positive at a quadrature node.
    NonPositiveJacobian { index: usize, jacobian: f64 },
    /// A shooting trajectory left the admissible region (slope turned negative).
    RadicandNegative { x: f64 },
    /// The ODE integrator could not take a step.
    StepFailure { x: f64 },
    /// Profile values are not strictly increasing.
    MonotonicityViolation { index: usize },
    /// Isotonic projection could not restore a strictly increasing profile.
    MonotonicityLost,
    /// Malformed grid or sample array.
    InvalidGrid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateAnnulus { radius } => {
                write!(f, "degenerate annulus: outer radius {radius} must exceed 1")
            }
            Error::NonPositiveWeight { weight } => {
                write!(f, "weight {weight} must be strictly positive")
            }
            Error::NonFinite { name } => write!(f, "parameter `{name}` is not finite"),
            Error::Infeasible { r, bound } => {
                write!(f, "infeasible: r = {r} exceeds the Nitsche-type bound {bound}")
            }
            Error::OutOfDomain { alpha, alpha_min } => {
                write!(f, "alpha = {alpha} is below the admissible minimum {alpha_min}")
            }
            Error::LambdaOne => f.write_str("operation undefined for lambda = 1"),
            Error::BranchMismatch { lambda } => {
                write!(f, "operation requires lambda = 1, got {lambda}")
            }
            Error::NearLambdaOne { lambda } => write!(
                f,
                "lambda = {lambda} is too close to 1; pass lambda = 1 exactly for the logarithmic branch"
            ),
            Error::NoConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::OutOfRange { value, lo, hi } => {
                write!(f, "{value} lies outside [{lo}, {hi}]")
            }
            Error::DegenerateDenominator { t } => {
                write!(f, "closed-form denominator is not positive at t = {t}")
            }
            Error::QuadratureFailure { estimate, error } => write!(
                f,
                "quadrature failed to converge (estimate {estimate}, error {error})"
            ),
            Error::MissingDerivatives => f.write_str("field lacks derivative samples"),
            Error::NonPositiveJacobian { index, jacobian } => {
                write!(f, "non-positive Jacobian {jacobian} at node {index}")
            }
            Error::RadicandNegative { x } => {
                write!(f, "trajectory left the admissible region at x = {x}")
            }
            Error::StepFailure { x } => write!(f, "step size underflow at x = {x}"),
            Error::MonotonicityViolation { index } => {
                write!(f, "profile is not strictly increasing at node {index}")
            }
            Error::MonotonicityLost => f.write_str("projection lost strict monotonicity"),
            Error::InvalidGrid(what) => write!(f, "invalid grid: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
