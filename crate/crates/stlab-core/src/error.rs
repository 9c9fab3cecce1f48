//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the laboratory.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input claimed Hermitian violates conjugate symmetry beyond tolerance.
    NonHermitianInput { max_defect: f64 },
    /// Eigen/singular value iteration did not converge within the sweep cap.
    ConvergenceFailure { index: usize },
    /// A sequence operation received an empty sequence.
    EmptySequence,
    /// Fit window contains fewer points than the minimum required.
    WindowTooSmall { points: usize, required: usize },
    /// Decay-exponent fit requires strictly positive values in the window.
    NonPositiveValues { index: usize },
    /// Lattice truncation would exceed the configured size cap.
    DimensionOverflow { requested: usize, cap: usize },
    /// The model kind does not realize symbols as operators.
    UnsupportedModel(String),
    /// Symbol is required to be positive but its oracle matrix is not.
    NotPositive { min_eigenvalue: f64 },
    /// Semiclassical count would be sensitive to the dropped lattice modes.
    TruncationUnsafe(String),
    /// Zeta grid point at or below the summability abscissa.
    GridBelowAbscissa { s: f64, p: f64 },
    /// Successive oracle truncations disagree beyond the requested tolerance.
    OracleNotConverged { difference: f64, tolerance: f64 },
    /// DOI parameters outside conditions (i)/(ii).
    ParameterRegionViolation(String),
    /// Quadrature failed to reach the requested tolerance.
    QuadratureDiverged { estimate: f64, error: f64 },
    /// Argument outside its admissible range.
    OutOfRange(String),
    /// Experiment configuration is invalid for its kind.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonHermitianInput { max_defect } => {
                write!(f, "input is not Hermitian (max defect {max_defect:.3e})")
            }
            Error::ConvergenceFailure { index } => {
                write!(f, "iteration cap exceeded at index {index}")
            }
            Error::EmptySequence => write!(f, "empty sequence"),
            Error::WindowTooSmall { points, required } => {
                write!(f, "fit window has {points} points, need at least {required}")
            }
            Error::NonPositiveValues { index } => {
                write!(f, "non-positive value at window index {index}")
            }
            Error::DimensionOverflow { requested, cap } => {
                write!(f, "truncation size {requested} exceeds cap {cap}")
            }
            Error::UnsupportedModel(what) => write!(f, "unsupported for this model: {what}"),
            Error::NotPositive { min_eigenvalue } => {
                write!(f, "symbol is not positive (min eigenvalue {min_eigenvalue:.3e})")
            }
            Error::TruncationUnsafe(why) => write!(f, "truncation-unsafe: {why}"),
            Error::GridBelowAbscissa { s, p } => {
                write!(f, "zeta grid point s = {s} at or below abscissa p = {p}")
            }
            Error::OracleNotConverged { difference, tolerance } => {
                write!(
                    f,
                    "oracle truncations differ by {difference:.3e} (tolerance {tolerance:.3e})"
                )
            }
            Error::ParameterRegionViolation(what) => {
                write!(f, "DOI parameters outside admissible region: {what}")
            }
            Error::QuadratureDiverged { estimate, error } => {
                write!(f, "quadrature error {error:.3e} too large (estimate {estimate:.3e})")
            }
            Error::OutOfRange(what) => write!(f, "out of range: {what}"),
            Error::InvalidConfig(what) => write!(f, "invalid config: {what}"),
        }
    }
}

impl core::error::Error for Error {}
