use std::fmt;

/// Crate-wide error type.
///
/// Variants are grouped by the layer that raises them: document parsing,
/// Hecke-data validation, L-value evaluation, quadrature, polynomial
/// construction, root finding, and the perturbation scan.  `is_input_error`
/// distinguishes "the input data is bad" from "the computation failed",
/// which front ends map to different exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input document does not match any accepted schema.
    MalformedDocument(String),
    /// Structural invariant of the data is violated (bad discriminant,
    /// inconsistent multiplicativity, sign not in {-1,+1}, ...).
    InvariantViolation(String),
    /// Weight is odd or below the smallest supported value.
    UnsupportedWeight(u32),
    /// Hecke extension needs an eigenvalue at a prime ideal that the
    /// document does not list.
    MissingPrime(u64),
    /// A rational prime's splitting type in the field cannot be decided
    /// from the document.
    AmbiguousSplitClass(u64),
    /// A fixture does not carry the completed L-value at a required point.
    MissingLambda(u32),
    /// The normalising value at the top critical point vanishes, so the
    /// monic reduction is undefined.
    ZeroTopLambda,
    /// Zeta evaluation was requested at (or too close to) the pole s = 1.
    PoleAtOne,
    /// Argument outside the validity domain of a special function.
    DomainError(String),
    /// A quadrature did not reach the requested tolerance within its
    /// node budget.
    QuadratureNonConvergence(String),
    /// Coefficient data runs out before the truncation point needed for
    /// the requested accuracy.
    InsufficientCoefficients(String),
    /// An iteration (root finder, bracket search) failed to converge.
    NonConvergence(String),
    /// Leading polynomial coefficient is zero or negligibly small.
    DegenerateLeading,
    /// The perturbation family is already degenerate at t = 1, so no
    /// threshold bracket exists.
    DegenerateAtOne,
    /// The on-circle predicate changes more than once in each direction,
    /// so a single threshold interval does not describe the boundary.
    /// Carries the parameter values where flips were detected.
    NonMonotoneBoundary(Vec<f64>),
}

impl Error {
    /// True when the error indicates defective input rather than a
    /// numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::MalformedDocument(_)
                | Error::InvariantViolation(_)
                | Error::UnsupportedWeight(_)
                | Error::MissingPrime(_)
                | Error::AmbiguousSplitClass(_)
                | Error::MissingLambda(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedDocument(msg) => write!(f, "malformed document: {msg}"),
            Error::InvariantViolation(msg) => write!(f, "invariant violation: {msg}"),
            Error::UnsupportedWeight(k) => {
                write!(f, "unsupported weight {k}: need an even weight >= 4")
            }
            Error::MissingPrime(p) => {
                write!(f, "missing prime data above rational prime {p}")
            }
            Error::AmbiguousSplitClass(p) => write!(
                f,
                "cannot decide the splitting type of prime {p} from the document"
            ),
            Error::MissingLambda(s) => {
                write!(f, "fixture has no completed L-value at s = {s}")
            }
            Error::ZeroTopLambda => {
                write!(f, "completed L-value at s = k-1 vanishes; monic form undefined")
            }
            Error::PoleAtOne => write!(f, "zeta requested at its pole s = 1"),
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::QuadratureNonConvergence(msg) => {
                write!(f, "quadrature did not converge: {msg}")
            }
            Error::InsufficientCoefficients(msg) => {
                write!(f, "insufficient coefficients: {msg}")
            }
            Error::NonConvergence(msg) => write!(f, "iteration did not converge: {msg}"),
            Error::DegenerateLeading => write!(f, "leading coefficient is degenerate"),
            Error::DegenerateAtOne => {
                write!(f, "perturbation family is degenerate at t = 1")
            }
            Error::NonMonotoneBoundary(ts) => write!(
                f,
                "on-circle predicate flips more than once per side, near t = {ts:?}"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
