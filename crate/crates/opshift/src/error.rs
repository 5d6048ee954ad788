use thiserror::Error;

use crate::equivalence::EquivalenceReport;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by the whole toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix entries must be finite")]
    NonFiniteEntries,

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("weight description must contain at least one matrix")]
    EmptyDescription,

    #[error(
        "weight at index {index} is numerically singular \
         (relative smallest singular value {ratio:.3e} <= {eps:.3e})"
    )]
    WeightNotInvertible { index: i64, ratio: f64, eps: f64 },

    #[error("modulus is numerically singular (relative smallest singular value {ratio:.3e})")]
    SingularModulus { ratio: f64 },

    #[error("window {window} too small: {context}")]
    WindowTooSmall { window: i64, context: String },

    #[error("block index ({row}, {col}) lies outside window [-{window}, {window}]")]
    BlockOutsideWindow { row: i64, col: i64, window: i64 },

    #[error("column map is not an isometry (defect {defect:.3e} > tol {tol:.3e})")]
    IsometryViolation { defect: f64, tol: f64 },

    #[error("column support lists row {row} twice")]
    DuplicateSupportRow { row: i64 },

    #[error("zeroth-column verification failed; refusing to assemble the unitary")]
    PreconditionFailed { report: Box<EquivalenceReport> },

    #[error("operator is not unitary within tolerance (defect {defect:.3e} > tol {tol:.3e})")]
    NotUnitary { defect: f64, tol: f64 },

    #[error(
        "weights at {first} and {second} do not commute (relative commutator norm {defect:.3e})"
    )]
    NotCommuting {
        first: i64,
        second: i64,
        defect: f64,
    },

    #[error("weight at {index} has eigenvalue gap below the usable threshold")]
    DegenerateSpectrum { index: i64 },

    #[error("weight at {index} is not positive definite within tolerance")]
    NotPositive { index: i64 },

    #[error("no (sigma, tau) match within range {tau_range}; inconclusive at this range")]
    NoMatch { tau_range: i64 },

    #[error("constructed column failed verification")]
    VerificationFailed { report: Box<EquivalenceReport> },

    #[error("dimension k must be at least 2 (got {k})")]
    InvalidK { k: usize },

    #[error("grid window [{lo}, {hi}] is too short for k = {k}")]
    GridTooShort { lo: i64, hi: i64, k: usize },

    #[error("grid values must be pairwise distinct (value {value} repeats within gap {gap:.3e})")]
    DistinctnessViolated { value: f64, gap: f64 },

    #[error("weights are not in the diagonal positive example shape: {reason}")]
    NotExampleShape { reason: String },
}
