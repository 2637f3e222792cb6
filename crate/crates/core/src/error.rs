use thiserror::Error;

/// Errors reported by the numerical kernels.
///
/// Every variant names the operation and the offending input so that a
/// failure deep inside a sweep can be traced back to its parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: result left the finite floating-point range ({detail})")]
    NumericRange { op: &'static str, detail: String },

    #[error("{op}: invalid parameters: {detail}")]
    InvalidParams { op: &'static str, detail: String },

    #[error(
        "solve_cohomological: small divisor |e^(i*{mode}*step) - 1| = {divisor:e} \
         below floor {floor:e}"
    )]
    SmallDivisor { mode: i64, divisor: f64, floor: f64 },

    #[error("solve_cohomological: right-hand side has nonzero mean {mean:e}; no solution exists")]
    NonzeroMean { mean: f64 },

    #[error("{op}: vector ({x}, {y}) is not unit length")]
    NonUnitVector { op: &'static str, x: f64, y: f64 },

    #[error("{op}: matrix determinant {det} too far from 1")]
    NotUnimodular { op: &'static str, det: f64 },

    #[error("{op}: frequency must be an exact rational p/q for this operation")]
    RationalRequired { op: &'static str },

    #[error(
        "liouville_construct: denominator would exceed the exact-integer budget; \
         achieved level {achieved} of {requested}"
    )]
    IntegerBudget { achieved: usize, requested: usize },

    #[error("{op}: block of {steps} steps is beyond desk scale (limit {limit})")]
    BlockTooLong { op: &'static str, steps: u128, limit: u64 },

    #[error("rational_bands: band scan produced an empty set (lambda={lambda}, q={q})")]
    EmptyBands { lambda: f64, q: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
