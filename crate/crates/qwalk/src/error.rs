use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Coin entries fail a unitarity invariant; carries the worst residual.
    #[error("matrix is not unitary (worst residual {residual:e})")]
    NotUnitary { residual: f64 },

    /// Qubit state is not normalized.
    #[error("qubit state is not normalized (residual {residual:e})")]
    NotNormalized { residual: f64 },

    /// A named-coin parameter is outside its admissible range.
    #[error("parameter {name} = {value} out of range {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// Operation requires all of a, b, c, d nonzero.
    #[error("coin has a zero entry; closed form requires abcd != 0")]
    CoinHasZeroEntry,

    /// Brute-force enumeration cap exceeded.
    #[error("path length {n} exceeds brute-force cap {cap}")]
    TooLarge { n: usize, cap: usize },

    /// Walk types of two arguments disagree.
    #[error("walk type mismatch")]
    TypeMismatch,

    /// Total probability drifted away from 1 beyond tolerance.
    #[error("probability total drifted to {total} (tolerance {tol:e})")]
    NormDrift { total: f64, tol: f64 },

    /// Index or argument outside the admissible range.
    #[error("argument out of range: {0}")]
    OutOfRange(&'static str),

    /// Closed form only available for the Hadamard coin.
    #[error("closed form is only available for the Hadamard coin")]
    UnsupportedCoin,

    /// Evaluation point hits a pole or branch degeneracy.
    #[error("evaluation point is singular")]
    SingularPoint,

    /// Division by (numerically) zero in a root formula.
    #[error("zero denominator in root formula")]
    ZeroDenominator,

    /// Coin / state specification string failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
