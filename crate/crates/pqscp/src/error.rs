//! Error type shared by the whole crate.

use num_bigint::BigUint;

/// Errors reported by parameter validation, the oracles, and the fast
/// evaluation paths.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A numeric argument is outside its documented domain
    /// (e.g. `p < 2`, `q <= p`, or `m = 0` where `m >= 1` is required).
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// `p` and `q` are multiplicatively dependent: both are integer powers
    /// of the same base, so `log_p q` is rational and the whole theory
    /// (which needs `{b * log_p q}` equidistributed) collapses.
    #[error("p = {p} and q = {q} are multiplicatively dependent (both are powers of {base})")]
    Dependent { p: u64, q: u64, base: u64 },

    /// An enumeration would produce more items than the caller's cap.
    #[error("enumeration of {needed} items exceeds the cap of {cap}")]
    CapExceeded { needed: BigUint, cap: u64 },

    /// An iterative computation (continued-fraction deepening, precision
    /// escalation, jump search) hit its budget before converging.
    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Malformed user input (unparsable decimal string, bad flag value).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line interface: `2` for domain
    /// and input errors, `3` for exhausted computation budgets.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OutOfRange(_) | Error::Dependent { .. } | Error::InvalidInput(_) => 2,
            Error::CapExceeded { .. } | Error::BudgetExceeded(_) => 3,
        }
    }
}
