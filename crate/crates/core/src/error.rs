use thiserror::Error;

/// Errors raised by the number-theoretic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The multiplicative order (and the Fermat quotient) is undefined when `p | a`.
    #[error("{p} divides {a}; the order of a modulo p is undefined")]
    DivisibleBase { a: String, p: String },

    /// Pollard-Brent rho exhausted its step budget on a composite cofactor.
    #[error("factorization budget exhausted after {steps} rho steps on composite cofactor {cofactor}")]
    FactorBudget { cofactor: String, steps: u64 },

    /// A structural theorem about cyclotomic values was contradicted.
    #[error("structural violation: {0}")]
    StructuralViolation(String),

    /// Two independent routes to the same quantity disagreed.
    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("no sign change found in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("prime {p} exceeds the sieve limit {limit}")]
    SieveLimit { p: u64, limit: u64 },
}

impl Error {
    pub(crate) fn divisible(a: impl ToString, p: impl ToString) -> Self {
        Error::DivisibleBase {
            a: a.to_string(),
            p: p.to_string(),
        }
    }

    /// True for errors that a larger computational budget could resolve.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::FactorBudget { .. } | Error::SieveLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
