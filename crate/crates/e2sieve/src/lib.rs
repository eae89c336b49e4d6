//! Exact machinery for the multidimensional sieve that bounds gaps between
//! E2 numbers (products of exactly two primes).
//!
//! Everything that feeds a certificate is computed over exact scalars:
//! arbitrary-precision rationals, and rational-linear combinations of the two
//! logarithms that survive the sieve's truncation limit. Floating point is
//! confined to heuristic search (eigenvector guesses, quadrature oracles);
//! every claimed inequality is re-established by exact arithmetic plus
//! directed-rounding interval enclosures of the logarithms.
//!
//! The crate is organised around the pipeline:
//!
//! * [`basis`]: the symmetric polynomial basis `(1 - P1)^b P2^c` and the
//!   combinatorial polynomials `Q_c` that integrate it over the simplex;
//! * [`forms`]: the five quadratic forms `I`, `J`, `L~`, `M~`, `J~` whose
//!   Rayleigh quotient is the quantity `R_k(F)`;
//! * [`optimizer`]: float eigenvector search, rationalisation, and exact
//!   certification of `R_k(F) > nu`;
//! * [`oracle`]: independent numerical quadrature used to cross-check the
//!   closed forms on desk-scale instances;
//! * [`tuples`]: admissible k-tuples, verification and search;
//! * [`scalars`]: the scalar types shared by all of the above.

pub mod basis;
pub mod forms;
pub mod optimizer;
pub mod oracle;
pub mod rational;
pub mod scalars;
pub mod tuples;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration or argument failed validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A string could not be parsed as the expected value.
    #[error("parse error: {0}")]
    Parse(String),
    /// A quadrature request exceeded the supported desk-scale limits.
    #[error("quadrature limit: {0}")]
    QuadratureLimit(String),
    /// A matrix expected to be positive definite was not.
    #[error("not positive definite: leading minor {index} has sign {sign}")]
    NotPositiveDefinite { index: usize, sign: i8 },
    /// A vector that must be nonzero was (numerically) zero.
    #[error("zero vector")]
    ZeroVector,
    /// No tuple is bundled for the requested dimension.
    #[error("no bundled tuple for k = {0}")]
    UnknownTuple(usize),
    /// A search exhausted its step budget without reaching its target.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Underlying JSON failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
