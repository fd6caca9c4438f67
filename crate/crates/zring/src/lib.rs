//! Exact integer arithmetic for the family of rings Z[x]/(x^2 - zx + 1),
//! written here as Z[i_z], together with a solver for the norm-form equation
//! x^2 + zxy + y^2 = M, prime classification relative to each ring, counting
//! and construction of positive primitive solutions, and witnesses showing
//! most of these rings fail unique factorization.
//!
//! Everything outside the CLI plot rendering is computed in arbitrary
//! precision; there is no floating point on any decision path.

pub mod classify;
pub mod cli;
pub mod count;
pub mod geometry;
pub mod oracle;
pub mod ring;
pub mod solver;
pub mod units;

pub use ring::{oriented_area, EmbeddingMatrix, ZContext, ZElem};

use num_bigint::BigInt;

/// Domain errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("denominator is a zero divisor (norm 0) in Z[i_{z}]")]
    ZeroDivisor { z: i64 },
    #[error("element has norm {norm}, expected level {expected}")]
    NormMismatch { norm: BigInt, expected: BigInt },
    #[error("level M = 0 is not accepted here")]
    ZeroLevel,
    #[error("anchor is degenerate (zero norm)")]
    DegenerateAnchor,
    #[error("operation undefined for z = {z}")]
    UnsupportedZ { z: i64 },
    #[error("line must satisfy the orientation convention (lambda2 >= 0, not both zero)")]
    BadLine,
    #[error("elements do not lie on a common branch")]
    BranchMismatch,
    #[error("|{p}| is not prime")]
    NotPrime { p: i64 },
    #[error("M = {m} is outside the gap 2-|z| < M < 2+|z|")]
    OutsideGap { m: BigInt },
    #[error("|M| <= 1 has no prime factorization to report")]
    TrivialLevel,
    #[error("trial division bound {bound} exhausted; remaining cofactor {cofactor}")]
    IncompleteFactorization { bound: u64, cofactor: BigInt },
    #[error("level M = {m} does not qualify: {reason}")]
    Disqualified { m: BigInt, reason: String },
    #[error("empty exponent range")]
    EmptyRange,
    #[error("invalid quadrant {0} (expected 1..=4)")]
    BadQuadrant(u8),
}

pub type Result<T> = std::result::Result<T, Error>;
