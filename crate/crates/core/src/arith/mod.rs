//! Exact integer and rational arithmetic, fraction-free linear algebra, an
//! exact simplex solver and high-precision reals for logarithmic formulas.

mod combin;
pub mod lp;
mod matrix;
mod real;

pub use combin::binomial;
pub use lp::{lp_solve, lp_solve_int, nonneg_combination_exists, separating_certificate, Constraint, LpOutcome, Relation};
pub use matrix::{det, max_abs_minor, rank, IntMatrix};
pub use real::{Real, DEFAULT_PRECISION};

/// Integer coefficient type for the elimination kernels: `i128` when the
/// magnitudes are known to fit, `Int` otherwise.
pub(crate) trait Coef:
    Clone
    + std::fmt::Debug
    + num_integer::Integer
    + num_traits::Signed
    + From<i64>
    + Into<Int>
    + Send
    + Sync
{
    fn from_int(x: &Int) -> Option<Self>;
}

impl Coef for i128 {
    fn from_int(x: &Int) -> Option<Self> {
        num_traits::ToPrimitive::to_i128(x)
    }
}

impl Coef for Int {
    fn from_int(x: &Int) -> Option<Self> {
        Some(x.clone())
    }
}

/// Arbitrary-precision signed integer.
pub type Int = num_bigint::BigInt;
/// Exact rational in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("matrix data has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("minor order {k} out of range for a {rows}x{cols} matrix")]
    MinorOrder { k: usize, rows: usize, cols: usize },
    #[error("logarithm of non-positive value {0}")]
    NonPositiveLog(Rat),
    #[error("square root of a negative value")]
    NegativeSqrt,
    #[error("division by zero")]
    DivisionByZero,
}
