//! Exact rational scalars, dense matrices, and the small linear-algebra
//! kernel (inversion, solving, Gram matrices, interpolation) used by the
//! geometry modules.

mod matrix;
mod poly;
pub mod rational;

pub use matrix::{
    determinant, dot, gram, is_positive_definite, mat_invert, solve, RatMatrix, RatVector,
};
pub use poly::{lagrange_interpolate, Polynomial};
pub use rational::{int, parse_rational, rat, to_pq, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("matrix is singular")]
    Singular,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system does not have full column rank")]
    RankDeficient,
    #[error("interpolation abscissae are not distinct")]
    DuplicateAbscissa,
    #[error("operand dimensions do not match")]
    DimensionMismatch,
}
