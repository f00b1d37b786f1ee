//! Exact rational scalars and linear algebra.

pub mod matrix;
pub mod rational;
pub mod reduce;
pub mod subspace;

pub use matrix::ExactMatrix;
pub use rational::{int, is_zero_vector, parse_rational, q, render, unit_vector, Rational, Vector};
pub use reduce::{sparse_row, RowReducer, SparseRow};
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("not a rational literal: {0:?}")]
    BadRational(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows of unequal length")]
    Ragged,
}
