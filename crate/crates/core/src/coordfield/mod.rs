//! Symbolic vector fields on coordinate charts, Killing-field checks and a
//! degree-bounded linear Killing solver.

mod calculus;
mod expr;
mod field;
mod geometry;
mod killing;
mod points;

use thiserror::Error;

pub use calculus::{covariant_derivative, horizontal_laplacian};
pub use expr::{Monomial, SymExpr, VarKind};
pub use field::{bracket, Chart, FrameVectorField};
pub use geometry::CoordinateGeometry;
pub use killing::{
    ansatz_basis, conditions, frame_brackets, killing_check, killing_solve, linear_relations,
    same_span, span_dim, Ansatz, Condition, ConditionKind, KillingCheck, KillingMode,
    KillingSolution,
};
pub use points::{sample_points, SamplePoint};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoordError {
    #[error("vector fields live on different charts")]
    ChartMismatch,
    #[error("expected {expected} frame fields, found {found}")]
    FrameCount { expected: usize, found: usize },
    #[error("too many coordinates ({0})")]
    TooManyCoordinates(usize),
    #[error("grading does not sum to the dimension")]
    Grading,
    #[error("gram matrix has the wrong shape")]
    Gram,
    #[error("frame determinant {0} is not a nonzero constant")]
    NonUnitDeterminant(String),
    #[error("structure functions are not constant")]
    NonConstantStructure,
}
