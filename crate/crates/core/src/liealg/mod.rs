//! Graded left-invariant frames, the canonical connection and its tensors.

mod connection;
mod filtration;
mod geometry;
mod tensor;
mod tensors;

pub use connection::{
    build_connection, uniqueness_defect, verify_connection, AxiomReport, Connection,
};
pub use filtration::{filtration, Filtration};
pub use geometry::{GradedLieGeometry, Violation};
pub use tensor::Tensor;
pub use tensors::{bianchi_failures, curvature, torsion, CurvatureData, TorsionData};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("invalid geometry: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("step torsion is defined for m >= 1")]
    BadStep,
}
