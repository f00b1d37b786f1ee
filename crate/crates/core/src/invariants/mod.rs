//! Normality and rigidity flags, sub-Ricci curvature and the pointwise
//! Killing-field identities.

mod extension;
mod flags;
mod killing;
mod ricci;

pub use extension::{metric_extension_invariance, random_vertical_gram, ExtensionReport};
pub use flags::{classify, FlagReport, RigidityClass};
pub use killing::{
    check_pointwise_identities, conjugation_jet, operator_b_from_jet, right_invariant_jet,
    FrameField, IdentityReport, IdentityResult, SymbolicFrame, BOCHNER_TRACE, B_BRACKET,
    B_BRACKET_FLAT, B_BRACKET_FLAT_PLUS, CURVATURE_FROM_B, ELEMENTARY, LAPLACIAN_RICCI,
    VERTICAL_DERIVATIVE_SWAPPED, VERTICAL_FIELDS,
};
pub use ricci::{sub_ricci, trace_rm, SubRicci};
