use num_traits::Zero;
use serde::Serialize;

use crate::exact::{Rational, Vector};
use crate::liealg::{GradedLieGeometry, TorsionData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RigidityClass {
    TotallyRigid,
    VerticallyRigid,
    HorizontallyRigid,
    None,
}

impl RigidityClass {
    pub fn label(&self) -> &'static str {
        match self {
            Self::TotallyRigid => "totally rigid",
            Self::VerticallyRigid => "vertically rigid",
            Self::HorizontallyRigid => "horizontally rigid",
            Self::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagReport {
    pub h_normal: bool,
    pub v_normal: bool,
    pub strictly_normal: bool,
    /// `𝔯(E_a)` for each frame index.
    pub rigidity_tensor: Vector,
    pub rigidity_vector: Vector,
    pub rigidity_class: RigidityClass,
    pub vm_integrable: bool,
}

pub fn classify(geom: &GradedLieGeometry, tors: &TorsionData) -> FlagReport {
    let n = geom.dim();
    let tor = &tors.tor;
    let mut h_normal = true;
    let mut v_normal = true;
    for x in geom.horizontal() {
        for t in geom.vertical() {
            for k in 0..n {
                if !tor[[x, t, k]].is_zero() {
                    if geom.is_vertical(k) {
                        v_normal = false;
                    } else {
                        h_normal = false;
                    }
                }
            }
        }
    }
    // Orthonormal-frame trace of A ↦ ⟨Tor(·, A), ·⟩ over the block-diagonal
    // metric: Σ G⁻¹[i][j] ⟨Tor(E_i, A), E_j⟩ = Σ_i tor[i][a][i].
    let rigidity_tensor: Vector = (0..n)
        .map(|a| (0..n).map(|i| tor[[i, a, i]].clone()).sum::<Rational>())
        .collect();
    let rigidity_vector = geom.gram_inverse().mul_vector(&rigidity_tensor);
    let horizontal_part = rigidity_vector[geom.horizontal()]
        .iter()
        .any(|x| !x.is_zero());
    let vertical_part = rigidity_vector[geom.vertical()]
        .iter()
        .any(|x| !x.is_zero());
    let rigidity_class = match (horizontal_part, vertical_part) {
        (false, false) => RigidityClass::TotallyRigid,
        (false, true) => RigidityClass::VerticallyRigid,
        (true, false) => RigidityClass::HorizontallyRigid,
        (true, true) => RigidityClass::None,
    };
    FlagReport {
        h_normal,
        v_normal,
        strictly_normal: h_normal && v_normal,
        rigidity_tensor,
        rigidity_vector,
        rigidity_class,
        vm_integrable: geom.vertical_integrable(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{heisenberg, rototranslation, so, standard_entries};
    use crate::liealg::build_connection;

    fn flags(g: &GradedLieGeometry) -> FlagReport {
        let conn = build_connection(g).unwrap();
        classify(g, &crate::liealg::torsion(g, &conn))
    }

    #[test]
    fn heisenberg_flags() {
        for n in 1..=3 {
            let f = flags(&heisenberg(n));
            assert!(f.h_normal && f.v_normal && f.strictly_normal && f.vm_integrable);
            assert_eq!(f.rigidity_class, RigidityClass::TotallyRigid);
        }
    }

    #[test]
    fn so_is_strictly_normal() {
        for n in 3..=5 {
            assert!(flags(&so(n)).strictly_normal);
        }
    }

    #[test]
    fn rototranslation_is_not_h_normal() {
        let f = flags(&rototranslation());
        assert!(!f.h_normal);
        assert!(!f.strictly_normal);
    }

    #[test]
    fn report_invariants() {
        for e in standard_entries() {
            let f = flags(&e.lie());
            assert!(!f.strictly_normal || (f.h_normal && f.v_normal));
            let zero = f.rigidity_vector.iter().all(Zero::is_zero);
            assert_eq!(
                f.rigidity_class == RigidityClass::TotallyRigid,
                zero,
                "{}",
                e.name()
            );
        }
    }
}
