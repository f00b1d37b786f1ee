//! Upper and lower bounds on the dimension of the Killing algebra.

mod decomposition;
mod linear;

use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use decomposition::{torsion_decomposition, torsion_kernel, TorsionDecomposition};

use crate::exact::{unit_vector, ExactMatrix, Rational, Subspace, Vector};
use crate::liealg::{
    build_connection, filtration, torsion, GradedLieGeometry, LieError, TorsionData,
};
use linear::{
    act, constrained_dim, constrained_kernel, embed, rank_of, skew_basis, torsion_derivation_defect,
};

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("grading is not regular")]
    NotRegular,
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// `m + k(k+1)/2` with `k = dim H`, `m = dim V`.
pub fn crude_bound(geom: &GradedLieGeometry) -> usize {
    geom.vertical_dim() + crude_isotropy(geom) + geom.horizontal_dim()
}

/// `k(k-1)/2`, the dimension of `skew(H)`.
pub fn crude_isotropy(geom: &GradedLieGeometry) -> usize {
    let k = geom.horizontal_dim();
    k * k.saturating_sub(1) / 2
}

/// `span Tor(H, H)`.
pub fn torsion_image(geom: &GradedLieGeometry, tors: &TorsionData) -> Subspace {
    let n = geom.dim();
    let mut vectors = Vec::new();
    for i in geom.horizontal() {
        for j in geom.horizontal().filter(|&j| j > i) {
            vectors.push(tors.apply(&unit_vector(n, i), &unit_vector(n, j)));
        }
    }
    Subspace::span(n, vectors)
}

/// Conditions on `A ∈ skew(H)` shared by the commutant bounds: `A` is a
/// derivation of `Tor|_{H×H}` and, for a strong decomposition, preserves the blocks.
fn commutant_conditions(
    geom: &GradedLieGeometry,
    tors: &TorsionData,
    decomp: &TorsionDecomposition,
    a: &ExactMatrix,
) -> Vector {
    let mut out = torsion_derivation_defect(geom, tors, a);
    if decomp.strong {
        for (p, bp) in decomp.blocks.iter().enumerate() {
            for w in bp.basis() {
                let aw = act(geom, a, w);
                for (r, br) in decomp.blocks.iter().enumerate() {
                    if r != p {
                        out.extend(br.basis().iter().map(|u| geom.inner(&aw, u)));
                    }
                }
            }
        }
    }
    out
}

/// Bound on the isotropy fixing `V¹` pointwise: skew-adjoint `A` on `H` with
/// `Tor(AX, Y) + Tor(X, AY) = 0`, blockwise when the decomposition is strong.
pub fn commutant_bound(
    geom: &GradedLieGeometry,
    tors: &TorsionData,
    decomp: &TorsionDecomposition,
) -> usize {
    constrained_dim(&skew_basis(geom), |a| {
        commutant_conditions(geom, tors, decomp, a)
    })
}

/// `X ↦ π⁰ Tor(U, X)` on `H` as a `k × k` matrix.
pub fn vertical_torsion_operator(
    geom: &GradedLieGeometry,
    tors: &TorsionData,
    u: &[Rational],
) -> ExactMatrix {
    let k = geom.horizontal_dim();
    let columns: Vec<Vector> = geom
        .horizontal()
        .map(|j| tors.apply(u, &unit_vector(geom.dim(), j))[..k].to_vec())
        .collect();
    ExactMatrix::from_columns(k, &columns)
}

/// The commutant bound refined by `[A, 𝒯⁰_U] = 0` for `U` in a basis of `V¹`.
pub fn eigen_commutant_bound(
    geom: &GradedLieGeometry,
    tors: &TorsionData,
    decomp: &TorsionDecomposition,
) -> usize {
    let operators: Vec<ExactMatrix> = torsion_image(geom, tors)
        .basis()
        .iter()
        .map(|u| vertical_torsion_operator(geom, tors, u))
        .collect();
    constrained_dim(&skew_basis(geom), |a| {
        let mut out = commutant_conditions(geom, tors, decomp, a);
        for t in &operators {
            let c = a.commutator(t);
            for i in 0..c.rows() {
                out.extend(c.row(i).iter().cloned());
            }
        }
        out
    })
}

enum Unknown {
    Skew(ExactMatrix),
    /// `D` sending basis vector `s` of `V¹` to basis vector `t`.
    Elementary {
        t: usize,
        s: usize,
    },
}

/// Dimension of the projection to `skew(H)` of the pairs `(A, D)` with
/// `D Tor(X, Y) = Tor(AX, Y) + Tor(X, AY)`.
pub fn derivation_bound(geom: &GradedLieGeometry, tors: &TorsionData) -> usize {
    let n = geom.dim();
    let image = torsion_image(geom, tors);
    let w = image.basis();
    let skews = skew_basis(geom);
    let basis_matrix = ExactMatrix::from_columns(n, w);
    let coords: Vec<Vector> = geom
        .horizontal()
        .flat_map(|i| geom.horizontal().map(move |j| (i, j)))
        .map(|(i, j)| {
            let t = tors.apply(&unit_vector(n, i), &unit_vector(n, j));
            if w.is_empty() {
                Vec::new()
            } else {
                basis_matrix
                    .solve(&t)
                    .expect("dimensions agree")
                    .expect("torsion lies in its own span")
            }
        })
        .collect();
    let mut unknowns: Vec<Unknown> = skews.iter().cloned().map(Unknown::Skew).collect();
    for t in 0..w.len() {
        for s in 0..w.len() {
            unknowns.push(Unknown::Elementary { t, s });
        }
    }
    let kernel = constrained_kernel(&unknowns, |u| match u {
        Unknown::Skew(a) => torsion_derivation_defect(geom, tors, a)
            .into_iter()
            .map(|x| -x)
            .collect(),
        Unknown::Elementary { t, s } => coords
            .iter()
            .flat_map(|c| {
                let scale = c[*s].clone();
                w[*t].iter().map(move |x| x * &scale)
            })
            .collect(),
    });
    let projected: Vec<Vector> = kernel
        .into_iter()
        .map(|v| v[..skews.len()].to_vec())
        .collect();
    rank_of(&projected)
}

/// Dimension of the linear stabilizer of the torsion indicatrix, when decidable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stabilizer {
    Discrete,
    Unknown,
}

impl Stabilizer {
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Discrete => Some(0),
            Self::Unknown => None,
        }
    }
}

impl Serialize for Stabilizer {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Discrete => s.serialize_u64(0),
            Self::Unknown => s.serialize_str("unknown"),
        }
    }
}

pub fn stabilizer_contribution(decomp: &TorsionDecomposition) -> Stabilizer {
    if decomp.blocks_at_most_planar() {
        Stabilizer::Discrete
    } else {
        Stabilizer::Unknown
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HigherStepBound {
    pub m: usize,
    /// `L = {X ∈ H : π^{m+1} Tor(U, X) = 0}` for `U` spanning `V^m`.
    #[serde(skip)]
    pub l: Subspace,
    pub l_dim: usize,
    pub bound: usize,
}

/// Bounds from layers `m` with `dim V^m = dim V^{m+1} = 1` of a regular grading.
pub fn higher_step_bound(
    geom: &GradedLieGeometry,
    tors: &TorsionData,
) -> Result<Vec<HigherStepBound>, BoundError> {
    if !filtration(geom).regular {
        return Err(BoundError::NotRegular);
    }
    let n = geom.dim();
    let k = geom.horizontal_dim();
    let mut out = Vec::new();
    for m in 1..geom.depth() {
        if geom.layer(m).len() != 1 || geom.layer(m + 1).len() != 1 {
            continue;
        }
        let u = unit_vector(n, geom.layer(m).start);
        let columns: Vec<Vector> = geom
            .horizontal()
            .map(|j| geom.project(m + 1, &tors.apply(&u, &unit_vector(n, j))))
            .collect();
        let l = Subspace::from_independent(
            n,
            ExactMatrix::from_columns(n, &columns)
                .null_space()
                .into_basis()
                .iter()
                .map(|x| embed(geom, x))
                .collect(),
        );
        let l_dim = l.dim();
        debug_assert_eq!(l_dim, k - ExactMatrix::from_columns(n, &columns).rank());
        out.push(HigherStepBound {
            m,
            l,
            l_dim,
            bound: l_dim * l_dim.saturating_sub(1) / 2,
        });
    }
    Ok(out)
}

/// Dimension of `{ad A : A ∈ 𝔤}` restricted to those `A` whose adjoint action
/// preserves `H` and the vertical layers and is skew-adjoint on `H`.
///
/// Each such `A` gives an isotropy Killing field at the identity through the
/// conjugations `g ↦ e^{tA} g e^{-tA}`.
pub fn inner_isotropy_dim(geom: &GradedLieGeometry) -> usize {
    let n = geom.dim();
    let generators: Vec<Vector> = (0..n).map(|a| unit_vector(n, a)).collect();
    let ad = |a: &Vector| -> Vec<Vector> {
        (0..n)
            .map(|b| geom.bracket(a, &unit_vector(n, b)))
            .collect()
    };
    let admissible = constrained_kernel(&generators, |a| {
        let images = ad(a);
        let mut out = Vec::new();
        for (b, image) in images.iter().enumerate() {
            let layer = geom.grade_of(b);
            for (c, x) in image.iter().enumerate() {
                if geom.grade_of(c) != layer {
                    out.push(x.clone());
                }
            }
        }
        for i in geom.horizontal() {
            for j in geom.horizontal() {
                let s = geom.inner(&images[i], &unit_vector(n, j))
                    + geom.inner(&unit_vector(n, i), &images[j]);
                out.push(s);
            }
        }
        out
    });
    let flattened: Vec<Vector> = admissible
        .iter()
        .map(|coeffs| {
            let mut a = vec![Rational::zero(); n];
            for (x, e) in coeffs.iter().zip(&generators) {
                crate::exact::rational::add_scaled(&mut a, x, e);
            }
            ad(&a).concat()
        })
        .collect();
    rank_of(&flattened)
}

/// Certified lower-bound data beyond the Lie algebra itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Certified {
    /// Dimension of a solved space of strong Killing fields.
    pub strong_killing: Option<usize>,
    /// Dimension of a solved space of regular Killing fields.
    pub regular_killing: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularBounds {
    pub higher_step_bounds: Vec<HigherStepBound>,
    pub isotropy_upper: usize,
    pub total_upper: usize,
    pub total_lower: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub crude: usize,
    pub crude_isotropy: usize,
    pub kernel_dim: usize,
    pub block_dims: Vec<usize>,
    pub strong_decomposition: bool,
    pub commutant_bound: usize,
    pub eigen_commutant_bound: usize,
    pub derivation_bound: usize,
    pub stabilizer_contribution: Stabilizer,
    pub isotropy_upper: usize,
    pub total_upper: usize,
    pub total_lower: usize,
    pub exact: bool,
    /// Bounds for isometries preserving every layer of a regular grading.
    pub regular: Option<RegularBounds>,
    pub notes: Vec<String>,
}

/// All bounds for a Lie group geometry with left-invariant structure.
///
/// Strong bounds use the basic grading; the regular section is present when
/// the supplied grading is regular with at least two vertical layers.
pub fn aggregate(
    geom: &GradedLieGeometry,
    certified: Certified,
) -> Result<BoundReport, BoundError> {
    let basic = geom.basic();
    let tors = torsion(&basic, &build_connection(&basic)?);
    let decomp = torsion_decomposition(&basic, &tors);
    let mut notes = vec!["crude".to_string(), "derivation".to_string()];

    let crude_iso = crude_isotropy(geom);
    let commutant = commutant_bound(&basic, &tors, &decomp);
    let eigen = eigen_commutant_bound(&basic, &tors, &decomp);
    let derivation = derivation_bound(&basic, &tors);
    let stabilizer = stabilizer_contribution(&decomp);

    let mut isotropy_upper = crude_iso.min(derivation);
    if stabilizer == Stabilizer::Discrete {
        isotropy_upper = isotropy_upper.min(commutant).min(eigen);
        notes.push("stabilizer discrete (planar blocks)".into());
        notes.push(
            if decomp.strong {
                "commutant (strong decomposition)"
            } else {
                "commutant"
            }
            .into(),
        );
        notes.push("eigen-commutant".into());
    } else {
        notes.push("stabilizer unknown".into());
    }
    if !decomp.frame_aligned {
        notes.push("decomposition not frame-aligned".into());
    }

    let dim = geom.dim();
    let group_lower = dim + inner_isotropy_dim(&basic);
    let total_lower = certified
        .strong_killing
        .map_or(group_lower, |k| k.max(group_lower));
    let total_upper = dim + isotropy_upper;

    let regular = if geom.depth() >= 2 && filtration(geom).regular {
        let graded_tors = torsion(geom, &build_connection(geom)?);
        let higher = higher_step_bound(geom, &graded_tors)?;
        let reg_iso = higher
            .iter()
            .map(|h| h.bound)
            .fold(isotropy_upper, usize::min);
        if !higher.is_empty() {
            notes.push("higher step (regular)".into());
        }
        let reg_group_lower = dim + inner_isotropy_dim(geom);
        let reg_lower = certified
            .regular_killing
            .map_or(reg_group_lower, |k| k.max(reg_group_lower));
        Some(RegularBounds {
            higher_step_bounds: higher,
            isotropy_upper: reg_iso,
            total_upper: dim + reg_iso,
            total_lower: reg_lower,
            exact: reg_lower == dim + reg_iso,
        })
    } else {
        None
    };

    Ok(BoundReport {
        crude: crude_bound(geom),
        crude_isotropy: crude_iso,
        kernel_dim: decomp.kernel.dim(),
        block_dims: decomp.block_dims(),
        strong_decomposition: decomp.strong,
        commutant_bound: commutant,
        eigen_commutant_bound: eigen,
        derivation_bound: derivation,
        stabilizer_contribution: stabilizer,
        isotropy_upper,
        total_upper,
        total_lower,
        exact: total_lower == total_upper,
        regular,
        notes,
    })
}
