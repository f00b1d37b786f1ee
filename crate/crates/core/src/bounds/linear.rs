//! Skew-adjoint parametrizations and small solvers shared by the bounds.

use num_traits::Zero;

use crate::exact::{ExactMatrix, Rational, RowReducer, Vector};
use crate::liealg::{GradedLieGeometry, TorsionData};

/// Basis of the `g_H`-skew-adjoint endomorphisms of `H`, as `k × k`
/// matrices in the horizontal frame: `A = G_H⁻¹ S` for elementary skew `S`.
pub fn skew_basis(geom: &GradedLieGeometry) -> Vec<ExactMatrix> {
    let k = geom.horizontal_dim();
    let ginv = geom.gram_block(0).inverse().expect("positive definite");
    let mut out = Vec::with_capacity(k * (k.saturating_sub(1)) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let mut s = ExactMatrix::zeros(k, k);
            s[(i, j)] = Rational::from_integer(1.into());
            s[(j, i)] = Rational::from_integer((-1).into());
            out.push(&ginv * &s);
        }
    }
    out
}

/// Embeds a horizontal coordinate vector into the full frame.
pub fn embed(geom: &GradedLieGeometry, x: &[Rational]) -> Vector {
    let mut v = vec![Rational::zero(); geom.dim()];
    v[..x.len()].clone_from_slice(x);
    v
}

/// `A` applied to the horizontal part of a full frame vector.
pub fn act(geom: &GradedLieGeometry, a: &ExactMatrix, v: &[Rational]) -> Vector {
    let k = geom.horizontal_dim();
    embed(geom, &a.mul_vector(&v[..k]))
}

/// `Tor(A E_i, E_j) + Tor(E_i, A E_j)` for all horizontal `i, j`, flattened.
pub fn torsion_derivation_defect(
    geom: &GradedLieGeometry,
    tors: &TorsionData,
    a: &ExactMatrix,
) -> Vector {
    let mut out = Vec::new();
    for i in geom.horizontal() {
        let ei = crate::exact::unit_vector(geom.dim(), i);
        let aei = act(geom, a, &ei);
        for j in geom.horizontal() {
            let ej = crate::exact::unit_vector(geom.dim(), j);
            let aej = act(geom, a, &ej);
            let mut v = tors.apply(&aei, &ej);
            for (x, y) in v.iter_mut().zip(tors.apply(&ei, &aej)) {
                *x += y;
            }
            out.extend(v);
        }
    }
    out
}

/// Dimension of the span of `generators` cut out by the linear `conditions`.
/// `conditions` must be linear in its argument.
pub fn constrained_dim<T>(generators: &[T], conditions: impl Fn(&T) -> Vector) -> usize {
    if generators.is_empty() {
        return 0;
    }
    let cols: Vec<Vector> = generators.iter().map(conditions).collect();
    let rows = cols[0].len();
    let m = ExactMatrix::from_columns(rows, &cols);
    generators.len() - m.rank()
}

/// Null-space coefficient vectors for `conditions` on `generators`.
pub fn constrained_kernel<T>(generators: &[T], conditions: impl Fn(&T) -> Vector) -> Vec<Vector> {
    if generators.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vector> = generators.iter().map(conditions).collect();
    let rows = cols[0].len();
    ExactMatrix::from_columns(rows, &cols)
        .null_space()
        .into_basis()
}

/// Rank of a family of vectors.
pub fn rank_of(vectors: &[Vector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut r = RowReducer::new(first.len());
    for v in vectors {
        r.insert_dense(v);
    }
    r.rank()
}
