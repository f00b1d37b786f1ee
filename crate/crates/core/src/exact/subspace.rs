use super::matrix::ExactMatrix;
use super::rational::{add_scaled, Rational, Vector};
use super::reduce::{dense_to_sparse, RowReducer};
use super::ExactError;

/// A linear subspace of ℚⁿ with an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_independent(
            ambient_dim,
            (0..ambient_dim)
                .map(|i| super::rational::unit_vector(ambient_dim, i))
                .collect(),
        )
    }

    /// Span of arbitrary vectors. Keeps the first maximal independent
    /// subfamily, in order.
    pub fn span(ambient_dim: usize, vectors: Vec<Vector>) -> Self {
        let mut r = RowReducer::new(ambient_dim);
        let mut basis = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "vector length mismatch");
            if r.insert(dense_to_sparse(&v)) {
                basis.push(v);
            }
        }
        Self { ambient_dim, basis }
    }

    /// Caller guarantees independence (checked in debug builds).
    pub fn from_independent(ambient_dim: usize, basis: Vec<Vector>) -> Self {
        debug_assert_eq!(
            Self::span(ambient_dim, basis.clone()).dim(),
            basis.len(),
            "basis is dependent"
        );
        Self { ambient_dim, basis }
    }

    /// Span of the coordinate vectors with the given indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        Self::span(
            ambient_dim,
            indices
                .iter()
                .map(|&i| super::rational::unit_vector(ambient_dim, i))
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vector> {
        self.basis
    }

    fn reducer(&self) -> RowReducer {
        let mut r = RowReducer::new(self.ambient_dim);
        for v in &self.basis {
            r.insert(dense_to_sparse(v));
        }
        r
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reducer().reduce(dense_to_sparse(v)).is_empty()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let r = self.reducer();
        other
            .basis
            .iter()
            .all(|v| r.reduce(dense_to_sparse(v)).is_empty())
    }

    /// Equality as subspaces (mutual containment).
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && self.contains_subspace(other)
    }

    fn check(&self, other: &Subspace) -> Result<(), ExactError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(ExactError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        self.check(other)?;
        let all = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::span(self.ambient_dim, all))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient_dim));
        }
        // A·α = B·β  ⇔  [A | −B] (α; β) = 0; the intersection is {A·α}.
        let n = self.ambient_dim;
        let (p, q) = (self.dim(), other.dim());
        let m = ExactMatrix::from_fn(n, p + q, |i, j| {
            if j < p {
                self.basis[j][i].clone()
            } else {
                -other.basis[j - p][i].clone()
            }
        });
        let vectors = m
            .null_space()
            .into_basis()
            .into_iter()
            .map(|coeffs| {
                let mut v = vec![Rational::default(); n];
                for (a, b) in coeffs[..p].iter().zip(&self.basis) {
                    add_scaled(&mut v, a, b);
                }
                v
            })
            .collect();
        Ok(Self::span(n, vectors))
    }

    /// Orthogonal complement inside `within`, with respect to the inner
    /// product given by `gram`.
    pub fn complement_within(&self, within: &Subspace, gram: &ExactMatrix) -> Subspace {
        let n = self.ambient_dim;
        if within.is_zero() {
            return Self::zero(n);
        }
        // x = W·α with ⟨b, x⟩ = 0 for every basis vector b of self.
        let gw: Vec<Vector> = within.basis.iter().map(|w| gram.mul_vector(w)).collect();
        let m = ExactMatrix::from_fn(self.dim(), within.dim(), |i, j| {
            super::rational::dot(&self.basis[i], &gw[j])
        });
        let vectors = m
            .null_space()
            .into_basis()
            .into_iter()
            .map(|coeffs| {
                let mut v = vec![Rational::default(); n];
                for (a, b) in coeffs.iter().zip(&within.basis) {
                    add_scaled(&mut v, a, b);
                }
                v
            })
            .collect();
        Self::span(n, vectors)
    }

    /// Image under a linear map.
    pub fn image(&self, map: &ExactMatrix) -> Subspace {
        Self::span(
            map.rows(),
            self.basis.iter().map(|v| map.mul_vector(v)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, unit_vector};

    #[test]
    fn intersect_coordinate_planes() {
        let a = Subspace::coordinate(3, &[0, 1]);
        let b = Subspace::coordinate(3, &[1, 2]);
        let c = a.intersect(&b).unwrap();
        assert!(c.same_as(&Subspace::coordinate(3, &[1])));
        assert!(a.intersect(&a).unwrap().same_as(&a));
        assert!(a.intersect(&Subspace::zero(4)).is_err());
    }

    #[test]
    fn sum_and_containment() {
        let a = Subspace::span(3, vec![vec![int(1), int(1), int(0)]]);
        let b = Subspace::span(3, vec![vec![int(1), int(-1), int(0)]]);
        let s = a.sum(&b).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&unit_vector(3, 0)));
        assert!(!s.contains(&unit_vector(3, 2)));
    }

    #[test]
    fn orthogonal_complement() {
        let g = ExactMatrix::identity(3);
        let a = Subspace::span(3, vec![vec![int(1), int(1), int(0)]]);
        let c = a.complement_within(&Subspace::full(3), &g);
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&[int(1), int(-1), int(0)]));
        assert!(c.contains(&unit_vector(3, 2)));
    }
}
