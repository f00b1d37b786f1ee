use num_traits::Zero;
use std::fmt;
use std::ops::Range;

use super::tensor::Tensor;
use super::LieError;
use crate::exact::{ExactMatrix, Rational, Subspace, Vector};

/// A complemented sub-Riemannian structure given by a left-invariant frame
/// `E_0 … E_{n-1}`: horizontal frame first, then the vertical layers
/// `V¹, V², …` in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieGeometry {
    name: String,
    frame_names: Vec<String>,
    grading: Vec<usize>,
    structure: Tensor,
    gram: ExactMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    GradingSizes {
        total: usize,
        n: usize,
    },
    Antisymmetry {
        a: usize,
        b: usize,
        k: usize,
    },
    Jacobi {
        a: usize,
        b: usize,
        c: usize,
        k: usize,
    },
    GramShape,
    GramNotSymmetric,
    GramNotPositive,
    GramOffBlock {
        i: usize,
        j: usize,
    },
    BracketGrading {
        a: usize,
        b: usize,
        k: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GradingSizes { total, n } => {
                write!(f, "grading sizes sum to {total}, frame has {n} vectors")
            }
            Self::Antisymmetry { a, b, k } => {
                write!(f, "antisymmetry: c[{a}][{b}][{k}] != -c[{b}][{a}][{k}]")
            }
            Self::Jacobi { a, b, c, k } => {
                write!(
                    f,
                    "Jacobi identity fails for ({a}, {b}, {c}) in component {k}"
                )
            }
            Self::GramShape => write!(f, "gram matrix has the wrong shape"),
            Self::GramNotSymmetric => write!(f, "gram matrix is not symmetric"),
            Self::GramNotPositive => write!(f, "gram matrix is not positive definite"),
            Self::GramOffBlock { i, j } => {
                write!(f, "gram entry ({i}, {j}) couples different grades")
            }
            Self::BracketGrading { a, b, k } => {
                write!(
                    f,
                    "[E{a}, E{b}] has a component along E{k} outside the allowed layers"
                )
            }
        }
    }
}

impl GradedLieGeometry {
    /// Unvalidated constructor; see [`GradedLieGeometry::validate`].
    pub fn new(
        name: impl Into<String>,
        frame_names: Vec<String>,
        grading: Vec<usize>,
        structure: Tensor,
        gram: ExactMatrix,
    ) -> Self {
        Self {
            name: name.into(),
            frame_names,
            grading,
            structure,
            gram,
        }
    }

    /// Builds the structure tensor from bracket entries `[E_a, E_b] ∋ v·E_k`,
    /// filling in `[E_b, E_a]` by antisymmetry. Identity gram.
    pub fn from_brackets(
        name: impl Into<String>,
        frame_names: Vec<String>,
        grading: Vec<usize>,
        brackets: &[(usize, usize, usize, Rational)],
    ) -> Self {
        let n = frame_names.len();
        let mut c = Tensor::zeros(3, n);
        for (a, b, k, v) in brackets {
            c[[*a, *b, *k]] = v.clone();
            c[[*b, *a, *k]] = -v.clone();
        }
        Self::new(name, frame_names, grading, c, ExactMatrix::identity(n))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn frame_names(&self) -> &[String] {
        &self.frame_names
    }

    pub fn dim(&self) -> usize {
        self.frame_names.len()
    }

    /// Layer sizes `(h₀, h₁, …, h_r)`.
    pub fn grading(&self) -> &[usize] {
        &self.grading
    }

    /// Number of vertical layers `r`.
    pub fn depth(&self) -> usize {
        self.grading.len().saturating_sub(1)
    }

    pub fn structure(&self) -> &Tensor {
        &self.structure
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn horizontal_dim(&self) -> usize {
        self.grading.first().copied().unwrap_or(0)
    }

    pub fn vertical_dim(&self) -> usize {
        self.dim() - self.horizontal_dim()
    }

    pub fn layer(&self, j: usize) -> Range<usize> {
        let start: usize = self.grading[..j].iter().sum();
        start..start + self.grading[j]
    }

    pub fn horizontal(&self) -> Range<usize> {
        self.layer(0)
    }

    pub fn vertical(&self) -> Range<usize> {
        self.horizontal_dim()..self.dim()
    }

    pub fn grade_of(&self, a: usize) -> usize {
        let mut end = 0;
        for (j, h) in self.grading.iter().enumerate() {
            end += h;
            if a < end {
                return j;
            }
        }
        panic!("frame index {a} out of range")
    }

    pub fn is_vertical(&self, a: usize) -> bool {
        a >= self.horizontal_dim()
    }

    /// `[E_a, E_b]` as a frame vector.
    pub fn bracket_frame(&self, a: usize, b: usize) -> &[Rational] {
        self.structure.fiber(&[a, b])
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vector {
        self.structure.apply(&[u, v])
    }

    /// Projection onto layer `j`.
    pub fn project(&self, j: usize, v: &[Rational]) -> Vector {
        let r = self.layer(j);
        v.iter()
            .enumerate()
            .map(|(i, x)| {
                if r.contains(&i) {
                    x.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }

    pub fn project_horizontal(&self, v: &[Rational]) -> Vector {
        self.project(0, v)
    }

    pub fn project_vertical(&self, v: &[Rational]) -> Vector {
        let h = self.horizontal_dim();
        v.iter()
            .enumerate()
            .map(|(i, x)| if i >= h { x.clone() } else { Rational::zero() })
            .collect()
    }

    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        crate::exact::rational::dot(u, &self.gram.mul_vector(v))
    }

    /// `⟨E_a, E_b⟩`.
    pub fn g(&self, a: usize, b: usize) -> &Rational {
        &self.gram[(a, b)]
    }

    pub fn gram_block(&self, j: usize) -> ExactMatrix {
        let idx: Vec<usize> = self.layer(j).collect();
        self.gram.submatrix(&idx, &idx)
    }

    /// Inverse gram, assembled blockwise.
    pub fn gram_inverse(&self) -> ExactMatrix {
        let mut inv = ExactMatrix::zeros(self.dim(), self.dim());
        for j in 0..self.grading.len() {
            let r = self.layer(j);
            let bi = self
                .gram_block(j)
                .inverse()
                .expect("gram block is invertible");
            for (p, a) in r.clone().enumerate() {
                for (q, b) in r.clone().enumerate() {
                    inv[(a, b)] = bi[(p, q)].clone();
                }
            }
        }
        inv
    }

    pub fn layer_subspace(&self, j: usize) -> Subspace {
        let idx: Vec<usize> = self.layer(j).collect();
        Subspace::coordinate(self.dim(), &idx)
    }

    pub fn with_gram(&self, gram: ExactMatrix) -> Self {
        Self {
            gram,
            ..self.clone()
        }
    }

    /// The same frame and metric with the basic grading `H ⊕ V`.
    pub fn basic(&self) -> Self {
        let mut grading = vec![self.horizontal_dim()];
        if self.vertical_dim() > 0 {
            grading.push(self.vertical_dim());
        }
        // Cross-layer vertical gram entries are zero, so the gram is unchanged.
        Self {
            grading,
            ..self.clone()
        }
    }

    pub fn is_basic(&self) -> bool {
        self.grading.len() <= 2
    }

    /// All structural violations; empty iff the geometry is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.dim();
        let mut out = Vec::new();
        let total: usize = self.grading.iter().sum();
        if total != n || self.structure.dim() != n || self.structure.rank() != 3 {
            out.push(Violation::GradingSizes { total, n });
            return out;
        }
        let c = &self.structure;
        for a in 0..n {
            for b in a..n {
                for k in 0..n {
                    if c[[a, b, k]] != -c[[b, a, k]].clone() {
                        out.push(Violation::Antisymmetry { a, b, k });
                    }
                }
            }
        }
        out.extend(self.jacobi_violations());
        if self.gram.rows() != n || self.gram.cols() != n {
            out.push(Violation::GramShape);
            return out;
        }
        if !self.gram.is_symmetric() {
            out.push(Violation::GramNotSymmetric);
        } else if !self.gram.is_positive_definite() {
            out.push(Violation::GramNotPositive);
        }
        for i in 0..n {
            for j in 0..n {
                if self.grade_of(i) != self.grade_of(j) && !self.gram[(i, j)].is_zero() {
                    out.push(Violation::GramOffBlock { i, j });
                }
            }
        }
        // [V⁰, V^i] ⊆ V⁰ ⊕ … ⊕ V^{i+1}.
        for a in self.horizontal() {
            for b in 0..n {
                let allowed = self.grade_of(b) + 1;
                for k in 0..n {
                    if self.grade_of(k) > allowed && !c[[a, b, k]].is_zero() {
                        out.push(Violation::BracketGrading { a, b, k });
                    }
                }
            }
        }
        out
    }

    fn jacobi_violations(&self) -> Vec<Violation> {
        let n = self.dim();
        let c = &self.structure;
        let nonzero: Vec<Vec<(usize, &Rational)>> = (0..n * n)
            .map(|ab| {
                c.fiber(&[ab / n, ab % n])
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        // [[a,b],c] as a vector.
        let double = |a: usize, b: usize, cc: usize, acc: &mut Vector| {
            for &(m, x) in &nonzero[a * n + b] {
                for &(k, y) in &nonzero[m * n + cc] {
                    acc[k] += x * y;
                }
            }
        };
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for cc in b + 1..n {
                    let mut acc = vec![Rational::zero(); n];
                    double(a, b, cc, &mut acc);
                    double(b, cc, a, &mut acc);
                    double(cc, a, b, &mut acc);
                    if let Some(k) = acc.iter().position(|x| !x.is_zero()) {
                        out.push(Violation::Jacobi { a, b, c: cc, k });
                    }
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), LieError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(LieError::Invalid(v))
        }
    }

    /// Re-expresses the structure constants in a new frame whose vectors are
    /// the columns of `basis` (old frame coordinates). `None` if singular.
    pub fn reframe(
        &self,
        basis: &ExactMatrix,
        grading: Vec<usize>,
        gram: ExactMatrix,
    ) -> Option<Self> {
        let n = self.dim();
        let inv = basis.inverse()?;
        let cols: Vec<Vector> = (0..n).map(|j| basis.column(j)).collect();
        let mut c = Tensor::zeros(3, n);
        for a in 0..n {
            for b in 0..n {
                let br = inv.mul_vector(&self.bracket(&cols[a], &cols[b]));
                c.fiber_mut(&[a, b]).clone_from_slice(&br);
            }
        }
        let names = (0..n).map(|i| format!("F{i}")).collect();
        Some(Self::new(
            format!("{}'", self.name),
            names,
            grading,
            c,
            gram,
        ))
    }

    /// `c[V][V][H] = 0`, i.e. `[VM, VM] ⊆ VM`.
    pub fn vertical_integrable(&self) -> bool {
        self.vertical().all(|a| {
            self.vertical().all(|b| {
                self.horizontal()
                    .all(|k| self.structure[[a, b, k]].is_zero())
            })
        })
    }
}
