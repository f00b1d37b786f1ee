use std::collections::HashMap;

use num_traits::Zero;

use super::expr::SymExpr;
use super::field::{bracket, Chart, FrameVectorField};
use super::CoordError;
use crate::exact::{ExactMatrix, Rational};
use crate::liealg::{GradedLieGeometry, Tensor};

/// A frame `E_1 … E_n` of vector fields on a chart, with grading and constant Gram matrix.
#[derive(Clone, Debug)]
pub struct CoordinateGeometry {
    name: String,
    chart: Chart,
    frame_names: Vec<String>,
    frame: Vec<FrameVectorField>,
    grading: Vec<usize>,
    gram: ExactMatrix,
    /// `v^a = Σ_i dual[a][i] w^i` converts coordinate to frame components.
    dual: Vec<Vec<SymExpr>>,
    /// `[E_a, E_b] = Σ_k structure[a][b][k] E_k`.
    structure: Vec<Vec<Vec<SymExpr>>>,
}

/// Determinant of the submatrix on `rows[start..]` and the columns in `mask`.
fn minor(
    m: &[Vec<SymExpr>],
    rows: &[usize],
    start: usize,
    mask: u32,
    memo: &mut HashMap<(usize, u32), SymExpr>,
) -> SymExpr {
    if start == rows.len() {
        return SymExpr::one();
    }
    if let Some(v) = memo.get(&(start, mask)) {
        return v.clone();
    }
    let mut acc = SymExpr::zero();
    let mut sign_negative = false;
    for col in 0..m.len() {
        if mask & (1 << col) == 0 {
            continue;
        }
        let entry = &m[rows[start]][col];
        if !entry.is_zero() {
            let sub = minor(m, rows, start + 1, mask & !(1 << col), memo);
            let term = entry * &sub;
            acc = if sign_negative {
                &acc - &term
            } else {
                &acc + &term
            };
        }
        sign_negative = !sign_negative;
    }
    memo.insert((start, mask), acc.clone());
    acc
}

fn determinant(m: &[Vec<SymExpr>]) -> SymExpr {
    let rows: Vec<usize> = (0..m.len()).collect();
    minor(m, &rows, 0, (1u32 << m.len()) - 1, &mut HashMap::new())
}

/// Cofactor matrix `C[a][i] = (−1)^{a+i} det(M without row a, column i)`.
fn cofactors(m: &[Vec<SymExpr>]) -> Vec<Vec<SymExpr>> {
    let n = m.len();
    let full = (1u32 << n) - 1;
    (0..n)
        .map(|a| {
            let rows: Vec<usize> = (0..n).filter(|&r| r != a).collect();
            let mut memo = HashMap::new();
            (0..n)
                .map(|i| {
                    let d = minor(m, &rows, 0, full & !(1 << i), &mut memo);
                    if (a + i) % 2 == 1 {
                        -&d
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect()
}

impl CoordinateGeometry {
    pub fn new(
        name: impl Into<String>,
        chart: Chart,
        frame_names: Vec<String>,
        frame: Vec<FrameVectorField>,
        grading: Vec<usize>,
        gram: Option<ExactMatrix>,
    ) -> Result<Self, CoordError> {
        let n = chart.dim();
        if frame.len() != n || frame_names.len() != n {
            return Err(CoordError::FrameCount {
                expected: n,
                found: frame.len(),
            });
        }
        if n > 24 {
            return Err(CoordError::TooManyCoordinates(n));
        }
        if frame.iter().any(|f| f.dim() != n) {
            return Err(CoordError::ChartMismatch);
        }
        if grading.iter().sum::<usize>() != n {
            return Err(CoordError::Grading);
        }
        let gram = gram.unwrap_or_else(|| ExactMatrix::identity(n));
        if gram.rows() != n || !gram.is_square() {
            return Err(CoordError::Gram);
        }
        let matrix: Vec<Vec<SymExpr>> = frame.iter().map(|f| f.coefficients.clone()).collect();
        let det = determinant(&matrix);
        let det = match det.as_constant() {
            Some(d) if !d.is_zero() => d,
            _ => return Err(CoordError::NonUnitDeterminant(chart.render(&det))),
        };
        let inv = Rational::from_integer(1.into()) / det;
        let dual = cofactors(&matrix)
            .into_iter()
            .map(|row| row.iter().map(|c| c.scale(&inv)).collect())
            .collect();
        let mut geom = Self {
            name: name.into(),
            chart,
            frame_names,
            frame,
            grading,
            gram,
            dual,
            structure: Vec::new(),
        };
        let mut structure = vec![vec![vec![SymExpr::zero(); n]; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let br = bracket(&geom.chart, &geom.frame[a], &geom.frame[b])?;
                let comps = geom.frame_components(&br);
                for k in 0..n {
                    structure[b][a][k] = -&comps[k];
                    structure[a][b][k] = comps[k].clone();
                }
            }
        }
        geom.structure = structure;
        Ok(geom)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn frame_names(&self) -> &[String] {
        &self.frame_names
    }

    pub fn frame(&self) -> &[FrameVectorField] {
        &self.frame
    }

    pub fn grading(&self) -> &[usize] {
        &self.grading
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn horizontal_dim(&self) -> usize {
        self.grading[0]
    }

    /// Grade of frame index `a` (0 for horizontal).
    pub fn grade_of(&self, a: usize) -> usize {
        let mut end = 0;
        for (j, &h) in self.grading.iter().enumerate() {
            end += h;
            if a < end {
                return j;
            }
        }
        unreachable!("frame index out of range")
    }

    /// Frame components of a coordinate vector field.
    pub fn frame_components(&self, v: &FrameVectorField) -> Vec<SymExpr> {
        self.dual
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&v.coefficients)
                    .filter(|(d, w)| !d.is_zero() && !w.is_zero())
                    .fold(SymExpr::zero(), |acc, (d, w)| &acc + &(d * w))
            })
            .collect()
    }

    /// The coordinate field `Σ_a v^a E_a`.
    pub fn from_frame_components(&self, v: &[SymExpr]) -> FrameVectorField {
        let mut out = FrameVectorField::zero(self.dim());
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.frame[a].times(c));
            }
        }
        out
    }

    pub fn structure_functions(&self) -> &[Vec<Vec<SymExpr>>] {
        &self.structure
    }

    /// Structure constants when every structure function is constant.
    pub fn constant_structure(&self) -> Option<Tensor> {
        let n = self.dim();
        let mut c = Tensor::zeros(3, n);
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    c[[a, b, k]] = self.structure[a][b][k].as_constant()?;
                }
            }
        }
        Some(c)
    }

    /// The Lie-algebra geometry with the same frame, grading and metric.
    pub fn linked_lie(&self) -> Option<GradedLieGeometry> {
        let c = self.constant_structure()?;
        Some(GradedLieGeometry::new(
            self.name.clone(),
            self.frame_names.clone(),
            self.grading.clone(),
            c,
            self.gram.clone(),
        ))
    }

    /// `E_a(f)`.
    pub fn derive(&self, a: usize, f: &SymExpr) -> SymExpr {
        self.frame[a].apply(&self.chart, f)
    }
}
