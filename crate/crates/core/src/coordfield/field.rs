use super::expr::{SymExpr, VarKind};
use super::CoordError;

/// Coordinate chart: variable names and how each enters the ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub names: Vec<String>,
    pub kinds: Vec<VarKind>,
}

impl Chart {
    pub fn new(names: Vec<String>, kinds: Vec<VarKind>) -> Self {
        assert_eq!(names.len(), kinds.len());
        Self { names, kinds }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn render(&self, e: &SymExpr) -> String {
        e.render(&self.names, &self.kinds)
    }
}

/// Vector field `Σ_i v^i ∂_i` with coefficients in the ring.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FrameVectorField {
    pub coefficients: Vec<SymExpr>,
}

impl FrameVectorField {
    pub fn new(coefficients: Vec<SymExpr>) -> Self {
        Self { coefficients }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coefficients: vec![SymExpr::zero(); n],
        }
    }

    /// `∂_i`.
    pub fn partial(n: usize, i: usize) -> Self {
        let mut f = Self::zero(n);
        f.coefficients[i] = SymExpr::one();
        f
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(SymExpr::is_zero)
    }

    /// `V(f) = Σ_i v^i ∂_i f`.
    pub fn apply(&self, chart: &Chart, f: &SymExpr) -> SymExpr {
        let mut out = SymExpr::zero();
        for (i, v) in self.coefficients.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let d = f.derivative(i, chart.kinds[i]);
            if !d.is_zero() {
                out = &out + &(v * &d);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn times(&self, f: &SymExpr) -> Self {
        Self::new(self.coefficients.iter().map(|a| a * f).collect())
    }

    pub fn render(&self, chart: &Chart) -> String {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .zip(&chart.names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, name)| format!("({})*d_{name}", chart.render(c)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `[A, B]^i = Σ_j (A^j ∂_j B^i − B^j ∂_j A^i)`.
pub fn bracket(
    chart: &Chart,
    a: &FrameVectorField,
    b: &FrameVectorField,
) -> Result<FrameVectorField, CoordError> {
    if a.dim() != chart.dim() || b.dim() != chart.dim() {
        return Err(CoordError::ChartMismatch);
    }
    Ok(FrameVectorField::new(
        (0..chart.dim())
            .map(|i| &a.apply(chart, &b.coefficients[i]) - &b.apply(chart, &a.coefficients[i]))
            .collect(),
    ))
}
