//! Built-in example geometries.

use num_traits::Zero;

use crate::coordfield::{Chart, CoordinateGeometry, FrameVectorField, SymExpr, VarKind};
use crate::exact::{int, q, ExactMatrix, Rational};
use crate::liealg::{GradedLieGeometry, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    Unknown(String),
    #[error("{name} requires {requirement}")]
    BadParameter { name: String, requirement: String },
}

/// A parsed catalog name such as `so(4)` or `engel`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    Heisenberg(usize),
    Engel,
    So(usize),
    Sl(usize),
    Rototranslation,
    Carnot(usize),
}

impl Entry {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.to_ascii_lowercase();
        let (name, param) = match t.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| CatalogError::Unknown(text.to_string()))?;
                let p: usize = inner
                    .parse()
                    .map_err(|_| CatalogError::Unknown(text.to_string()))?;
                (name.to_string(), Some(p))
            }
            None => (t.clone(), None),
        };
        let need = |requirement: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(CatalogError::BadParameter {
                    name: text.to_string(),
                    requirement: requirement.to_string(),
                })
            }
        };
        let entry = match (name.as_str(), param) {
            ("heisenberg", Some(n)) => {
                need("n >= 1", n >= 1)?;
                Entry::Heisenberg(n)
            }
            ("engel", None) => Entry::Engel,
            ("rototranslation", None) => Entry::Rototranslation,
            ("so", Some(n)) => {
                need("n >= 3", n >= 3)?;
                Entry::So(n)
            }
            ("sl", Some(n)) => {
                need("n >= 2", n >= 2)?;
                Entry::Sl(n)
            }
            ("carnot", Some(k)) => {
                need("k >= 2", k >= 2)?;
                Entry::Carnot(k)
            }
            _ => return Err(CatalogError::Unknown(text.to_string())),
        };
        Ok(entry)
    }

    pub fn name(&self) -> String {
        match self {
            Entry::Heisenberg(n) => format!("heisenberg({n})"),
            Entry::Engel => "engel".into(),
            Entry::So(n) => format!("so({n})"),
            Entry::Sl(n) => format!("sl({n})"),
            Entry::Rototranslation => "rototranslation".into(),
            Entry::Carnot(k) => format!("carnot({k})"),
        }
    }

    /// The left-invariant frame data of the entry.
    pub fn lie(&self) -> GradedLieGeometry {
        match *self {
            Entry::Heisenberg(n) => heisenberg(n),
            Entry::Engel => engel(),
            Entry::So(n) => so(n),
            Entry::Sl(n) => sl(n),
            Entry::Rototranslation => rototranslation(),
            Entry::Carnot(k) => carnot(k),
        }
    }

    /// Whether the catalog describes the entry by coordinate vector fields.
    pub fn has_coordinates(&self) -> bool {
        matches!(
            self,
            Entry::Heisenberg(_) | Entry::Engel | Entry::Rototranslation
        )
    }

    /// The coordinate frame of the entry, when the catalog has one.
    pub fn coordinates(&self) -> Option<CoordinateGeometry> {
        match *self {
            Entry::Heisenberg(n) => Some(heisenberg_chart(n)),
            Entry::Engel => Some(engel_chart()),
            Entry::Rototranslation => Some(rototranslation_chart()),
            _ => None,
        }
    }

    /// Default Killing-solver degree for entries with coordinates.
    pub fn solver_degree(&self) -> Option<u32> {
        match self {
            Entry::Heisenberg(_) | Entry::Engel => Some(2),
            Entry::Rototranslation => Some(1),
            _ => None,
        }
    }
}

/// The entries exercised by the acceptance suite and `--all-catalog`.
pub fn standard_entries() -> Vec<Entry> {
    vec![
        Entry::Heisenberg(1),
        Entry::Heisenberg(2),
        Entry::Heisenberg(3),
        Entry::Engel,
        Entry::So(3),
        Entry::So(4),
        Entry::So(5),
        Entry::Sl(2),
        Entry::Sl(3),
        Entry::Rototranslation,
    ]
}

fn unit(i: usize) -> Rational {
    int(i as i64)
}

/// `X_1…X_n, Y_1…Y_n | T` with `[X_i, Y_i] = T`.
pub fn heisenberg(n: usize) -> GradedLieGeometry {
    let mut names: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
    names.extend((1..=n).map(|i| format!("Y{i}")));
    names.push("T".into());
    let brackets: Vec<_> = (0..n).map(|i| (i, n + i, 2 * n, unit(1))).collect();
    GradedLieGeometry::from_brackets(format!("heisenberg({n})"), names, vec![2 * n, 1], &brackets)
}

/// `X, Y | T1 | T2` with `[X, Y] = T1`, `[X, T1] = T2`.
pub fn engel() -> GradedLieGeometry {
    let names = ["X", "Y", "T1", "T2"].map(String::from).to_vec();
    GradedLieGeometry::from_brackets(
        "engel",
        names,
        vec![2, 1, 1],
        &[(0, 1, 2, unit(1)), (0, 2, 3, unit(1))],
    )
}

/// `X, Θ | T` with `[X, Θ] = T`, `[Θ, T] = X`.
pub fn rototranslation() -> GradedLieGeometry {
    let names = ["X", "Theta", "T"].map(String::from).to_vec();
    GradedLieGeometry::from_brackets(
        "rototranslation",
        names,
        vec![2, 1],
        &[(0, 1, 2, unit(1)), (1, 2, 0, unit(1))],
    )
}

fn field(terms: &[(usize, SymExpr)], n: usize) -> FrameVectorField {
    let mut f = FrameVectorField::zero(n);
    for (i, c) in terms {
        f.coefficients[*i] = &f.coefficients[*i] + c;
    }
    f
}

fn scaled_var(i: usize, c: Rational) -> SymExpr {
    SymExpr::var(i).scale(&c)
}

/// `X_i = ∂x_i − (y_i/2) ∂t`, `Y_i = ∂y_i + (x_i/2) ∂t`, `T = ∂t`.
pub fn heisenberg_chart(n: usize) -> CoordinateGeometry {
    let lie = heisenberg(n);
    let dim = 2 * n + 1;
    let mut coords: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    coords.extend((1..=n).map(|i| format!("y{i}")));
    coords.push("t".into());
    let t = 2 * n;
    let mut frame = Vec::new();
    for i in 0..n {
        frame.push(field(
            &[(i, SymExpr::one()), (t, scaled_var(n + i, q(-1, 2)))],
            dim,
        ));
    }
    for i in 0..n {
        frame.push(field(
            &[(n + i, SymExpr::one()), (t, scaled_var(i, q(1, 2)))],
            dim,
        ));
    }
    frame.push(FrameVectorField::partial(dim, t));
    CoordinateGeometry::new(
        lie.name(),
        Chart::new(coords, vec![VarKind::Line; dim]),
        lie.frame_names().to_vec(),
        frame,
        lie.grading().to_vec(),
        None,
    )
    .expect("unimodular frame")
}

/// `X = ∂x − y ∂t1 − t1 ∂t2`, `Y = ∂y`, `T1 = ∂t1`, `T2 = ∂t2`.
pub fn engel_chart() -> CoordinateGeometry {
    let lie = engel();
    let coords = ["x", "y", "t1", "t2"].map(String::from).to_vec();
    let frame = vec![
        field(
            &[
                (0, SymExpr::one()),
                (2, scaled_var(1, int(-1))),
                (3, scaled_var(2, int(-1))),
            ],
            4,
        ),
        FrameVectorField::partial(4, 1),
        FrameVectorField::partial(4, 2),
        FrameVectorField::partial(4, 3),
    ];
    CoordinateGeometry::new(
        lie.name(),
        Chart::new(coords, vec![VarKind::Line; 4]),
        lie.frame_names().to_vec(),
        frame,
        lie.grading().to_vec(),
        None,
    )
    .expect("unimodular frame")
}

/// `X = cos θ ∂x + sin θ ∂y`, `Θ = ∂θ`, `T = sin θ ∂x − cos θ ∂y`.
pub fn rototranslation_chart() -> CoordinateGeometry {
    let lie = rototranslation();
    let coords = ["x", "y", "theta"].map(String::from).to_vec();
    let (c, s) = (SymExpr::var(2), SymExpr::sin(2));
    let frame = vec![
        field(&[(0, c.clone()), (1, s.clone())], 3),
        FrameVectorField::partial(3, 2),
        field(&[(0, s), (1, -&c)], 3),
    ];
    CoordinateGeometry::new(
        lie.name(),
        Chart::new(coords, vec![VarKind::Line, VarKind::Line, VarKind::Angle]),
        lie.frame_names().to_vec(),
        frame,
        lie.grading().to_vec(),
        None,
    )
    .expect("unimodular frame")
}

/// Free step-two nilpotent algebra on `k` generators, `[X_i, X_j] = T_ij`.
pub fn carnot(k: usize) -> GradedLieGeometry {
    let mut names: Vec<String> = (1..=k).map(|i| format!("X{i}")).collect();
    let mut brackets = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            brackets.push((i, j, names.len(), unit(1)));
            names.push(format!("T{}{}", i + 1, j + 1));
        }
    }
    GradedLieGeometry::from_brackets(
        format!("carnot({k})"),
        names,
        vec![k, k * (k - 1) / 2],
        &brackets,
    )
}

fn elementary(n: usize, i: usize, j: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n, n);
    m[(i, j)] = unit(1);
    m
}

/// Structure constants of a matrix Lie algebra in the given basis.
fn matrix_algebra(
    name: String,
    names: Vec<String>,
    grading: Vec<usize>,
    basis: &[ExactMatrix],
) -> GradedLieGeometry {
    let dim = basis.len();
    let size = basis[0].rows();
    let flat = |m: &ExactMatrix| -> Vec<Rational> {
        (0..size * size)
            .map(|p| m[(p / size, p % size)].clone())
            .collect()
    };
    let columns: Vec<_> = basis.iter().map(flat).collect();
    let coords = ExactMatrix::from_columns(size * size, &columns);
    let mut c = Tensor::zeros(3, dim);
    for a in 0..dim {
        for b in 0..dim {
            let br = basis[a].commutator(&basis[b]);
            if br.is_zero() {
                continue;
            }
            let x = coords
                .solve(&flat(&br))
                .expect("square shapes")
                .expect("algebra closed under brackets");
            for (k, v) in x.into_iter().enumerate() {
                if !v.is_zero() {
                    c[[a, b, k]] = v;
                }
            }
        }
    }
    GradedLieGeometry::new(name, names, grading, c, ExactMatrix::identity(dim))
}

/// `so(n)` with `X_i = E_1i − E_i1` horizontal and `T_ij = E_ij − E_ji`
/// (`1 < i < j`) vertical; bi-invariant metric.
pub fn so(n: usize) -> GradedLieGeometry {
    let skew = |i: usize, j: usize| elementary(n, i, j).sub(&elementary(n, j, i));
    let mut basis = Vec::new();
    let mut names = Vec::new();
    for i in 1..n {
        basis.push(skew(0, i));
        names.push(format!("X{}", i + 1));
    }
    for i in 1..n {
        for j in i + 1..n {
            basis.push(skew(i, j));
            names.push(format!("T{}{}", i + 1, j + 1));
        }
    }
    matrix_algebra(
        format!("so({n})"),
        names,
        vec![n - 1, (n - 1) * (n - 2) / 2],
        &basis,
    )
}

/// `sl(n)` with `X_ij = E_ij` (`i ≠ j`, paired as `X_ij, X_ji`) horizontal and
/// `T_i = E_ii − E_{i+1,i+1}` vertical.
pub fn sl(n: usize) -> GradedLieGeometry {
    let mut basis = Vec::new();
    let mut names = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            basis.push(elementary(n, i, j));
            names.push(format!("X{}{}", i + 1, j + 1));
            basis.push(elementary(n, j, i));
            names.push(format!("X{}{}", j + 1, i + 1));
        }
    }
    for i in 0..n - 1 {
        basis.push(elementary(n, i, i).sub(&elementary(n, i + 1, i + 1)));
        names.push(format!("T{}", i + 1));
    }
    matrix_algebra(format!("sl({n})"), names, vec![n * (n - 1), n - 1], &basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(g: &GradedLieGeometry, name: &str) -> usize {
        g.frame_names().iter().position(|s| s == name).unwrap()
    }

    #[test]
    fn parse_names() {
        assert_eq!(Entry::parse("so(4)").unwrap(), Entry::So(4));
        assert_eq!(
            Entry::parse(" Heisenberg( 2 )").unwrap(),
            Entry::Heisenberg(2)
        );
        assert!(matches!(
            Entry::parse("so(2)"),
            Err(CatalogError::BadParameter { .. })
        ));
        assert!(matches!(
            Entry::parse("sl(1)"),
            Err(CatalogError::BadParameter { .. })
        ));
        assert!(matches!(
            Entry::parse("torus"),
            Err(CatalogError::Unknown(_))
        ));
    }

    #[test]
    fn all_entries_validate() {
        for e in standard_entries()
            .into_iter()
            .chain([Entry::Carnot(3), Entry::Sl(4)])
        {
            assert!(e.lie().validate().is_empty(), "{}", e.name());
        }
    }

    #[test]
    fn so_brackets() {
        // [X_i, X_j] = −T_ij, [X_i, T_ij] = X_j
        let g = so(4);
        let (x2, x3, t23) = (idx(&g, "X2"), idx(&g, "X3"), idx(&g, "T23"));
        assert_eq!(g.structure()[[x2, x3, t23]], int(-1));
        assert_eq!(g.structure()[[x2, t23, x3]], int(1));
        assert_eq!(g.grading(), &[3, 3]);
    }

    #[test]
    fn sl2_brackets() {
        let g = sl(2);
        assert_eq!(g.dim(), 3);
        assert_eq!(g.bracket_frame(0, 1), &[int(0), int(0), int(1)]);
    }
}
