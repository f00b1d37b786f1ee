use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::expr::{Monomial, SymExpr};
use super::field::{bracket, FrameVectorField};
use super::geometry::CoordinateGeometry;
use crate::exact::{ExactMatrix, Rational, RowReducer, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KillingMode {
    Weak,
    Strong,
    Regular,
}

impl KillingMode {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "weak" => Some(Self::Weak),
            "strong" => Some(Self::Strong),
            "regular" => Some(Self::Regular),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Weak => "weak",
            Self::Strong => "strong",
            Self::Regular => "regular",
        }
    }
}

/// Shape of the polynomial ansatz for `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ansatz {
    /// `K = Σ_i p_i ∂_i`.
    Coordinate,
    /// `K = Σ_a p_a E_a`.
    Frame,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    /// `[K, E_i]` has a vertical component for horizontal `E_i`.
    HorizontalPreserved,
    /// `⟨[K,E_i],E_j⟩ + ⟨E_i,[K,E_j]⟩ ≠ 0`.
    Metric,
    /// `[K, U]` has a horizontal component for vertical `U`.
    VerticalPreserved,
    /// `[K, U]` leaves the layer of `U`.
    LayerPreserved,
}

impl ConditionKind {
    fn mode(&self) -> KillingMode {
        match self {
            Self::HorizontalPreserved | Self::Metric => KillingMode::Weak,
            Self::VerticalPreserved => KillingMode::Strong,
            Self::LayerPreserved => KillingMode::Regular,
        }
    }
}

/// One Killing condition: `kind` at frame indices `(a, b)` with its residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub kind: ConditionKind,
    pub a: usize,
    pub b: usize,
    pub residual: SymExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingCheck {
    pub weak: bool,
    pub strong: bool,
    pub regular: bool,
    /// Nonzero residuals.
    pub violations: Vec<Condition>,
}

/// Frame components of `[K, E_a]` for every `a`.
pub fn frame_brackets(geom: &CoordinateGeometry, k: &FrameVectorField) -> Vec<Vec<SymExpr>> {
    geom.frame()
        .iter()
        .map(|e| geom.frame_components(&bracket(geom.chart(), k, e).expect("same chart")))
        .collect()
}

/// Killing conditions up to `mode`, in a fixed order.
pub fn conditions(
    geom: &CoordinateGeometry,
    k: &FrameVectorField,
    mode: KillingMode,
) -> Vec<Condition> {
    let w = frame_brackets(geom, k);
    let n = geom.dim();
    let h = geom.horizontal_dim();
    let g = geom.gram();
    let mut out = Vec::new();
    for a in 0..h {
        for c in h..n {
            out.push(Condition {
                kind: ConditionKind::HorizontalPreserved,
                a,
                b: c,
                residual: w[a][c].clone(),
            });
        }
    }
    for i in 0..h {
        for j in i..h {
            let mut r = SymExpr::zero();
            for c in 0..h {
                if !g[(c, j)].is_zero() {
                    r = &r + &w[i][c].scale(&g[(c, j)]);
                }
                if !g[(i, c)].is_zero() {
                    r = &r + &w[j][c].scale(&g[(i, c)]);
                }
            }
            out.push(Condition {
                kind: ConditionKind::Metric,
                a: i,
                b: j,
                residual: r,
            });
        }
    }
    if mode >= KillingMode::Strong {
        for u in h..n {
            for c in 0..h {
                out.push(Condition {
                    kind: ConditionKind::VerticalPreserved,
                    a: u,
                    b: c,
                    residual: w[u][c].clone(),
                });
            }
        }
    }
    if mode >= KillingMode::Regular {
        for u in h..n {
            for c in h..n {
                if geom.grade_of(c) != geom.grade_of(u) {
                    out.push(Condition {
                        kind: ConditionKind::LayerPreserved,
                        a: u,
                        b: c,
                        residual: w[u][c].clone(),
                    });
                }
            }
        }
    }
    out
}

pub fn killing_check(geom: &CoordinateGeometry, k: &FrameVectorField) -> KillingCheck {
    let violations: Vec<Condition> = conditions(geom, k, KillingMode::Regular)
        .into_iter()
        .filter(|c| !c.residual.is_zero())
        .collect();
    let holds = |mode: KillingMode| violations.iter().all(|c| c.kind.mode() > mode);
    KillingCheck {
        weak: holds(KillingMode::Weak),
        strong: holds(KillingMode::Strong),
        regular: holds(KillingMode::Regular),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingSolution {
    pub mode: KillingMode,
    pub degree: u32,
    pub ansatz: Ansatz,
    pub fields: Vec<FrameVectorField>,
}

impl KillingSolution {
    pub fn dimension(&self) -> usize {
        self.fields.len()
    }
}

/// The ansatz basis fields: a monomial times a coordinate partial or a frame field.
pub fn ansatz_basis(
    geom: &CoordinateGeometry,
    degree: u32,
    ansatz: Ansatz,
) -> Vec<FrameVectorField> {
    let n = geom.dim();
    let monomials = Monomial::up_to_degree(&geom.chart().kinds, degree);
    let mut out = Vec::with_capacity(n * monomials.len());
    for i in 0..n {
        for m in &monomials {
            let p = SymExpr::term(m.clone(), Rational::from_integer(1.into()));
            out.push(match ansatz {
                Ansatz::Coordinate => FrameVectorField::partial(n, i).times(&p),
                Ansatz::Frame => geom.frame()[i].times(&p),
            });
        }
    }
    out
}

/// Killing fields of the ansatz class as the null space of one coefficient-matching system.
pub fn killing_solve(
    geom: &CoordinateGeometry,
    degree: u32,
    mode: KillingMode,
    ansatz: Ansatz,
) -> KillingSolution {
    let basis = ansatz_basis(geom, degree, ansatz);
    let columns: Vec<Vec<SymExpr>> = std::thread::scope(|s| {
        let workers = std::thread::available_parallelism()
            .map_or(1, |p| p.get())
            .min(8);
        let chunk = basis.len().div_ceil(workers).max(1);
        let handles: Vec<_> = basis
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|f| {
                            conditions(geom, f, mode)
                                .into_iter()
                                .map(|c| c.residual)
                                .collect()
                        })
                        .collect::<Vec<Vec<SymExpr>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut rows: BTreeMap<(usize, Monomial), Vec<(usize, Rational)>> = BTreeMap::new();
    for (col, residuals) in columns.iter().enumerate() {
        for (idx, r) in residuals.iter().enumerate() {
            for (m, c) in r.terms() {
                rows.entry((idx, m.clone()))
                    .or_default()
                    .push((col, c.clone()));
            }
        }
    }
    let mut reducer = RowReducer::new(basis.len());
    for entries in rows.into_values() {
        reducer.insert(crate::exact::sparse_row(entries));
    }
    let fields = reducer
        .null_space()
        .into_iter()
        .map(|coeffs| combine(geom.dim(), &coeffs, &basis))
        .collect();
    KillingSolution {
        mode,
        degree,
        ansatz,
        fields,
    }
}

fn combine(n: usize, coeffs: &[Rational], basis: &[FrameVectorField]) -> FrameVectorField {
    let mut out = FrameVectorField::zero(n);
    for (c, f) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            out = out.add(&f.times(&SymExpr::constant(c.clone())));
        }
    }
    out
}

/// Flattens fields onto the `(coordinate, monomial)` coefficient basis.
fn flatten(fields: &[&FrameVectorField]) -> Vec<Vector> {
    let mut keys: Vec<(usize, Monomial)> = fields
        .iter()
        .flat_map(|f| {
            f.coefficients
                .iter()
                .enumerate()
                .flat_map(|(i, c)| c.terms().map(move |(m, _)| (i, m.clone())))
        })
        .collect();
    keys.sort();
    keys.dedup();
    fields
        .iter()
        .map(|f| {
            keys.iter()
                .map(|(i, m)| f.coefficients[*i].coefficient(m))
                .collect()
        })
        .collect()
}

/// Equality of the real spans of two families of fields.
pub fn same_span(a: &[FrameVectorField], b: &[FrameVectorField]) -> bool {
    let all: Vec<&FrameVectorField> = a.iter().chain(b).collect();
    let flat = flatten(&all);
    let width = flat.first().map_or(0, Vec::len);
    let sa = Subspace::span(width, flat[..a.len()].to_vec());
    let sb = Subspace::span(width, flat[a.len()..].to_vec());
    sa.same_as(&sb)
}

/// Basis of the coefficient vectors `c` with `Σ c_i fields[i] = 0`.
pub fn linear_relations(fields: &[FrameVectorField]) -> Vec<Vector> {
    let refs: Vec<&FrameVectorField> = fields.iter().collect();
    let flat = flatten(&refs);
    let width = flat.first().map_or(0, Vec::len);
    ExactMatrix::from_columns(width, &flat)
        .null_space()
        .into_basis()
}

/// Dimension of the span of a family of fields.
pub fn span_dim(fields: &[FrameVectorField]) -> usize {
    let refs: Vec<&FrameVectorField> = fields.iter().collect();
    let flat = flatten(&refs);
    let width = flat.first().map_or(0, Vec::len);
    Subspace::span(width, flat).dim()
}
