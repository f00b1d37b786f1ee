//! JSON geometry manifests.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use srgeom::catalog::Entry;
use srgeom::coordfield::{
    Chart, CoordError, CoordinateGeometry, FrameVectorField, SymExpr, VarKind,
};
use srgeom::exact::{int, parse_rational, render, ExactMatrix, Rational};
use srgeom::liealg::{GradedLieGeometry, LieError, Tensor};

use crate::expr::parse_expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifestKind {
    Lie,
    Coordinate,
}

/// A frame index given by position or by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryManifest {
    pub kind: ManifestKind,
    pub name: String,
    /// Frame vector names, horizontal first.
    pub frame: Vec<String>,
    /// Layer sizes `[h, v1, v2, …]`.
    pub grading: Vec<usize>,
    /// Sparse `[a, b, k, c]` with `[E_a, E_b] = … + c E_k`; `[E_b, E_a]` is implied.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub structure_constants: Vec<(FrameRef, FrameRef, FrameRef, Value)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coordinates: Vec<String>,
    /// Coordinates `θ` entering only through the pair `(cos θ, sin θ)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub circle_coordinates: Vec<String>,
    /// Coordinate components of each frame vector.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frame_fields: Vec<Vec<String>>,
    /// One gram block per layer; identity when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<Vec<Value>>>>,
    /// Coordinate components of fields to verify.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub killing_candidates: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver_degree: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ManifestError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Semantic(String),
}

/// A geometry that failed validation after parsing.
#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Coordinates(#[from] CoordError),
}

pub enum Geometry {
    Lie(GradedLieGeometry),
    Coordinate(CoordinateGeometry),
}

/// A built manifest together with its parsed Killing candidates.
pub struct Built {
    pub geometry: Geometry,
    pub candidates: Vec<FrameVectorField>,
}

fn semantic(message: impl Into<String>) -> ManifestError {
    ManifestError::Semantic(message.into())
}

pub fn parse_manifest(text: &str) -> Result<GeometryManifest, ManifestError> {
    let m: GeometryManifest = serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            semantic(format!("line {}, column {}: {e}", e.line(), e.column()))
        } else {
            ManifestError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            }
        }
    })?;
    m.check()?;
    Ok(m)
}

pub fn emit_manifest(m: &GeometryManifest) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("manifest serializes");
    s.push('\n');
    s
}

fn literal(v: &Value, context: &str) -> Result<Rational, ManifestError> {
    let bad = || {
        semantic(format!(
            "{context}: non-rational literal {v}; write exact values as \"p/q\""
        ))
    };
    match v {
        Value::Number(n) => n.as_i64().map(int).ok_or_else(bad),
        Value::String(s) => parse_rational(s).map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn text_literal(r: &Rational) -> Value {
    Value::String(render(r))
}

impl GeometryManifest {
    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    fn frame_index(&self, r: &FrameRef, context: &str) -> Result<usize, ManifestError> {
        let n = self.dim();
        match r {
            FrameRef::Index(i) if *i < n => Ok(*i),
            FrameRef::Index(i) => Err(semantic(format!(
                "{context}: index {i} out of range for {n} frame vectors"
            ))),
            FrameRef::Name(s) => self
                .frame
                .iter()
                .position(|f| f == s)
                .ok_or_else(|| semantic(format!("{context}: unknown frame vector {s:?}"))),
        }
    }

    /// Dimension and reference checks that need no geometry.
    fn check(&self) -> Result<(), ManifestError> {
        let n = self.dim();
        let total: usize = self.grading.iter().sum();
        if total != n {
            return Err(semantic(format!(
                "grading {:?} sums to {total} but the frame has {n} vectors",
                self.grading
            )));
        }
        if self.grading.contains(&0) {
            return Err(semantic("grading has an empty layer"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for f in &self.frame {
            if !seen.insert(f) {
                return Err(semantic(format!("duplicate frame vector {f:?}")));
            }
        }
        if let Some(blocks) = &self.gram {
            if blocks.len() != self.grading.len() {
                return Err(semantic(format!(
                    "gram has {} blocks for {} layers",
                    blocks.len(),
                    self.grading.len()
                )));
            }
            for (j, (block, &d)) in blocks.iter().zip(&self.grading).enumerate() {
                if block.len() != d || block.iter().any(|row| row.len() != d) {
                    return Err(semantic(format!("gram block {j} must be {d}x{d}")));
                }
                for row in block {
                    for v in row {
                        literal(v, &format!("gram block {j}"))?;
                    }
                }
            }
        }
        match self.kind {
            ManifestKind::Lie => {
                if !self.coordinates.is_empty()
                    || !self.frame_fields.is_empty()
                    || !self.circle_coordinates.is_empty()
                {
                    return Err(semantic(
                        "lie manifests take structure_constants, not coordinates",
                    ));
                }
                if !self.killing_candidates.is_empty() || self.solver_degree.is_some() {
                    return Err(semantic(
                        "Killing candidates and solver degree need a coordinate manifest",
                    ));
                }
                self.structure()?;
            }
            ManifestKind::Coordinate => {
                if !self.structure_constants.is_empty() {
                    return Err(semantic(
                        "coordinate manifests derive structure constants from frame_fields",
                    ));
                }
                if self.coordinates.len() != n {
                    return Err(semantic(format!(
                        "{} coordinates for {n} frame vectors",
                        self.coordinates.len()
                    )));
                }
                for c in &self.circle_coordinates {
                    if !self.coordinates.contains(c) {
                        return Err(semantic(format!(
                            "circle coordinate {c:?} is not a coordinate"
                        )));
                    }
                }
                if self.frame_fields.len() != n {
                    return Err(semantic(format!(
                        "{} frame fields for {n} frame vectors",
                        self.frame_fields.len()
                    )));
                }
                let chart = self.chart();
                for (name, comps) in self.frame.iter().zip(&self.frame_fields) {
                    self.field(&chart, comps, &format!("frame field {name}"))?;
                }
                for (i, comps) in self.killing_candidates.iter().enumerate() {
                    self.field(&chart, comps, &format!("Killing candidate {i}"))?;
                }
            }
        }
        Ok(())
    }

    fn structure(&self) -> Result<Tensor, ManifestError> {
        let n = self.dim();
        let mut c = Tensor::zeros(3, n);
        let mut given: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (i, (a, b, k, v)) in self.structure_constants.iter().enumerate() {
            let context = format!("structure constant {i}");
            let (a, b, k) = (
                self.frame_index(a, &context)?,
                self.frame_index(b, &context)?,
                self.frame_index(k, &context)?,
            );
            let v = literal(v, &context)?;
            if a == b {
                if !v.is_zero() {
                    return Err(semantic(format!("{context}: [E, E] must vanish")));
                }
                continue;
            }
            let (key, value) = if a < b {
                ((a, b, k), v)
            } else {
                ((b, a, k), -v)
            };
            if let Some(old) = given.get(&key) {
                if *old != value {
                    return Err(semantic(format!(
                        "{context}: conflicts with an earlier entry"
                    )));
                }
            }
            given.insert(key, value);
        }
        for ((a, b, k), v) in given {
            c[[b, a, k]] = -v.clone();
            c[[a, b, k]] = v;
        }
        Ok(c)
    }

    fn chart(&self) -> Chart {
        let kinds = self
            .coordinates
            .iter()
            .map(|c| {
                if self.circle_coordinates.contains(c) {
                    VarKind::Angle
                } else {
                    VarKind::Line
                }
            })
            .collect();
        Chart::new(self.coordinates.clone(), kinds)
    }

    fn field(
        &self,
        chart: &Chart,
        comps: &[String],
        context: &str,
    ) -> Result<FrameVectorField, ManifestError> {
        let n = self.dim();
        if comps.len() != n {
            return Err(semantic(format!(
                "{context}: {} components for {n} coordinates",
                comps.len()
            )));
        }
        comps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_expr(s, chart).map_err(|e| semantic(format!("{context}, component {i}: {e}")))
            })
            .collect::<Result<Vec<SymExpr>, _>>()
            .map(FrameVectorField::new)
    }

    fn gram_matrix(&self) -> Result<Option<ExactMatrix>, ManifestError> {
        let Some(blocks) = &self.gram else {
            return Ok(None);
        };
        let n = self.dim();
        let mut g = ExactMatrix::zeros(n, n);
        let mut offset = 0;
        for (j, block) in blocks.iter().enumerate() {
            for (r, row) in block.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    g[(offset + r, offset + c)] = literal(v, &format!("gram block {j}"))?;
                }
            }
            offset += block.len();
        }
        Ok(Some(g))
    }

    /// The validated geometry.
    pub fn build(&self) -> Result<Built, BuildError> {
        self.check()?;
        let gram = self.gram_matrix()?;
        match self.kind {
            ManifestKind::Lie => {
                let n = self.dim();
                let geom = GradedLieGeometry::new(
                    self.name.clone(),
                    self.frame.clone(),
                    self.grading.clone(),
                    self.structure()?,
                    gram.unwrap_or_else(|| ExactMatrix::identity(n)),
                );
                geom.ensure_valid()?;
                Ok(Built {
                    geometry: Geometry::Lie(geom),
                    candidates: Vec::new(),
                })
            }
            ManifestKind::Coordinate => {
                let chart = self.chart();
                let frame = self
                    .frame
                    .iter()
                    .zip(&self.frame_fields)
                    .map(|(name, comps)| self.field(&chart, comps, &format!("frame field {name}")))
                    .collect::<Result<Vec<_>, _>>()?;
                let candidates = self
                    .killing_candidates
                    .iter()
                    .enumerate()
                    .map(|(i, comps)| self.field(&chart, comps, &format!("Killing candidate {i}")))
                    .collect::<Result<Vec<_>, _>>()?;
                let geom = CoordinateGeometry::new(
                    self.name.clone(),
                    chart,
                    self.frame.clone(),
                    frame,
                    self.grading.clone(),
                    gram,
                )?;
                if let Some(lie) = geom.linked_lie() {
                    lie.ensure_valid()?;
                }
                Ok(Built {
                    geometry: Geometry::Coordinate(geom),
                    candidates,
                })
            }
        }
    }
}

fn gram_blocks(gram: &ExactMatrix, grading: &[usize]) -> Option<Vec<Vec<Vec<Value>>>> {
    if *gram == ExactMatrix::identity(gram.rows()) {
        return None;
    }
    let mut offset = 0;
    let mut blocks = Vec::new();
    for &d in grading {
        blocks.push(
            (0..d)
                .map(|r| {
                    (0..d)
                        .map(|c| text_literal(&gram[(offset + r, offset + c)]))
                        .collect()
                })
                .collect(),
        );
        offset += d;
    }
    Some(blocks)
}

/// The manifest of a Lie geometry, listing each bracket once.
pub fn lie_manifest(geom: &GradedLieGeometry) -> GeometryManifest {
    let n = geom.dim();
    let names = geom.frame_names();
    let mut structure_constants = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for (k, v) in geom.bracket_frame(a, b).iter().enumerate() {
                if !v.is_zero() {
                    structure_constants.push((
                        FrameRef::Name(names[a].clone()),
                        FrameRef::Name(names[b].clone()),
                        FrameRef::Name(names[k].clone()),
                        text_literal(v),
                    ));
                }
            }
        }
    }
    GeometryManifest {
        kind: ManifestKind::Lie,
        name: geom.name().to_string(),
        frame: names.to_vec(),
        grading: geom.grading().to_vec(),
        structure_constants,
        coordinates: Vec::new(),
        circle_coordinates: Vec::new(),
        frame_fields: Vec::new(),
        gram: gram_blocks(geom.gram(), geom.grading()),
        killing_candidates: Vec::new(),
        solver_degree: None,
    }
}

/// The manifest of a coordinate geometry.
pub fn coordinate_manifest(
    geom: &CoordinateGeometry,
    solver_degree: Option<u32>,
) -> GeometryManifest {
    let chart = geom.chart();
    GeometryManifest {
        kind: ManifestKind::Coordinate,
        name: geom.name().to_string(),
        frame: geom.frame_names().to_vec(),
        grading: geom.grading().to_vec(),
        structure_constants: Vec::new(),
        coordinates: chart.names.clone(),
        circle_coordinates: chart
            .names
            .iter()
            .zip(&chart.kinds)
            .filter(|(_, k)| **k == VarKind::Angle)
            .map(|(n, _)| n.clone())
            .collect(),
        frame_fields: geom
            .frame()
            .iter()
            .map(|f| {
                f.coefficients
                    .iter()
                    .map(|c| c.render(&chart.names, &chart.kinds))
                    .collect()
            })
            .collect(),
        gram: gram_blocks(geom.gram(), geom.grading()),
        killing_candidates: Vec::new(),
        solver_degree,
    }
}

/// The catalog entry as a manifest: coordinates when the catalog has a
/// chart, structure constants otherwise.
pub fn catalog_manifest(entry: &Entry) -> GeometryManifest {
    match entry.coordinates() {
        Some(cg) => coordinate_manifest(&cg, entry.solver_degree()),
        None => lie_manifest(&entry.lie()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use srgeom::catalog::standard_entries;

    #[test]
    fn catalog_round_trips() {
        for e in standard_entries().into_iter().chain([Entry::Carnot(3)]) {
            let m = catalog_manifest(&e);
            let text = emit_manifest(&m);
            let back = parse_manifest(&text).unwrap();
            assert_eq!(back, m, "{}", e.name());
            let built = back.build().unwrap();
            let lie = match built.geometry {
                Geometry::Lie(g) => g,
                Geometry::Coordinate(cg) => cg.linked_lie().unwrap(),
            };
            assert_eq!(lie.structure(), e.lie().structure(), "{}", e.name());
            assert_eq!(lie.grading(), e.lie().grading());
        }
    }

    #[test]
    fn grading_mismatch_is_semantic() {
        let mut m = catalog_manifest(&Entry::Sl(2));
        m.grading = vec![2, 2];
        let err = parse_manifest(&emit_manifest(&m)).unwrap_err();
        assert!(
            matches!(err, ManifestError::Semantic(ref s) if s.contains("sums to 4")),
            "{err}"
        );
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_manifest("{\n  \"kind\": \"lie\",\n  \"name\": }").unwrap_err();
        assert!(
            matches!(err, ManifestError::Syntax { line: 3, .. }),
            "{err}"
        );
    }

    #[test]
    fn float_literals_are_rejected() {
        let text = r#"{"kind":"lie","name":"h","frame":["X","Y","T"],"grading":[2,1],
            "structure_constants":[["X","Y","T",0.5]]}"#;
        let err = parse_manifest(text).unwrap_err();
        assert!(err.to_string().contains("non-rational literal"), "{err}");
        let text = text.replace("0.5", "\"1/2\"");
        assert!(parse_manifest(&text).is_ok());
    }

    #[test]
    fn implied_antisymmetry_and_conflicts() {
        let text = r#"{"kind":"lie","name":"h","frame":["X","Y","T"],"grading":[2,1],
            "structure_constants":[["Y","X","T","-1"],[0,1,2,1]]}"#;
        let m = parse_manifest(text).unwrap();
        let Geometry::Lie(g) = m.build().unwrap().geometry else {
            panic!()
        };
        assert_eq!(g.structure(), srgeom::catalog::heisenberg(1).structure());
        let bad = text.replace("[0,1,2,1]", "[0,1,2,2]");
        assert!(parse_manifest(&bad).is_err());
    }

    #[test]
    fn engel_frame_expressions_link_to_structure_constants() {
        let text = r#"{"kind":"coordinate","name":"engel","frame":["X","Y","T1","T2"],"grading":[2,1,1],
            "coordinates":["x","y","t1","t2"],
            "frame_fields":[["1","0","-y","-t1"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#;
        let m = parse_manifest(text).unwrap();
        let Geometry::Coordinate(cg) = m.build().unwrap().geometry else {
            panic!()
        };
        let lie = cg.linked_lie().unwrap();
        assert_eq!(lie.structure(), srgeom::catalog::engel().structure());
    }

    #[test]
    fn validation_failures_are_build_errors() {
        let text = r#"{"kind":"lie","name":"bad","frame":["A","B","C"],"grading":[2,1],
            "structure_constants":[["A","B","C","1"],["A","C","A","1"]]}"#;
        let m = parse_manifest(text).unwrap();
        assert!(matches!(m.build(), Err(BuildError::Lie(_))));
        let text = r#"{"kind":"lie","name":"h","frame":["X","Y","T"],"grading":[2,1],
            "structure_constants":[["X","Y","T","1"]],
            "gram":[[["1","0"],["0","-1"]],[["1"]]]}"#;
        assert!(matches!(
            parse_manifest(text).unwrap().build(),
            Err(BuildError::Lie(_))
        ));
    }

    #[test]
    fn unknown_names_and_ranges() {
        let base = r#"{"kind":"lie","name":"h","frame":["X","Y","T"],"grading":[2,1],"structure_constants":[REF]}"#;
        for bad in [
            r#"["X","Z","T","1"]"#,
            r#"[0,5,2,"1"]"#,
            r#"["X","Y","T","x"]"#,
        ] {
            let text = base.replace("REF", bad);
            assert!(
                matches!(parse_manifest(&text), Err(ManifestError::Semantic(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn one_is_rendered_plainly() {
        assert_eq!(text_literal(&int(1)), Value::String("1".into()));
    }
}
