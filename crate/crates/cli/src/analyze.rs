//! The full analysis pipeline and its report.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};
use srgeom::bounds::{aggregate, torsion_decomposition, BoundReport, Certified};
use srgeom::coordfield::{
    killing_check, killing_solve, Ansatz, CoordinateGeometry, FrameVectorField, KillingMode,
};
use srgeom::exact::{render, Rational, Subspace};
use srgeom::invariants::{
    check_pointwise_identities, classify, metric_extension_invariance, sub_ricci, ExtensionReport,
    IdentityReport, SymbolicFrame,
};
use srgeom::liealg::{
    bianchi_failures, build_connection, curvature, filtration, torsion, uniqueness_defect,
    verify_connection, GradedLieGeometry, Tensor,
};

use crate::manifest::{emit_manifest, BuildError, Built, Geometry, GeometryManifest, ManifestKind};

/// Solver degree when solving is requested without one.
pub const DEFAULT_DEGREE: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Solve at this degree, overriding the manifest's solver degree.
    pub solve_degree: Option<u32>,
    /// Solve even when the manifest has no solver degree.
    pub solve: bool,
    pub mode: KillingMode,
    pub check_identities: bool,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            solve_degree: None,
            solve: false,
            mode: KillingMode::Strong,
            check_identities: false,
            seed: 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AnalyzeError {
    #[error("validation failed: {0}")]
    Validation(#[from] BuildError),
    /// The built connection fails its own axioms.
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

/// A pipeline stage that either ran or was skipped with a reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section<T> {
    Done(T),
    Skipped(String),
}

impl<T: Serialize> Serialize for Section<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Skipped<'a> {
            skipped: &'a str,
        }
        match self {
            Section::Done(t) => t.serialize(s),
            Section::Skipped(reason) => Skipped { skipped: reason }.serialize(s),
        }
    }
}

impl<T> Section<T> {
    pub fn done(&self) -> Option<&T> {
        match self {
            Section::Done(t) => Some(t),
            Section::Skipped(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub manifest_sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometrySummary {
    pub name: String,
    pub kind: ManifestKind,
    pub dim: usize,
    pub frame: Vec<String>,
    pub grading: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coordinates: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub valid: bool,
    pub structure: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationSummary {
    pub dims: Vec<usize>,
    pub bracket_generating: bool,
    pub step: Option<usize>,
    pub regular: bool,
}

/// A nonzero tensor component, indexed by frame names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub index: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionSummary {
    pub metric_compatible: bool,
    pub layers_parallel: bool,
    pub layer_torsion_free: bool,
    pub mixed_symmetric: bool,
    /// Dimension of the solution space of the homogeneous axiom system.
    pub uniqueness_defect: usize,
    /// `∇_{E_a} E_b = Σ_k Γ E_k` as `[a, b, k]`.
    pub coefficients: Vec<TableEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvatureSummary {
    /// `R(E_a, E_b) E_c = Σ_d R E_d` as `[a, b, c, d]`.
    pub entries: Vec<TableEntry>,
    pub bianchi_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagsSummary {
    pub h_normal: bool,
    pub v_normal: bool,
    pub strictly_normal: bool,
    pub vm_integrable: bool,
    pub rigidity_tensor: Vec<String>,
    pub rigidity_vector: Vec<String>,
    pub rigidity_class: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionSummary {
    pub kernel: Vec<String>,
    pub blocks: Vec<Vec<String>>,
    pub image_dims: Vec<usize>,
    pub strong: bool,
    pub frame_aligned: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateResult {
    pub index: usize,
    pub weak: bool,
    pub strong: bool,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KillingSummary {
    pub solve: Section<SolveSummary>,
    pub candidates: Vec<CandidateResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveSummary {
    pub mode: String,
    pub degree: u32,
    pub ansatz: String,
    pub dimension: usize,
    /// Coordinate components of a basis.
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentitySummary {
    pub seed: u64,
    pub pointwise: Section<IdentityReport>,
    pub metric_extension: ExtensionReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub provenance: Provenance,
    pub geometry: GeometrySummary,
    pub validation: Validation,
    pub filtration: Section<FiltrationSummary>,
    pub connection: Section<ConnectionSummary>,
    /// `Tor(E_a, E_b) = Σ_k T E_k` as `[a, b, k]`.
    pub torsion: Section<Vec<TableEntry>>,
    pub curvature: Section<CurvatureSummary>,
    pub flags: Section<FlagsSummary>,
    pub sub_ricci: Section<Vec<Vec<String>>>,
    pub decomposition: Section<DecompositionSummary>,
    pub bounds: Section<BoundReport>,
    pub killing: Section<KillingSummary>,
    pub identities: Section<IdentitySummary>,
}

fn hash(m: &GeometryManifest) -> String {
    hex::encode(Sha256::digest(emit_manifest(m).as_bytes()))
}

fn table(t: &Tensor, names: &[String]) -> Vec<TableEntry> {
    t.nonzero_entries()
        .map(|(idx, v)| TableEntry {
            index: idx.iter().map(|&i| names[i].clone()).collect(),
            value: render(v),
        })
        .collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(render).collect()
}

/// `Σ v_i E_i` written with frame names.
fn combination(v: &[Rational], names: &[String]) -> String {
    let mut out = String::new();
    for (x, name) in v.iter().zip(names) {
        if x.is_zero() {
            continue;
        }
        let sign = if x.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if x.is_negative() {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let mag = x.abs();
        if !mag.is_one() {
            let _ = write!(out, "{}*", render(&mag));
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn basis(s: &Subspace, names: &[String]) -> Vec<String> {
    s.basis().iter().map(|v| combination(v, names)).collect()
}

fn skip<T>(reason: &str) -> Section<T> {
    Section::Skipped(reason.to_string())
}

fn coordinate_fields(cg: &CoordinateGeometry, fields: &[FrameVectorField]) -> Vec<Vec<String>> {
    let chart = cg.chart();
    fields
        .iter()
        .map(|f| {
            f.coefficients
                .iter()
                .map(|c| c.render(&chart.names, &chart.kinds))
                .collect()
        })
        .collect()
}

struct LieStages {
    filtration: Section<FiltrationSummary>,
    connection: Section<ConnectionSummary>,
    torsion: Section<Vec<TableEntry>>,
    curvature: Section<CurvatureSummary>,
    flags: Section<FlagsSummary>,
    sub_ricci: Section<Vec<Vec<String>>>,
    decomposition: Section<DecompositionSummary>,
}

fn lie_stages(geom: &GradedLieGeometry) -> Result<LieStages, AnalyzeError> {
    let names = geom.frame_names().to_vec();
    let f = filtration(geom);
    let filtration = Section::Done(FiltrationSummary {
        dims: f.terms.iter().map(Subspace::dim).collect(),
        bracket_generating: f.bracket_generating,
        step: f.step,
        regular: f.regular,
    });
    let conn = build_connection(geom).map_err(|e| AnalyzeError::Internal(e.to_string()))?;
    let axioms = verify_connection(geom, &conn);
    let defect = uniqueness_defect(geom);
    if !axioms.all() || defect != 0 {
        return Err(AnalyzeError::Internal(format!(
            "canonical connection fails its axioms ({axioms:?}, uniqueness defect {defect})"
        )));
    }
    let connection = Section::Done(ConnectionSummary {
        metric_compatible: axioms.metric_compatible,
        layers_parallel: axioms.layers_parallel,
        layer_torsion_free: axioms.layer_torsion_free,
        mixed_symmetric: axioms.mixed_symmetric,
        uniqueness_defect: defect,
        coefficients: table(&conn.gamma, &names),
    });
    let tors = torsion(geom, &conn);
    let curv = curvature(geom, &conn);
    let torsion_table = Section::Done(table(&tors.tor, &names));
    let curvature_summary = Section::Done(CurvatureSummary {
        entries: table(&curv.riem, &names),
        bianchi_failures: bianchi_failures(&tors, &curv).len(),
    });

    // Flags, sub-Ricci and the torsion decomposition use the basic grading.
    let basic = geom.basic();
    let bconn = build_connection(&basic).map_err(|e| AnalyzeError::Internal(e.to_string()))?;
    let btors = torsion(&basic, &bconn);
    let bcurv = curvature(&basic, &bconn);
    let fl = classify(&basic, &btors);
    let flags = Section::Done(FlagsSummary {
        h_normal: fl.h_normal,
        v_normal: fl.v_normal,
        strictly_normal: fl.strictly_normal,
        vm_integrable: fl.vm_integrable,
        rigidity_tensor: strings(&fl.rigidity_tensor),
        rigidity_vector: strings(&fl.rigidity_vector),
        rigidity_class: fl.rigidity_class.label().to_string(),
    });
    let rc = sub_ricci(&basic, &btors, &bcurv);
    let sub_ricci = Section::Done((0..geom.dim()).map(|a| strings(rc.matrix.row(a))).collect());
    let d = torsion_decomposition(&basic, &btors);
    let decomposition = Section::Done(DecompositionSummary {
        kernel: basis(&d.kernel, &names),
        blocks: d.blocks.iter().map(|b| basis(b, &names)).collect(),
        image_dims: d.v_images.iter().map(Subspace::dim).collect(),
        strong: d.strong,
        frame_aligned: d.frame_aligned,
    });
    Ok(LieStages {
        filtration,
        connection,
        torsion: torsion_table,
        curvature: curvature_summary,
        flags,
        sub_ricci,
        decomposition,
    })
}

/// Runs every stage on a manifest. The report depends only on the manifest
/// and the options.
pub fn analyze(
    manifest: &GeometryManifest,
    options: &AnalyzeOptions,
) -> Result<AnalysisReport, AnalyzeError> {
    let Built {
        geometry,
        candidates,
    } = manifest.build()?;
    let (lie, coords) = match geometry {
        Geometry::Lie(g) => (Some(g), None),
        Geometry::Coordinate(cg) => (cg.linked_lie(), Some(cg)),
    };
    let provenance = Provenance {
        tool: "srgeom".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        manifest_sha256: hash(manifest),
    };
    let geometry = GeometrySummary {
        name: manifest.name.clone(),
        kind: manifest.kind,
        dim: manifest.dim(),
        frame: manifest.frame.clone(),
        grading: manifest.grading.clone(),
        coordinates: manifest.coordinates.clone(),
    };
    let validation = Validation {
        valid: true,
        structure: if lie.is_some() {
            "constant structure constants".into()
        } else {
            "non-constant structure functions".into()
        },
    };

    const NO_LIE: &str = "structure functions are not constant";
    let stages = match &lie {
        Some(g) => lie_stages(g)?,
        None => LieStages {
            filtration: skip(NO_LIE),
            connection: skip(NO_LIE),
            torsion: skip(NO_LIE),
            curvature: skip(NO_LIE),
            flags: skip(NO_LIE),
            sub_ricci: skip(NO_LIE),
            decomposition: skip(NO_LIE),
        },
    };

    let degree = options
        .solve_degree
        .or(manifest.solver_degree)
        .or(options.solve.then_some(DEFAULT_DEGREE));
    let mut certified = Certified::default();
    let mut solved: Option<Vec<FrameVectorField>> = None;
    let killing = match &coords {
        None => skip("Killing fields need a coordinate manifest"),
        Some(cg) => {
            let candidates = candidates
                .iter()
                .enumerate()
                .map(|(index, k)| {
                    let c = killing_check(cg, k);
                    CandidateResult {
                        index,
                        weak: c.weak,
                        strong: c.strong,
                        regular: c.regular,
                    }
                })
                .collect();
            let solve = match degree {
                None => skip("no solver degree in the manifest or options"),
                Some(d) => {
                    let sol = killing_solve(cg, d, options.mode, Ansatz::Coordinate);
                    match options.mode {
                        KillingMode::Strong => certified.strong_killing = Some(sol.dimension()),
                        KillingMode::Regular => {
                            certified.strong_killing = Some(sol.dimension());
                            certified.regular_killing = Some(sol.dimension());
                        }
                        KillingMode::Weak => {}
                    }
                    let summary = SolveSummary {
                        mode: options.mode.label().to_string(),
                        degree: d,
                        ansatz: "coordinate".into(),
                        dimension: sol.dimension(),
                        basis: coordinate_fields(cg, &sol.fields),
                    };
                    if options.mode != KillingMode::Weak {
                        solved = Some(sol.fields);
                    }
                    Section::Done(summary)
                }
            };
            Section::Done(KillingSummary { solve, candidates })
        }
    };

    let bounds = match &lie {
        Some(g) => Section::Done(
            aggregate(g, certified).map_err(|e| AnalyzeError::Internal(e.to_string()))?,
        ),
        None => skip(NO_LIE),
    };

    let identities = if !options.check_identities {
        skip("not requested")
    } else {
        match &lie {
            None => skip(NO_LIE),
            Some(g) => {
                let metric_extension = metric_extension_invariance(&g.basic(), options.seed)
                    .map_err(|e| AnalyzeError::Internal(e.to_string()))?;
                let pointwise = match &coords {
                    None => skip("pointwise identities need a coordinate manifest"),
                    Some(cg) => {
                        let fields: Vec<FrameVectorField> = match solved {
                            Some(f) => f,
                            None => candidates
                                .iter()
                                .filter(|k| killing_check(cg, k).strong)
                                .cloned()
                                .collect(),
                        };
                        if fields.is_empty() {
                            skip("no strong Killing fields (solve or supply candidates)")
                        } else {
                            let frame = SymbolicFrame::new(cg)
                                .map_err(|e| AnalyzeError::Internal(e.to_string()))?
                                .expect("constant structure");
                            Section::Done(check_pointwise_identities(&frame, &fields, options.seed))
                        }
                    }
                };
                Section::Done(IdentitySummary {
                    seed: options.seed,
                    pointwise,
                    metric_extension,
                })
            }
        }
    };

    Ok(AnalysisReport {
        provenance,
        geometry,
        validation,
        filtration: stages.filtration,
        connection: stages.connection,
        torsion: stages.torsion,
        curvature: stages.curvature,
        flags: stages.flags,
        sub_ricci: stages.sub_ricci,
        decomposition: stages.decomposition,
        bounds,
        killing,
        identities,
    })
}

pub fn render_json(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn entries(out: &mut String, list: &[TableEntry], sep: &str) {
    if list.is_empty() {
        out.push_str("  (all zero)\n");
    }
    for e in list {
        let _ = writeln!(out, "  {} = {}", e.index.join(sep), e.value);
    }
}

fn section<T>(out: &mut String, title: &str, s: &Section<T>, body: impl FnOnce(&mut String, &T)) {
    let _ = writeln!(out, "\n== {title} ==");
    match s {
        Section::Done(t) => body(out, t),
        Section::Skipped(reason) => {
            let _ = writeln!(out, "  skipped: {reason}");
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let g = &r.geometry;
    let _ = writeln!(
        out,
        "geometry: {} ({:?}, dim {}, grading {:?})",
        g.name, g.kind, g.dim, g.grading
    );
    let _ = writeln!(out, "frame: {}", g.frame.join(", "));
    if !g.coordinates.is_empty() {
        let _ = writeln!(out, "coordinates: {}", g.coordinates.join(", "));
    }
    let _ = writeln!(
        out,
        "provenance: {} {}, manifest sha256 {}",
        r.provenance.tool, r.provenance.version, r.provenance.manifest_sha256
    );
    let _ = writeln!(out, "validation: valid, {}", r.validation.structure);

    section(&mut out, "filtration", &r.filtration, |out, f| {
        let _ = writeln!(out, "  dims: {:?}", f.dims);
        let _ = writeln!(out, "  bracket generating: {}", yes(f.bracket_generating));
        let _ = writeln!(
            out,
            "  step: {}",
            f.step.map_or("-".to_string(), |s| s.to_string())
        );
        let _ = writeln!(out, "  regular: {}", yes(f.regular));
    });
    section(&mut out, "connection", &r.connection, |out, c| {
        let _ = writeln!(
            out,
            "  axioms: metric {}, layers parallel {}, layer torsion free {}, mixed symmetric {}",
            yes(c.metric_compatible),
            yes(c.layers_parallel),
            yes(c.layer_torsion_free),
            yes(c.mixed_symmetric)
        );
        let _ = writeln!(out, "  uniqueness defect: {}", c.uniqueness_defect);
        let _ = writeln!(out, "  nabla_a E_b, component k:");
        entries(out, &c.coefficients, " ");
    });
    section(&mut out, "torsion", &r.torsion, |out, t| {
        let _ = writeln!(out, "  Tor(a, b), component k:");
        entries(out, t, " ");
    });
    section(&mut out, "curvature", &r.curvature, |out, c| {
        let _ = writeln!(out, "  R(a, b) c, component d:");
        entries(out, &c.entries, " ");
        let _ = writeln!(out, "  Bianchi failures: {}", c.bianchi_failures);
    });
    section(&mut out, "flags", &r.flags, |out, f| {
        let _ = writeln!(
            out,
            "  H-normal {}, V-normal {}, strictly normal {}, VM integrable {}",
            yes(f.h_normal),
            yes(f.v_normal),
            yes(f.strictly_normal),
            yes(f.vm_integrable)
        );
        let _ = writeln!(out, "  rigidity tensor: [{}]", f.rigidity_tensor.join(", "));
        let _ = writeln!(out, "  rigidity vector: [{}]", f.rigidity_vector.join(", "));
        let _ = writeln!(out, "  rigidity class: {}", f.rigidity_class);
    });
    section(&mut out, "sub-Ricci", &r.sub_ricci, |out, m| {
        for row in m {
            let _ = writeln!(out, "  [{}]", row.join(", "));
        }
    });
    section(
        &mut out,
        "torsion decomposition",
        &r.decomposition,
        |out, d| {
            let _ = writeln!(out, "  kernel: [{}]", d.kernel.join(", "));
            for (i, b) in d.blocks.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  block {}: [{}], image dim {}",
                    i + 1,
                    b.join(", "),
                    d.image_dims[i]
                );
            }
            let _ = writeln!(
                out,
                "  strong: {}, frame aligned: {}",
                yes(d.strong),
                yes(d.frame_aligned)
            );
        },
    );
    section(&mut out, "bounds", &r.bounds, |out, b| {
        let _ = writeln!(out, "  crude: {} (isotropy {})", b.crude, b.crude_isotropy);
        let _ = writeln!(
            out,
            "  kernel dim: {}, blocks: {:?}, strong: {}",
            b.kernel_dim,
            b.block_dims,
            yes(b.strong_decomposition)
        );
        let _ = writeln!(
            out,
            "  commutant: {}, eigen-commutant: {}, derivation: {}",
            b.commutant_bound, b.eigen_commutant_bound, b.derivation_bound
        );
        let _ = writeln!(
            out,
            "  stabilizer contribution: {}",
            b.stabilizer_contribution
                .dim()
                .map_or("unknown".to_string(), |d| d.to_string())
        );
        let _ = writeln!(out, "  isotropy upper: {}", b.isotropy_upper);
        let _ = writeln!(
            out,
            "  dim K: {} <= dim <= {}{}",
            b.total_lower,
            b.total_upper,
            if b.exact { " (exact)" } else { "" }
        );
        if let Some(reg) = &b.regular {
            for h in &reg.higher_step_bounds {
                let _ = writeln!(
                    out,
                    "  higher step m={}: dim L = {}, bound {}",
                    h.m, h.l_dim, h.bound
                );
            }
            let _ = writeln!(
                out,
                "  regular: isotropy <= {}, {} <= dim <= {}{}",
                reg.isotropy_upper,
                reg.total_lower,
                reg.total_upper,
                if reg.exact { " (exact)" } else { "" }
            );
        }
        let _ = writeln!(out, "  used: {}", b.notes.join(", "));
    });
    section(&mut out, "Killing fields", &r.killing, |out, k| {
        match &k.solve {
            Section::Done(s) => {
                let _ = writeln!(
                    out,
                    "  {} solve, degree {}, {} ansatz: dimension {}",
                    s.mode, s.degree, s.ansatz, s.dimension
                );
                for f in &s.basis {
                    let _ = writeln!(out, "    ({})", f.join(", "));
                }
            }
            Section::Skipped(reason) => {
                let _ = writeln!(out, "  solve skipped: {reason}");
            }
        }
        for c in &k.candidates {
            let _ = writeln!(
                out,
                "  candidate {}: weak {}, strong {}, regular {}",
                c.index,
                yes(c.weak),
                yes(c.strong),
                yes(c.regular)
            );
        }
    });
    section(&mut out, "identities", &r.identities, |out, i| {
        let _ = writeln!(out, "  seed: {}", i.seed);
        let e = &i.metric_extension;
        let _ = writeln!(
            out,
            "  metric extension independence: connection {}, Tor(H,H) {}, Tor(H,V)_H {}, sub-Ricci {}",
            yes(e.horizontal_connection),
            yes(e.horizontal_torsion),
            yes(e.mixed_torsion),
            yes(e.sub_ricci)
        );
        match &i.pointwise {
            Section::Done(p) => {
                let _ = writeln!(
                    out,
                    "  pointwise ({} fields, {} points):",
                    p.fields, p.points
                );
                for x in &p.results {
                    let status = match x.holds {
                        Some(true) => "holds",
                        Some(false) => "FAILS",
                        None => "n/a",
                    };
                    let _ = writeln!(
                        out,
                        "    {}: {} ({} instances, {} failures) {}",
                        x.name, status, x.instances, x.failures, x.note
                    );
                }
            }
            Section::Skipped(reason) => {
                let _ = writeln!(out, "  pointwise skipped: {reason}");
            }
        }
    });
    out
}
