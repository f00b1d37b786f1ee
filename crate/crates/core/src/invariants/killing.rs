//! The operator `B(A) = (∇_A K_H + Tor(K, A))_H` of a Killing field and the
//! pointwise identities it satisfies.

use num_traits::Zero;
use serde::Serialize;

use super::flags::classify;
use super::ricci::{sub_ricci, trace_rm};
use crate::coordfield::{
    bracket, covariant_derivative, horizontal_laplacian, linear_relations, sample_points,
    CoordinateGeometry, FrameVectorField, SamplePoint, SymExpr,
};
use crate::exact::{unit_vector, ExactMatrix, Rational, Vector};
use crate::liealg::{
    build_connection, curvature, torsion, Connection, CurvatureData, GradedLieGeometry, LieError,
    TorsionData,
};

/// A field in frame components.
pub type FrameField = Vec<SymExpr>;

/// Constant frame data of a coordinate geometry with constant structure functions.
pub struct SymbolicFrame<'a> {
    pub coords: &'a CoordinateGeometry,
    pub lie: GradedLieGeometry,
    pub conn: Connection,
    pub tors: TorsionData,
    pub curv: CurvatureData,
}

fn constant(v: &[Rational]) -> FrameField {
    v.iter().cloned().map(SymExpr::constant).collect()
}

fn combine(coeffs: &[SymExpr], vectors: impl Fn(usize) -> Vector, n: usize) -> FrameField {
    let mut out = vec![SymExpr::zero(); n];
    for (b, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (d, x) in vectors(b).iter().enumerate() {
            if !x.is_zero() {
                out[d] = &out[d] + &c.scale(x);
            }
        }
    }
    out
}

fn add(u: &[SymExpr], v: &[SymExpr]) -> FrameField {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

fn sub(u: &[SymExpr], v: &[SymExpr]) -> FrameField {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

impl<'a> SymbolicFrame<'a> {
    /// Uses the basic grading of the linked Lie geometry.
    pub fn new(coords: &'a CoordinateGeometry) -> Result<Option<Self>, LieError> {
        let Some(lie) = coords.linked_lie() else {
            return Ok(None);
        };
        let lie = lie.basic();
        let conn = build_connection(&lie)?;
        let tors = torsion(&lie, &conn);
        let curv = curvature(&lie, &conn);
        Ok(Some(Self {
            coords,
            lie,
            conn,
            tors,
            curv,
        }))
    }

    pub fn n(&self) -> usize {
        self.lie.dim()
    }

    pub fn field(&self, k: &FrameVectorField) -> FrameField {
        self.coords.frame_components(k)
    }

    pub fn horizontal_part(&self, v: &[SymExpr]) -> FrameField {
        v.iter()
            .enumerate()
            .map(|(a, x)| {
                if self.lie.is_vertical(a) {
                    SymExpr::zero()
                } else {
                    x.clone()
                }
            })
            .collect()
    }

    pub fn vertical_part(&self, v: &[SymExpr]) -> FrameField {
        v.iter()
            .enumerate()
            .map(|(a, x)| {
                if self.lie.is_vertical(a) {
                    x.clone()
                } else {
                    SymExpr::zero()
                }
            })
            .collect()
    }

    pub fn tor(&self, u: &[SymExpr], v: &[SymExpr]) -> FrameField {
        let n = self.n();
        let mut out = vec![SymExpr::zero(); n];
        for (a, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, t) in self.tors.tor.fiber(&[a, b]).iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = &out[k] + &xy.scale(t);
                    }
                }
            }
        }
        out
    }

    pub fn nabla(&self, a: &[SymExpr], k: &[SymExpr]) -> FrameField {
        covariant_derivative(self.coords, &self.conn, a, k)
    }

    /// `R(u, v) w`.
    pub fn riem(&self, u: &[SymExpr], v: &[SymExpr], w: &[SymExpr]) -> FrameField {
        let n = self.n();
        let mut out = vec![SymExpr::zero(); n];
        for (a, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                for (c, z) in w.iter().enumerate().filter(|(_, z)| !z.is_zero()) {
                    let xyz = &(x * y) * z;
                    for (d, r) in self.curv.riem.fiber(&[a, b, c]).iter().enumerate() {
                        if !r.is_zero() {
                            out[d] = &out[d] + &xyz.scale(r);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn inner(&self, u: &[SymExpr], v: &[SymExpr]) -> SymExpr {
        let g = self.lie.gram();
        let mut out = SymExpr::zero();
        for (a, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                if !g[(a, b)].is_zero() {
                    out = &out + &(x * y).scale(&g[(a, b)]);
                }
            }
        }
        out
    }

    pub fn unit(&self, a: usize) -> FrameField {
        constant(&unit_vector(self.n(), a))
    }

    /// Columns `B(E_b)` of the operator of `K`.
    pub fn operator_b(&self, k: &[SymExpr]) -> Vec<FrameField> {
        let kh = self.horizontal_part(k);
        (0..self.n())
            .map(|b| {
                let e = self.unit(b);
                self.horizontal_part(&add(&self.nabla(&e, &kh), &self.tor(k, &e)))
            })
            .collect()
    }

    /// `Σ_b a^b B(E_b)`.
    fn apply_b(&self, b: &[FrameField], a: &[SymExpr]) -> FrameField {
        let mut out = vec![SymExpr::zero(); self.n()];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            out = add(&out, &b[i].iter().map(|y| x * y).collect::<Vec<_>>());
        }
        out
    }

    /// `(∇_w B)(E_b) = ∇_w (B E_b) − B(∇_w E_b)`.
    fn nabla_b(&self, b: &[FrameField], w: &[SymExpr], col: usize) -> FrameField {
        let e = self.unit(col);
        sub(
            &self.nabla(w, &b[col]),
            &self.apply_b(b, &self.nabla(w, &e)),
        )
    }
}

/// `B` at the identity of a Lie group for a field with value `value` and
/// frame derivatives `derivative[b] = E_b(k)` there.
pub fn operator_b_from_jet(
    geom: &GradedLieGeometry,
    conn: &Connection,
    tors: &TorsionData,
    value: &[Rational],
    derivative: &[Vector],
) -> ExactMatrix {
    let n = geom.dim();
    let kh = geom.project_horizontal(value);
    let mut columns = Vec::with_capacity(n);
    for b in 0..n {
        let e = unit_vector(n, b);
        let mut v = geom.project_horizontal(&derivative[b]);
        for (x, y) in v.iter_mut().zip(conn.nabla(&e, &kh)) {
            *x += y;
        }
        for (x, y) in v.iter_mut().zip(tors.apply(value, &e)) {
            *x += y;
        }
        columns.push(geom.project_horizontal(&v));
    }
    ExactMatrix::from_columns(n, &columns)
}

/// Jet at the identity of the right-invariant field generated by `a`:
/// value `a`, derivatives `E_b(k) = [a, E_b]`.
pub fn right_invariant_jet(geom: &GradedLieGeometry, a: &[Rational]) -> (Vector, Vec<Vector>) {
    let n = geom.dim();
    let d = (0..n)
        .map(|b| geom.bracket(a, &unit_vector(n, b)))
        .collect();
    (a.to_vec(), d)
}

/// Jet at the identity of the conjugation field `a^R − a^L`, which vanishes there.
pub fn conjugation_jet(geom: &GradedLieGeometry, a: &[Rational]) -> (Vector, Vec<Vector>) {
    let (_, d) = right_invariant_jet(geom, a);
    (vec![Rational::zero(); geom.dim()], d)
}

/// Outcome of one identity over all fields (or pairs) and sample points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub name: String,
    /// `None` when the hypotheses do not hold.
    pub holds: Option<bool>,
    pub instances: usize,
    pub failures: usize,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub points: usize,
    pub fields: usize,
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.holds != Some(false))
    }
}

pub const ELEMENTARY: &str = "elementary properties of B";
pub const VERTICAL_DERIVATIVE_SWAPPED: &str =
    "vertical derivative of K_H (swapped torsion arguments)";
pub const VERTICAL_FIELDS: &str = "vertical Killing fields";
pub const CURVATURE_FROM_B: &str = "curvature from B";
pub const BOCHNER_TRACE: &str = "Bochner trace identity";
pub const LAPLACIAN_RICCI: &str = "Laplacian and sub-Ricci";
pub const B_BRACKET: &str = "B of a bracket";
pub const B_BRACKET_FLAT: &str = "B of a bracket, flat case";
pub const B_BRACKET_FLAT_PLUS: &str = "B of a bracket, flat case (+[B_K,B_L])";

struct Tally {
    points: Vec<SamplePoint>,
    instances: usize,
    failures: usize,
}

impl Tally {
    fn new(points: &[SamplePoint]) -> Self {
        Self {
            points: points.to_vec(),
            instances: 0,
            failures: 0,
        }
    }

    /// Records one instance; the residual must vanish at every sample point.
    fn check(&mut self, residuals: &[SymExpr]) {
        self.instances += 1;
        let ok = residuals
            .iter()
            .all(|r| self.points.iter().all(|p| p.eval(r).is_zero()));
        if !ok {
            self.failures += 1;
        }
    }

    fn result(self, name: &str, note: impl Into<String>) -> IdentityResult {
        IdentityResult {
            name: name.into(),
            holds: Some(self.failures == 0),
            instances: self.instances,
            failures: self.failures,
            note: note.into(),
        }
    }
}

fn skipped(name: &str, reason: &str) -> IdentityResult {
    IdentityResult {
        name: name.into(),
        holds: None,
        instances: 0,
        failures: 0,
        note: format!("skipped: {reason}"),
    }
}

/// Basis of the combinations of `ks` whose horizontal part vanishes.
fn vertical_combinations(
    ks: &[FrameField],
    horizontal_part: impl Fn(&FrameField) -> FrameField,
) -> Vec<FrameField> {
    let parts: Vec<FrameVectorField> = ks
        .iter()
        .map(|k| FrameVectorField::new(horizontal_part(k)))
        .collect();
    linear_relations(&parts)
        .iter()
        .map(|c| {
            let mut out = vec![SymExpr::zero(); ks.first().map_or(0, Vec::len)];
            for (x, k) in c.iter().zip(ks) {
                for (o, e) in out.iter_mut().zip(k) {
                    *o = &*o + &e.scale(x);
                }
            }
            out
        })
        .collect()
}

/// `tr(∇Tor − Tor²)(E_b) = Σ_k (∇_{E_k}Tor)(E_b, E_k) − Σ_k Tor(E_k, Tor(E_k, E_b))`.
fn trace_correction_first_two(geom: &GradedLieGeometry, tors: &TorsionData, b: usize) -> Vector {
    let n = geom.dim();
    let ginv = geom.gram_inverse();
    let eb = unit_vector(n, b);
    let mut out = vec![Rational::zero(); n];
    for i in geom.horizontal() {
        for j in geom.horizontal() {
            let w = &ginv[(i, j)];
            if w.is_zero() {
                continue;
            }
            let (ei, ej) = (unit_vector(n, i), unit_vector(n, j));
            let d = tors.nabla_tor.apply(&[&ei, &eb, &ej]);
            let t = tors.apply(&ei, &tors.apply(&ej, &eb));
            for k in 0..n {
                out[k] += w * (&d[k] - &t[k]);
            }
        }
    }
    out
}

/// Checks the pointwise Killing-field identities on `fields` (strong Killing
/// fields in coordinates) at the origin and three seeded sample points.
pub fn check_pointwise_identities(
    frame: &SymbolicFrame,
    fields: &[FrameVectorField],
    seed: u64,
) -> IdentityReport {
    let points = sample_points(frame.coords.chart(), seed);
    let n = frame.n();
    let lie = &frame.lie;
    let horizontal: Vec<usize> = lie.horizontal().collect();
    let vertical: Vec<usize> = lie.vertical().collect();
    let ks: Vec<FrameField> = fields.iter().map(|f| frame.field(f)).collect();
    let bs: Vec<Vec<FrameField>> = ks.iter().map(|k| frame.operator_b(k)).collect();
    let mut results = Vec::new();

    // ∇_X K_V = Tor(X,K)_V, ∇_T K_H = Tor(T,K)_H, B skew on TM, B(VM) = 0,
    // ∇_{K_V} K_H = −Tor(K_H,K_V)_H, ∇_{K_H} K_V = −Tor(K_V,K_H)_V.
    let mut t = Tally::new(&points);
    let mut swapped = Tally::new(&points);
    for (k, b) in ks.iter().zip(&bs) {
        let kh = frame.horizontal_part(k);
        let res: Vec<SymExpr> = vertical
            .iter()
            .flat_map(|&u| {
                sub(
                    &frame.nabla(&frame.unit(u), &kh),
                    &frame.horizontal_part(&frame.tor(k, &frame.unit(u))),
                )
            })
            .collect();
        swapped.check(&res);
        let (kh, kv) = (frame.horizontal_part(k), frame.vertical_part(k));
        let mut res = Vec::new();
        for &x in &horizontal {
            let e = frame.unit(x);
            res.extend(sub(
                &frame.nabla(&e, &kv),
                &frame.vertical_part(&frame.tor(&e, k)),
            ));
        }
        for &u in &vertical {
            let e = frame.unit(u);
            res.extend(sub(
                &frame.nabla(&e, &kh),
                &frame.horizontal_part(&frame.tor(&e, k)),
            ));
            res.extend(b[u].iter().cloned());
        }
        for a in 0..n {
            for c in 0..n {
                res.push(&frame.inner(&b[a], &frame.unit(c)) + &frame.inner(&b[c], &frame.unit(a)));
            }
        }
        res.extend(add(
            &frame.nabla(&kv, &kh),
            &frame.horizontal_part(&frame.tor(&kh, &kv)),
        ));
        res.extend(add(
            &frame.nabla(&kh, &kv),
            &frame.vertical_part(&frame.tor(&kv, &kh)),
        ));
        t.check(&res);
    }
    results.push(t.result(ELEMENTARY, "strong fields"));
    results.push(swapped.result(VERTICAL_DERIVATIVE_SWAPPED, "nabla_T K_H = Tor(K,T)_H"));

    let mut t = Tally::new(&points);
    for k in vertical_combinations(&ks, |k| frame.horizontal_part(k)) {
        let res: Vec<SymExpr> = horizontal
            .iter()
            .flat_map(|&x| frame.horizontal_part(&frame.tor(&k, &frame.unit(x))))
            .collect();
        t.check(&res);
    }
    results.push(t.result(
        VERTICAL_FIELDS,
        "Tor(T, H)_H = 0 on the fields with K_H = 0",
    ));

    // R(X,K)Y = (∇_X B)(Y)
    let mut t = Tally::new(&points);
    for (k, b) in ks.iter().zip(&bs) {
        let mut res = Vec::new();
        for &x in &horizontal {
            for &y in &horizontal {
                let (ex, ey) = (frame.unit(x), frame.unit(y));
                res.extend(sub(&frame.riem(&ex, k, &ey), &frame.nabla_b(b, &ex, y)));
            }
        }
        t.check(&res);
    }
    results.push(t.result(CURVATURE_FROM_B, "R(X,K)Y = (nabla_X B)(Y)"));

    // tr Rm(K,Z) = −⟨Δ_H K_H + tr(∇Tor − Tor²)(K), Z⟩
    let trace_rm_matrix: Vec<Vec<Rational>> = (0..n)
        .map(|b| {
            horizontal
                .iter()
                .map(|&z| trace_rm(lie, &frame.curv, &unit_vector(n, b), &unit_vector(n, z)))
                .collect()
        })
        .collect();
    let corrections: Vec<Vector> = (0..n)
        .map(|b| trace_correction_first_two(lie, &frame.tors, b))
        .collect();
    let laplacians: Vec<FrameField> = ks
        .iter()
        .map(|k| horizontal_laplacian(frame.coords, &frame.conn, &frame.horizontal_part(k)))
        .collect();
    let mut t = Tally::new(&points);
    for (k, lap) in ks.iter().zip(&laplacians) {
        let corr = combine(k, |b| corrections[b].clone(), n);
        let total = add(lap, &corr);
        let res: Vec<SymExpr> = horizontal
            .iter()
            .enumerate()
            .map(|(zi, &z)| {
                let lhs = combine(k, |b| vec![trace_rm_matrix[b][zi].clone()], 1).remove(0);
                &lhs + &frame.inner(&total, &frame.unit(z))
            })
            .collect();
        t.check(&res);
    }
    results.push(t.result(
        BOCHNER_TRACE,
        "tr Rm(K,Z) = -<Lap_H K_H + tr(nabla Tor - Tor^2)(K), Z>",
    ));

    let flags = classify(lie, &frame.tors);
    let rc = sub_ricci(lie, &frame.tors, &frame.curv);
    let mut t = Tally::new(&points);
    for (k, lap) in ks.iter().zip(&laplacians) {
        let res: Vec<SymExpr> = horizontal
            .iter()
            .map(|&z| {
                let rkz = combine(k, |b| vec![rc.matrix[(b, z)].clone()], 1).remove(0);
                &frame.inner(lap, &frame.unit(z)) + &rkz
            })
            .collect();
        t.check(&res);
    }
    if flags.h_normal && flags.vm_integrable {
        results.push(t.result(LAPLACIAN_RICCI, "<Lap_H K_H, Z> = -Rc(K,Z)"));
    } else {
        let note = format!(
            "hypotheses not met (H-normal with integrable VM); {} of {} instances fail",
            t.failures, t.instances
        );
        let mut r = t.result(LAPLACIAN_RICCI, note);
        r.holds = None;
        results.push(r);
    }

    // B_[K,L] = −[B_K, B_L] + ∇_K B_L − ∇_L B_K − R(K,L) on HM
    let brackets: Vec<Vec<(usize, usize, FrameField)>> = (0..ks.len())
        .map(|i| {
            (i + 1..ks.len())
                .map(|j| {
                    let br =
                        bracket(frame.coords.chart(), &fields[i], &fields[j]).expect("same chart");
                    (i, j, frame.field(&br))
                })
                .collect()
        })
        .collect();
    let flat = frame.curv.riem.is_zero();
    let mut derived = Tally::new(&points);
    let mut flat_derived = Tally::new(&points);
    let mut flat_plus = Tally::new(&points);
    for (i, j, kl) in brackets.into_iter().flatten() {
        let b_kl = frame.operator_b(&kl);
        let (bk, bl) = (&bs[i], &bs[j]);
        let mut res = Vec::new();
        let mut res_flat_derived = Vec::new();
        let mut res_flat_plus = Vec::new();
        for &x in &horizontal {
            let commutator = sub(&frame.apply_b(bk, &bl[x]), &frame.apply_b(bl, &bk[x]));
            let rest = sub(
                &sub(&frame.nabla_b(bl, &ks[i], x), &frame.nabla_b(bk, &ks[j], x)),
                &frame.horizontal_part(&frame.riem(&ks[i], &ks[j], &frame.unit(x))),
            );
            res.extend(sub(&b_kl[x], &sub(&rest, &commutator)));
            res_flat_derived.extend(add(&b_kl[x], &commutator));
            res_flat_plus.extend(sub(&b_kl[x], &commutator));
        }
        derived.check(&res);
        if flat {
            flat_derived.check(&res_flat_derived);
            flat_plus.check(&res_flat_plus);
        }
    }
    results.push(derived.result(
        B_BRACKET,
        "B_[K,L] = -[B_K,B_L] + (nabla_K B_L) - (nabla_L B_K) - R(K,L) on H",
    ));
    if flat {
        results.push(flat_derived.result(B_BRACKET_FLAT, "R = 0: B_[K,L] = -[B_K,B_L]"));
        results.push(flat_plus.result(B_BRACKET_FLAT_PLUS, "R = 0: B_[K,L] = [B_K,B_L]"));
    } else {
        results.push(skipped(B_BRACKET_FLAT, "curvature does not vanish"));
        results.push(skipped(B_BRACKET_FLAT_PLUS, "curvature does not vanish"));
    }

    IdentityReport {
        points: points.len(),
        fields: fields.len(),
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{heisenberg_chart, so};
    use crate::coordfield::FrameVectorField;
    use crate::exact::int;

    #[test]
    fn heisenberg_rotation_operator() {
        let cg = heisenberg_chart(1);
        let frame = SymbolicFrame::new(&cg).unwrap().unwrap();
        let mut k = FrameVectorField::zero(3);
        k.coefficients[0] = -&SymExpr::var(1);
        k.coefficients[1] = SymExpr::var(0);
        let b = frame.operator_b(&frame.field(&k));
        let c = |v: [i64; 3]| -> FrameField { v.map(|x| SymExpr::constant(int(x))).to_vec() };
        assert_eq!(b, vec![c([0, 1, 0]), c([-1, 0, 0]), c([0, 0, 0])]);
    }

    #[test]
    fn translation_has_no_rotation() {
        let cg = heisenberg_chart(1);
        let frame = SymbolicFrame::new(&cg).unwrap().unwrap();
        let mut k = FrameVectorField::partial(3, 0);
        k.coefficients[2] = SymExpr::var(1).scale(&crate::exact::q(1, 2));
        let b = frame.operator_b(&frame.field(&k));
        assert!(b.iter().flatten().all(SymExpr::is_zero));
    }

    #[test]
    fn conjugation_jets_on_so3() {
        let g = so(3);
        let conn = build_connection(&g).unwrap();
        let tors = torsion(&g, &conn);
        let (v, d) = conjugation_jet(&g, &unit_vector(3, 2));
        let b = operator_b_from_jet(&g, &conn, &tors, &v, &d);
        assert!(b.column(2).iter().all(Zero::is_zero));
        assert!(!b.is_zero());
        let gb = g.gram() * &b;
        assert!(gb.add(&gb.transpose()).is_zero());
        let (v, d) = conjugation_jet(&g, &unit_vector(3, 0));
        let b = operator_b_from_jet(&g, &conn, &tors, &v, &d);
        assert!(!b.column(2).iter().all(Zero::is_zero));
    }

    #[test]
    fn right_invariant_jet_value() {
        let g = so(3);
        let a = vec![int(1), int(2), int(3)];
        let (v, d) = right_invariant_jet(&g, &a);
        assert_eq!(v, a);
        assert_eq!(d[1], g.bracket(&a, &unit_vector(3, 1)));
    }
}
