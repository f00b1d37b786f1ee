//! Acceptance suite. One PASS/FAIL line per criterion; failing sub-checks are
//! listed after the line. Known failures are sub-checks whose literal
//! statement is wrong and whose corrected form is asserted alongside; they do
//! not affect the exit status.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srgeom::bounds::{
    aggregate, commutant_bound, crude_bound, eigen_commutant_bound, higher_step_bound,
    stabilizer_contribution, torsion_decomposition, Certified, Stabilizer,
};
use srgeom::catalog::{
    engel, engel_chart, heisenberg, heisenberg_chart, rototranslation, rototranslation_chart, sl,
    so, standard_entries,
};
use srgeom::coordfield::{
    killing_check, killing_solve, same_span, span_dim, Ansatz, CoordinateGeometry,
    FrameVectorField, KillingMode, SymExpr,
};
use srgeom::exact::{int, q, unit_vector, ExactMatrix, Rational, Subspace, Vector};
use srgeom::invariants::{
    check_pointwise_identities, metric_extension_invariance, sub_ricci, IdentityReport,
    SymbolicFrame, BOCHNER_TRACE, B_BRACKET_FLAT, B_BRACKET_FLAT_PLUS, CURVATURE_FROM_B,
    ELEMENTARY, LAPLACIAN_RICCI, VERTICAL_FIELDS,
};
use srgeom::liealg::{
    bianchi_failures, build_connection, curvature, filtration, torsion, uniqueness_defect,
    verify_connection, GradedLieGeometry, TorsionData,
};

struct Check {
    label: String,
    ok: bool,
    known: Option<&'static str>,
}

#[derive(Default)]
struct Outcome {
    checks: Vec<Check>,
}

impl Outcome {
    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push(Check {
            label: label.into(),
            ok,
            known: None,
        });
    }

    /// A literal statement expected to fail, with the reason.
    fn known(&mut self, label: impl Into<String>, ok: bool, reason: &'static str) {
        self.checks.push(Check {
            label: label.into(),
            ok,
            known: Some(reason),
        });
    }
}

const KNOWN_HEISENBERG_TORSION: &str =
    "the +(0 I; -I 0) sign contradicts Tor(X_i,Y_i) = -[X_i,Y_i] = -T, asserted separately";
const KNOWN_ENGEL_SPAN: &str =
    "two listed fields are not Killing ([Y - xS1, X] = -x T2); the right-invariant span is asserted separately";
const KNOWN_LAPLACIAN_ROTO: &str =
    "requires H-normal with integrable VM; rototranslation has Tor(T,X) = Theta/2";
const KNOWN_B_BRACKET_SIGN: &str = "expanding [[K,L],X] gives -[B_K,B_L], asserted separately";

fn basic_data(g: &GradedLieGeometry) -> (GradedLieGeometry, TorsionData) {
    let b = g.basic();
    let t = torsion(&b, &build_connection(&b).unwrap());
    (b, t)
}

fn e(n: usize, i: usize) -> Vector {
    unit_vector(n, i)
}

fn scaled(n: usize, i: usize, c: Rational) -> Vector {
    let mut v = vec![Rational::zero(); n];
    v[i] = c;
    v
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::default();
    for entry in standard_entries() {
        let g = entry.lie();
        let conn = build_connection(&g).unwrap();
        let axioms = verify_connection(&g, &conn);
        out.check(format!("{} axioms {axioms:?}", entry.name()), axioms.all());
        out.check(
            format!("{} uniqueness", entry.name()),
            uniqueness_defect(&g) == 0,
        );
    }
    out
}

fn rototranslation_tensors(out: &mut Outcome, g: &GradedLieGeometry, tag: &str) {
    // Frame order X, Θ, T.
    let (x, th, t) = (0, 1, 2);
    let conn = build_connection(g).unwrap();
    let tors = torsion(g, &conn);
    let zero = vec![Rational::zero(); 3];
    let nabla = |a: usize, b: usize| conn.nabla(&e(3, a), &e(3, b));
    let tor = |a: usize, b: usize| tors.apply(&e(3, a), &e(3, b));
    out.check(
        format!("{tag} nabla_T X = Theta/2"),
        nabla(t, x) == scaled(3, th, q(1, 2)),
    );
    out.check(
        format!("{tag} nabla_T Theta = -X/2"),
        nabla(t, th) == scaled(3, x, q(-1, 2)),
    );
    out.check(
        format!("{tag} nabla T = 0"),
        (0..3).all(|a| nabla(a, t) == zero),
    );
    out.check(format!("{tag} nabla_X Theta = 0"), nabla(x, th) == zero);
    out.check(format!("{tag} nabla_Theta X = 0"), nabla(th, x) == zero);
    out.check(
        format!("{tag} Tor(T,Theta) = X/2"),
        tor(t, th) == scaled(3, x, q(1, 2)),
    );
    out.check(
        format!("{tag} Tor(T,X) = Theta/2"),
        tor(t, x) == scaled(3, th, q(1, 2)),
    );
    out.check(
        format!("{tag} Tor(X,Theta) = -T"),
        tor(x, th) == scaled(3, t, int(-1)),
    );
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::default();
    rototranslation_tensors(&mut out, &rototranslation(), "lie");
    let linked = rototranslation_chart().linked_lie();
    out.check("chart has constant structure", linked.is_some());
    if let Some(g) = linked {
        rototranslation_tensors(&mut out, &g, "chart");
    }
    out
}

fn var(i: usize) -> SymExpr {
    SymExpr::var(i)
}

fn konst(c: Rational) -> SymExpr {
    SymExpr::constant(c)
}

/// Translations `∂x_i + (y_i/2)∂t`, `∂y_i − (x_i/2)∂t`, `∂t` and the unitary
/// fields `K_{A,B}` for a basis of skew `A` and symmetric `B`.
fn heisenberg_oracle(cg: &CoordinateGeometry, n: usize) -> Vec<FrameVectorField> {
    let dim = 2 * n + 1;
    let (xc, yc, tc) = (|i: usize| i, |i: usize| n + i, 2 * n);
    let half = q(1, 2);
    let mut out = Vec::new();
    for i in 0..n {
        let mut f = FrameVectorField::partial(dim, xc(i));
        f.coefficients[tc] = var(yc(i)).scale(&half);
        out.push(f);
        let mut f = FrameVectorField::partial(dim, yc(i));
        f.coefficients[tc] = var(xc(i)).scale(&-half.clone());
        out.push(f);
    }
    out.push(FrameVectorField::partial(dim, tc));

    let frame = cg.frame();
    let k_ab = |a: &[Vec<i64>], b: &[Vec<i64>]| {
        let mut k = FrameVectorField::zero(dim);
        let mut c = SymExpr::zero();
        for i in 0..n {
            let mut ai = SymExpr::zero();
            let mut bi = SymExpr::zero();
            for j in 0..n {
                let (aij, bij) = (int(a[i][j]), int(b[i][j]));
                ai = &ai + &(&var(xc(j)).scale(&aij) + &var(yc(j)).scale(&bij));
                bi = &bi + &(&var(yc(j)).scale(&aij) - &var(xc(j)).scale(&bij));
                let xy = &var(xc(j)) * &var(yc(i));
                let quad = &(&var(xc(i)) * &var(xc(j))) + &(&var(yc(i)) * &var(yc(j)));
                c = &c + &(&xy.scale(&aij) + &quad.scale(&(bij * &half)));
            }
            k = k.add(&frame[i].times(&ai)).add(&frame[n + i].times(&bi));
        }
        k.add(&frame[2 * n].times(&c))
    };
    let zero = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut s = zero.clone();
            s[i][j] = 1;
            s[j][i] = 1;
            out.push(k_ab(&zero, &s));
            if i != j {
                let mut a = zero.clone();
                a[i][j] = 1;
                a[j][i] = -1;
                out.push(k_ab(&a, &zero));
            }
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::default();
    for n in 1..=3 {
        let g = heisenberg(n);
        let (b, tors) = basic_data(&g);
        let dim = 2 * n + 1;
        let t = 2 * n;
        let symplectic = |i: usize, j: usize| -> i64 {
            match (i < n, j < n) {
                (true, false) if j == i + n => 1,
                (false, true) if i == j + n => -1,
                _ => 0,
            }
        };
        let matrix_is = |sign: i64| {
            (0..2 * n).all(|i| {
                (0..2 * n).all(|j| {
                    tors.apply(&e(dim, i), &e(dim, j))
                        == scaled(dim, t, int(sign * symplectic(i, j)))
                })
            })
        };
        out.known(
            format!("heisenberg({n}) torsion matrix +(0 I; -I 0) T"),
            matrix_is(1),
            KNOWN_HEISENBERG_TORSION,
        );
        out.check(
            format!("heisenberg({n}) torsion matrix -(0 I; -I 0) T"),
            matrix_is(-1),
        );
        let decomp = torsion_decomposition(&b, &tors);
        out.check(
            format!("heisenberg({n}) commutant = n^2"),
            commutant_bound(&b, &tors, &decomp) == n * n,
        );
    }
    for n in 1..=2 {
        let cg = heisenberg_chart(n);
        let strong = killing_solve(&cg, 2, KillingMode::Strong, Ansatz::Coordinate);
        let weak = killing_solve(&cg, 2, KillingMode::Weak, Ansatz::Coordinate);
        let expected = 2 * n + 1 + n * n;
        out.check(
            format!(
                "heisenberg({n}) strong dim {} = {expected}",
                strong.dimension()
            ),
            strong.dimension() == expected,
        );
        out.check(
            format!("heisenberg({n}) weak = strong"),
            weak.dimension() == strong.dimension() && same_span(&weak.fields, &strong.fields),
        );
        out.check(
            format!("heisenberg({n}) <= (n+1)^2"),
            strong.dimension() <= (n + 1) * (n + 1) && weak.dimension() <= (n + 1) * (n + 1),
        );
        let oracle = heisenberg_oracle(&cg, n);
        out.check(
            format!("heisenberg({n}) unitary and translation fields are strong Killing"),
            oracle.iter().all(|f| killing_check(&cg, f).strong),
        );
        out.check(
            format!("heisenberg({n}) solved space = translations + u(n)"),
            span_dim(&oracle) == expected && same_span(&oracle, &strong.fields),
        );
    }
    out
}

fn lin(terms: &[(usize, SymExpr)], n: usize) -> FrameVectorField {
    let mut f = FrameVectorField::zero(n);
    for (i, c) in terms {
        f.coefficients[*i] = &f.coefficients[*i] + c;
    }
    f
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::default();
    let g = engel();
    let f = filtration(&g);
    out.check("engel grading regular", f.regular && f.step == Some(3));
    let tors = torsion(&g, &build_connection(&g).unwrap());
    match higher_step_bound(&g, &tors) {
        Ok(bounds) => {
            let y = Subspace::span(4, vec![e(4, 1)]);
            out.check(
                "engel higher step L = span{Y}, bound 0",
                bounds.len() == 1
                    && bounds[0].m == 1
                    && bounds[0].l.same_as(&y)
                    && bounds[0].bound == 0,
            );
        }
        Err(err) => out.check(format!("engel higher step: {err}"), false),
    }
    let report = aggregate(&g, Certified::default()).unwrap();
    out.check(
        "engel regular isotropy bound 0",
        report
            .regular
            .as_ref()
            .is_some_and(|r| r.isotropy_upper == 0),
    );

    let cg = engel_chart();
    let (x, y, t1) = (var(0), var(1), var(2));
    let one = konst(int(1));
    let s1 = lin(&[(2, one.clone()), (3, -&x)], 4);
    let s2 = FrameVectorField::partial(4, 3);
    let xy_t1 = &(&x * &y) + &t1;
    let listed = vec![
        s1.clone(),
        s2.clone(),
        cg.frame()[1].sub(&s1.times(&x)),
        cg.frame()[0].sub(&s1.times(&y)).sub(&s2.times(&xy_t1)),
    ];
    let half_x2 = (&x * &x).scale(&q(1, 2));
    let right_invariant = vec![
        FrameVectorField::partial(4, 0),
        lin(&[(1, one.clone()), (2, -&x), (3, half_x2)], 4),
        s1,
        s2,
    ];
    for mode in [KillingMode::Weak, KillingMode::Strong, KillingMode::Regular] {
        let sol = killing_solve(&cg, 2, mode, Ansatz::Coordinate);
        out.check(
            format!("engel {} solve dim {} = 4", mode.label(), sol.dimension()),
            sol.dimension() == 4,
        );
        out.known(
            format!("engel {} solution = listed span", mode.label()),
            same_span(&sol.fields, &listed),
            KNOWN_ENGEL_SPAN,
        );
        out.check(
            format!("engel {} solution = right-invariant span", mode.label()),
            same_span(&sol.fields, &right_invariant),
        );
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::default();
    for n in 2..=3 {
        let g = sl(n);
        let (b, tors) = basic_data(&g);
        let decomp = torsion_decomposition(&b, &tors);
        let dims = decomp.block_dims();
        out.check(
            format!("sl({n}) blocks {dims:?} are planes covering H"),
            !dims.is_empty()
                && dims.iter().all(|&d| d == 2)
                && decomp.kernel.is_zero()
                && dims.iter().sum::<usize>() == b.horizontal_dim(),
        );
        out.check(
            format!("sl({n}) stabilizer 0"),
            stabilizer_contribution(&decomp) == Stabilizer::Discrete,
        );
        out.check(
            format!("sl({n}) eigen-commutant 0"),
            eigen_commutant_bound(&b, &tors, &decomp) == 0,
        );
        let r = aggregate(&g, Certified::default()).unwrap();
        let expected = n * n - 1;
        out.check(
            format!(
                "sl({n}) exact {}..{} = {expected}",
                r.total_lower, r.total_upper
            ),
            r.exact && r.total_lower == expected && r.total_upper == expected,
        );
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::default();
    for n in 3..=5 {
        let g = so(n);
        let expected = (n - 1) * (n - 1);
        let group = n * (n - 1) / 2;
        let conjugations = (n - 1) * (n - 2) / 2;
        let r = aggregate(&g, Certified::default()).unwrap();
        out.check(
            format!("so({n}) crude {} = {expected}", crude_bound(&g)),
            crude_bound(&g) == expected && r.crude == expected && group + conjugations == expected,
        );
        out.check(
            format!("so({n}) upper {} = {expected}", r.total_upper),
            r.total_upper == expected,
        );
        out.check(
            format!("so({n}) lower {} = {expected}", r.total_lower),
            r.total_lower == expected && r.exact,
        );
    }
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::default();
    let (b, tors) = basic_data(&rototranslation());
    let decomp = torsion_decomposition(&b, &tors);
    out.check(
        "rototranslation eigen-commutant 0",
        eigen_commutant_bound(&b, &tors, &decomp) == 0,
    );
    let cg = rototranslation_chart();
    let strong = killing_solve(&cg, 1, KillingMode::Strong, Ansatz::Coordinate);
    let weak = killing_solve(&cg, 1, KillingMode::Weak, Ansatz::Coordinate);
    out.check(
        format!("rototranslation solve dim {} = 3", strong.dimension()),
        strong.dimension() == 3,
    );
    out.check(
        "rototranslation weak = strong",
        weak.dimension() == 3 && same_span(&weak.fields, &strong.fields),
    );
    let (x, y, c, s) = (var(0), var(1), var(2), SymExpr::sin(2));
    let hats = [
        vec![c.clone(), SymExpr::zero(), s.clone()],
        vec![s.clone(), SymExpr::zero(), -&c],
        vec![
            &(&x * &s) - &(&y * &c),
            SymExpr::one(),
            -&(&(&y * &s) + &(&x * &c)),
        ],
    ];
    let fields: Vec<FrameVectorField> = hats.iter().map(|h| cg.from_frame_components(h)).collect();
    let coordinate = [
        FrameVectorField::partial(3, 0),
        FrameVectorField::partial(3, 1),
        lin(&[(0, -&y), (1, x.clone()), (2, SymExpr::one())], 3),
    ];
    out.check(
        "hat fields match their coordinate forms",
        fields.iter().zip(&coordinate).all(|(a, b)| a == b),
    );
    out.check(
        "rototranslation solution = span{X^, Y^, Theta^}",
        same_span(&strong.fields, &fields),
    );
    out
}

fn identity_report(cg: &CoordinateGeometry, degree: u32) -> IdentityReport {
    let frame = SymbolicFrame::new(cg).unwrap().expect("constant structure");
    let sol = killing_solve(cg, degree, KillingMode::Strong, Ansatz::Coordinate);
    check_pointwise_identities(&frame, &sol.fields, 0)
}

fn holds(r: &IdentityReport, name: &str) -> bool {
    r.get(name)
        .is_some_and(|x| x.failures == 0 && x.instances > 0)
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::default();
    for entry in standard_entries() {
        let g = entry.lie();
        let conn = build_connection(&g).unwrap();
        let (t, c) = (torsion(&g, &conn), curvature(&g, &conn));
        out.check(
            format!("{} Bianchi", entry.name()),
            bianchi_failures(&t, &c).is_empty(),
        );
        let b = g.basic();
        let conn = build_connection(&b).unwrap();
        let rc = sub_ricci(&b, &torsion(&b, &conn), &curvature(&b, &conn));
        out.check(
            format!("{} sub-Ricci symmetric, zero on V", entry.name()),
            rc.is_symmetric() && rc.vanishes_on_vertical(&b),
        );
        for seed in 0..5 {
            let ext = metric_extension_invariance(&b, seed).unwrap();
            out.check(
                format!(
                    "{} extension independence seed {seed} {ext:?}",
                    entry.name()
                ),
                ext.all(),
            );
        }
    }

    let charts = [
        (heisenberg_chart(1), 2, true),
        (heisenberg_chart(2), 2, true),
        (rototranslation_chart(), 1, false),
        (engel_chart(), 2, true),
    ];
    for (cg, degree, normal) in &charts {
        let r = identity_report(cg, *degree);
        let name = cg.name();
        for id in [ELEMENTARY, CURVATURE_FROM_B] {
            out.check(format!("{name} {id}"), holds(&r, id));
        }
        // Vacuous when no Killing field is vertical.
        let vertical = r.get(VERTICAL_FIELDS);
        out.check(
            format!(
                "{name} {VERTICAL_FIELDS} ({} fields)",
                vertical.map_or(0, |v| v.instances)
            ),
            vertical.is_some_and(|v| v.failures == 0),
        );
        if name.starts_with("engel") {
            continue;
        }
        out.check(format!("{name} {BOCHNER_TRACE}"), holds(&r, BOCHNER_TRACE));
        if *normal {
            out.check(
                format!("{name} {LAPLACIAN_RICCI}"),
                holds(&r, LAPLACIAN_RICCI),
            );
        } else {
            out.known(
                format!("{name} {LAPLACIAN_RICCI}"),
                holds(&r, LAPLACIAN_RICCI),
                KNOWN_LAPLACIAN_ROTO,
            );
        }
        if name.starts_with("heisenberg") {
            out.check(
                format!("{name} {B_BRACKET_FLAT}"),
                holds(&r, B_BRACKET_FLAT),
            );
            out.known(
                format!("{name} {B_BRACKET_FLAT_PLUS}"),
                holds(&r, B_BRACKET_FLAT_PLUS),
                KNOWN_B_BRACKET_SIGN,
            );
        }
    }
    out
}

mod oracle {
    //! Dense Gauss–Jordan elimination, independent of the library.

    use super::*;

    /// Reduced row echelon form and pivot columns.
    pub fn rref(mut rows: Vec<Vector>, ncols: usize) -> (Vec<Vector>, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = Rational::one() / &rows[r][col];
            for x in rows[r].iter_mut() {
                *x *= &inv;
            }
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x -= &f * p;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        rows.truncate(r);
        (rows, pivots)
    }

    pub fn rank(rows: &[Vector], ncols: usize) -> usize {
        rref(rows.to_vec(), ncols).1.len()
    }

    pub fn null_space(rows: &[Vector], ncols: usize) -> Vec<Vector> {
        let (r, pivots) = rref(rows.to_vec(), ncols);
        (0..ncols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); ncols];
                v[free] = Rational::one();
                for (row, &p) in r.iter().zip(&pivots) {
                    v[p] = -row[free].clone();
                }
                v
            })
            .collect()
    }

    /// `U ∩ W = (U^⊥ + W^⊥)^⊥` for the standard dot product.
    pub fn intersect(u: &[Vector], w: &[Vector], n: usize) -> Vec<Vector> {
        let mut perp = null_space(u, n);
        perp.extend(null_space(w, n));
        null_space(&perp, n)
    }

    pub fn solvable(rows: &[Vector], rhs: &[Rational], ncols: usize) -> bool {
        let aug: Vec<Vector> = rows
            .iter()
            .zip(rhs)
            .map(|(r, b)| {
                let mut r = r.clone();
                r.push(b.clone());
                r
            })
            .collect();
        !rref(aug, ncols + 1).1.contains(&ncols)
    }

    pub fn same_span(a: &[Vector], b: &[Vector], n: usize) -> bool {
        let ra = rank(a, n);
        let rb = rank(b, n);
        let joined: Vec<Vector> = a.iter().chain(b).cloned().collect();
        let rj = rank(&joined, n);
        ra == rb && rj == ra
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.3) {
        return Rational::zero();
    }
    q(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn random_rows(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<Vector> {
    let rank = rng.gen_range(0..=m.min(n));
    let left: Vec<Vector> = (0..m)
        .map(|_| (0..rank).map(|_| random_rational(rng)).collect())
        .collect();
    let right: Vec<Vector> = (0..rank)
        .map(|_| (0..n).map(|_| random_rational(rng)).collect())
        .collect();
    if rng.gen_bool(0.25) {
        return (0..m)
            .map(|_| (0..n).map(|_| random_rational(rng)).collect())
            .collect();
    }
    left.iter()
        .map(|l| {
            (0..n)
                .map(|j| {
                    l.iter()
                        .zip(&right)
                        .fold(Rational::zero(), |acc, (a, r)| acc + a * &r[j])
                })
                .collect()
        })
        .collect()
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = [0usize; 3];
    for case in 0..100 {
        let m = rng.gen_range(1..=8);
        let n = rng.gen_range(1..=8);
        let rows = random_rows(&mut rng, m, n);
        let a = ExactMatrix::from_rows(rows.clone()).unwrap();

        let ns = a.null_space();
        let expected = oracle::null_space(&rows, n);
        let annihilated = ns
            .basis()
            .iter()
            .all(|v| a.mul_vector(v).iter().all(Zero::is_zero));
        if !(annihilated
            && oracle::same_span(ns.basis(), &expected, n)
            && ns.dim() == expected.len())
        {
            failures[0] += 1;
            out.check(format!("case {case}: null space"), false);
        }

        let (du, dw) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        let u = random_rows(&mut rng, du, n);
        let w = random_rows(&mut rng, dw, n);
        let cap = Subspace::span(n, u.clone())
            .intersect(&Subspace::span(n, w.clone()))
            .unwrap();
        let expected = oracle::intersect(&u, &w, n);
        if !oracle::same_span(cap.basis(), &expected, n) {
            failures[1] += 1;
            out.check(format!("case {case}: intersection"), false);
        }

        let rhs: Vector = if rng.gen_bool(0.5) {
            let x: Vector = (0..n).map(|_| random_rational(&mut rng)).collect();
            a.mul_vector(&x)
        } else {
            (0..m).map(|_| random_rational(&mut rng)).collect()
        };
        let solved = a.solve(&rhs).unwrap();
        let ok = match &solved {
            Some(x) => oracle::solvable(&rows, &rhs, n) && a.mul_vector(x) == rhs,
            None => !oracle::solvable(&rows, &rhs, n),
        };
        if !ok {
            failures[2] += 1;
            out.check(format!("case {case}: solve"), false);
        }
    }
    out.check(
        format!("100 cases: null space, intersection, solve failures {failures:?}"),
        failures == [0; 3],
    );
    out
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "connection axioms and uniqueness on the catalog",
            criterion_1,
        ),
        ("rototranslation connection and torsion", criterion_2),
        (
            "heisenberg torsion, commutant and Killing dimensions",
            criterion_3,
        ),
        ("engel regular bounds and Killing span", criterion_4),
        (
            "sl(2), sl(3) decomposition and exact dimension",
            criterion_5,
        ),
        ("so(3..5) bounds and exact dimension", criterion_6),
        ("rototranslation Killing fields", criterion_7),
        ("property suites", criterion_8),
        ("linear algebra oracle", criterion_9),
    ];
    let mut unexplained = 0;
    let mut passed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| {
            let mut o = Outcome::default();
            o.check("panicked", false);
            o
        });
        let failed: Vec<&Check> = outcome.checks.iter().filter(|c| !c.ok).collect();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "{status} {} {title} ({} checks, {:.1}s)",
            i + 1,
            outcome.checks.len(),
            start.elapsed().as_secs_f64()
        );
        if failed.is_empty() {
            passed += 1;
        }
        for c in failed {
            match c.known {
                Some(reason) => println!("    known failure: {}: {reason}", c.label),
                None => {
                    unexplained += 1;
                    println!("    failure: {}", c.label);
                }
            }
        }
    }
    println!(
        "{passed}/{} criteria pass; {unexplained} unexplained failures",
        criteria.len()
    );
    if unexplained == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
