use srgeom::catalog::{engel_chart, heisenberg_chart, rototranslation_chart, standard_entries};
use srgeom::coordfield::{
    bracket, killing_check, killing_solve, linear_relations, same_span, span_dim, Ansatz,
    FrameVectorField, KillingMode, SymExpr,
};
use srgeom::exact::int;

fn lin(terms: &[(usize, SymExpr)], n: usize) -> FrameVectorField {
    let mut f = FrameVectorField::zero(n);
    for (i, c) in terms {
        f.coefficients[*i] = &f.coefficients[*i] + c;
    }
    f
}

fn x(i: usize) -> SymExpr {
    SymExpr::var(i)
}

fn k(c: i64) -> SymExpr {
    SymExpr::constant(int(c))
}

#[test]
fn pipelines_agree_on_structure_constants() {
    for e in standard_entries() {
        if let Some(cg) = e.coordinates() {
            let linked = cg.linked_lie().expect("constant structure functions");
            assert_eq!(linked.structure(), e.lie().structure(), "{}", e.name());
        }
    }
}

#[test]
fn heisenberg_bracket() {
    let cg = heisenberg_chart(1);
    let b = bracket(cg.chart(), &cg.frame()[0], &cg.frame()[1]).unwrap();
    assert_eq!(b, FrameVectorField::partial(3, 2));
    let a = &cg.frame()[0];
    assert!(bracket(cg.chart(), a, a).unwrap().is_zero());
}

#[test]
fn rototranslation_bracket() {
    let cg = rototranslation_chart();
    let b = bracket(cg.chart(), &cg.frame()[0], &cg.frame()[1]).unwrap();
    assert_eq!(b, cg.frame()[2]);
}

#[test]
fn heisenberg_solver_dimensions() {
    for n in 1..=2 {
        let cg = heisenberg_chart(n);
        let strong = killing_solve(&cg, 2, KillingMode::Strong, Ansatz::Coordinate);
        let weak = killing_solve(&cg, 2, KillingMode::Weak, Ansatz::Coordinate);
        assert_eq!(strong.dimension(), 2 * n + 1 + n * n);
        assert!(same_span(&strong.fields, &weak.fields));
        assert!(strong.dimension() <= (n + 1) * (n + 1));
        for f in &strong.fields {
            assert!(killing_check(&cg, f).strong);
        }
    }
}

/// `S1 = T1 − x T2`, `S2 = T2` and the two listed horizontal combinations
/// `Y − x S1`, `X − y S1 − (xy + t1) S2`.
fn engel_listed() -> Vec<FrameVectorField> {
    let cg = engel_chart();
    let s1 = lin(&[(2, k(1)), (3, -&x(0))], 4);
    let s2 = FrameVectorField::partial(4, 3);
    let xy_t1 = &(&x(0) * &x(1)) + &x(2);
    let y_field = cg.frame()[1].sub(&s1.times(&x(0)));
    let x_field = cg.frame()[0].sub(&s1.times(&x(1))).sub(&s2.times(&xy_t1));
    vec![s1, s2, y_field, x_field]
}

#[test]
fn listed_engel_combinations_are_not_killing() {
    let cg = engel_chart();
    let listed = engel_listed();
    // [Y − x S1, X] = −x T2 and [X − y S1 − (xy + t1) S2, Y] = 2 T1, by hand.
    let y_bracket = bracket(cg.chart(), &listed[2], &cg.frame()[0]).unwrap();
    assert_eq!(y_bracket, lin(&[(3, -&x(0))], 4));
    let x_bracket = bracket(cg.chart(), &listed[3], &cg.frame()[1]).unwrap();
    assert_eq!(x_bracket, lin(&[(2, k(2))], 4));
    assert!(killing_check(&cg, &listed[0]).regular);
    assert!(killing_check(&cg, &listed[1]).regular);
    assert!(!killing_check(&cg, &listed[2]).weak);
    assert!(!killing_check(&cg, &listed[3]).weak);
}

#[test]
fn engel_solution_space() {
    let cg = engel_chart();
    let listed = engel_listed();
    let (s1, s2) = (listed[0].clone(), listed[1].clone());
    // Y − x S1 − (x²/2) S2 = ∂y − x ∂t1 + (x²/2) ∂t2 and X + y S1 + (xy + t1) S2 = ∂x
    let half_x2 = (&x(0) * &x(0)).scale(&srgeom::exact::q(1, 2));
    let y_field = listed[2].sub(&s2.times(&half_x2));
    let xy_t1 = &(&x(0) * &x(1)) + &x(2);
    let x_field = cg.frame()[0].add(&s1.times(&x(1))).add(&s2.times(&xy_t1));
    assert_eq!(x_field, FrameVectorField::partial(4, 0));
    let corrected = vec![s1, s2, y_field, x_field];
    for f in &corrected {
        let check = killing_check(&cg, f);
        assert!(check.strong && check.regular, "{:?}", check.violations);
    }
    for mode in [KillingMode::Weak, KillingMode::Strong, KillingMode::Regular] {
        let sol = killing_solve(&cg, 2, mode, Ansatz::Coordinate);
        assert_eq!(sol.dimension(), 4);
        assert!(same_span(&sol.fields, &corrected));
    }
    assert!(!same_span(&corrected, &listed));
}

#[test]
fn rototranslation_solution_space() {
    let cg = rototranslation_chart();
    let weak = killing_solve(&cg, 1, KillingMode::Weak, Ansatz::Coordinate);
    let strong = killing_solve(&cg, 1, KillingMode::Strong, Ansatz::Coordinate);
    assert_eq!(weak.dimension(), 3);
    assert!(same_span(&weak.fields, &strong.fields));
    let hat_x = FrameVectorField::partial(3, 0);
    let hat_y = FrameVectorField::partial(3, 1);
    let hat_theta = lin(&[(0, -&x(1)), (1, x(0)), (2, k(1))], 3);
    assert!(same_span(&weak.fields, &[hat_x.clone(), hat_y, hat_theta]));
    // X̂ = cos θ · X + sin θ · T
    let from_frame = cg.from_frame_components(&[x(2), SymExpr::zero(), SymExpr::sin(2)]);
    assert_eq!(from_frame, hat_x);
}

#[test]
fn solver_dimension_is_monotone_in_degree() {
    let cg = heisenberg_chart(1);
    let dims: Vec<usize> = (0..=3)
        .map(|d| killing_solve(&cg, d, KillingMode::Strong, Ansatz::Coordinate).dimension())
        .collect();
    assert!(dims.windows(2).all(|w| w[0] <= w[1]), "{dims:?}");
    assert_eq!(dims[2], dims[3]);
}

#[test]
fn frame_ansatz_is_a_subspace() {
    let cg = rototranslation_chart();
    let frame = killing_solve(&cg, 1, KillingMode::Strong, Ansatz::Frame);
    let coord = killing_solve(&cg, 1, KillingMode::Strong, Ansatz::Coordinate);
    let mut joined = coord.fields.clone();
    joined.extend(frame.fields.iter().cloned());
    assert_eq!(span_dim(&joined), coord.dimension());
}

#[test]
fn relations_between_fields() {
    let a = lin(&[(0, x(1))], 2);
    let b = lin(&[(1, k(2))], 2);
    let c = a.add(&b.times(&k(3)));
    let rel = linear_relations(&[a.clone(), b.clone(), c]);
    assert_eq!(rel, vec![vec![int(-1), int(-3), int(1)]]);
    assert!(linear_relations(&[a, b]).is_empty());
}
