use num_traits::Zero;

use super::expr::SymExpr;
use super::geometry::CoordinateGeometry;
use crate::liealg::Connection;

/// `∇_A K` in frame components, for constant structure functions:
/// `∇_{E_b}(f E_d) = (E_b f) E_d + f Γ_{bd}^c E_c`.
pub fn covariant_derivative(
    geom: &CoordinateGeometry,
    conn: &Connection,
    a: &[SymExpr],
    k: &[SymExpr],
) -> Vec<SymExpr> {
    let n = geom.dim();
    let mut out = vec![SymExpr::zero(); n];
    for (b, ab) in a.iter().enumerate() {
        if ab.is_zero() {
            continue;
        }
        let mut col = vec![SymExpr::zero(); n];
        for (c, kc) in k.iter().enumerate() {
            if !kc.is_zero() {
                col[c] = &col[c] + &geom.derive(b, kc);
            }
        }
        for (d, kd) in k.iter().enumerate() {
            if kd.is_zero() {
                continue;
            }
            for (c, g) in conn.gamma.fiber(&[b, d]).iter().enumerate() {
                if !g.is_zero() {
                    col[c] = &col[c] + &kd.scale(g);
                }
            }
        }
        for c in 0..n {
            if !col[c].is_zero() {
                out[c] = &out[c] + &(ab * &col[c]);
            }
        }
    }
    out
}

fn unit(n: usize, i: usize) -> Vec<SymExpr> {
    let mut v = vec![SymExpr::zero(); n];
    v[i] = SymExpr::one();
    v
}

/// `Δ_H K = Σ_{ij} G⁻¹_{ij} (∇_{E_i} ∇_{E_j} − ∇_{∇_{E_i} E_j}) K` over the horizontal frame.
pub fn horizontal_laplacian(
    geom: &CoordinateGeometry,
    conn: &Connection,
    k: &[SymExpr],
) -> Vec<SymExpr> {
    let n = geom.dim();
    let h = geom.horizontal_dim();
    let ginv = geom.gram().inverse().expect("positive definite gram");
    let mut out = vec![SymExpr::zero(); n];
    for i in 0..h {
        for j in 0..h {
            let w = &ginv[(i, j)];
            if w.is_zero() {
                continue;
            }
            let ej = unit(n, j);
            let inner = covariant_derivative(geom, conn, &ej, k);
            let second = covariant_derivative(geom, conn, &unit(n, i), &inner);
            let nab_ij: Vec<SymExpr> = conn
                .gamma
                .fiber(&[i, j])
                .iter()
                .cloned()
                .map(SymExpr::constant)
                .collect();
            let correction = covariant_derivative(geom, conn, &nab_ij, k);
            for c in 0..n {
                out[c] = &out[c] + &(&second[c] - &correction[c]).scale(w);
            }
        }
    }
    out
}
