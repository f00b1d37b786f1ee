use num_traits::Zero;

use super::geometry::GradedLieGeometry;
use super::tensor::Tensor;
use super::LieError;
use crate::exact::{q, sparse_row, Rational, RowReducer, Vector};

/// Coefficients `∇_{E_a} E_b = Σ_k gamma[a][b][k] E_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub gamma: Tensor,
}

impl Connection {
    /// `∇_u v` for constant frame vectors.
    pub fn nabla(&self, u: &[Rational], v: &[Rational]) -> Vector {
        self.gamma.apply(&[u, v])
    }
}

/// `⟨π^j [E_a, E_b], E_c⟩` for `c` in layer `j`.
fn projected(geom: &GradedLieGeometry, a: usize, b: usize, c: usize) -> Rational {
    let layer = geom.layer(geom.grade_of(c));
    let br = geom.bracket_frame(a, b);
    layer
        .filter(|&k| !br[k].is_zero())
        .map(|k| &br[k] * geom.g(k, c))
        .sum()
}

/// The canonical connection, by the graded Koszul formulas.
pub fn build_connection(geom: &GradedLieGeometry) -> Result<Connection, LieError> {
    geom.ensure_valid()?;
    let n = geom.dim();
    let half = q(1, 2);
    let mut gamma = Tensor::zeros(3, n);
    for j in 0..geom.grading().len() {
        let layer: Vec<usize> = geom.layer(j).collect();
        let inv = geom
            .gram_block(j)
            .inverse()
            .expect("positive definite block");
        for a in 0..n {
            let same = geom.grade_of(a) == j;
            for &b in &layer {
                // lowered[c] = ⟨∇_{E_a} E_b, E_c⟩
                let lowered: Vec<Rational> = layer
                    .iter()
                    .map(|&c| {
                        let twice = if same {
                            projected(geom, a, b, c) - projected(geom, b, c, a)
                                + projected(geom, c, a, b)
                        } else {
                            projected(geom, a, b, c) - projected(geom, a, c, b)
                        };
                        twice * &half
                    })
                    .collect();
                let coeffs = inv.mul_vector(&lowered);
                for (p, &k) in layer.iter().enumerate() {
                    gamma[[a, b, k]] = coeffs[p].clone();
                }
            }
        }
    }
    Ok(Connection { gamma })
}

/// Outcome of checking each defining axiom independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub metric_compatible: bool,
    pub layers_parallel: bool,
    pub layer_torsion_free: bool,
    pub mixed_symmetric: bool,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.metric_compatible
            && self.layers_parallel
            && self.layer_torsion_free
            && self.mixed_symmetric
    }
}

pub fn verify_connection(geom: &GradedLieGeometry, conn: &Connection) -> AxiomReport {
    let n = geom.dim();
    let g = &conn.gamma;
    let c = geom.structure();
    let tor = |a: usize, b: usize, k: usize| &g[[a, b, k]] - &g[[b, a, k]] - &c[[a, b, k]];
    // ⟨Tor(E_a, E_b), E_d⟩
    let tor_low = |a: usize, b: usize, d: usize| -> Rational {
        (0..n)
            .filter(|&k| !geom.g(k, d).is_zero())
            .map(|k| tor(a, b, k) * geom.g(k, d))
            .sum()
    };
    let same = |a: usize, b: usize| geom.grade_of(a) == geom.grade_of(b);

    let layers_parallel =
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|k| same(b, k) || g[[a, b, k]].is_zero())));

    // ⟨∇_a E_b, E_c⟩ + ⟨E_b, ∇_a E_c⟩ = 0 (constant g).
    let metric_compatible = (0..n).all(|a| {
        (0..n).all(|b| {
            (0..n).all(|cc| {
                let s: Rational = (0..n)
                    .map(|k| &g[[a, b, k]] * geom.g(k, cc) + &g[[a, cc, k]] * geom.g(k, b))
                    .sum();
                s.is_zero()
            })
        })
    });

    let layer_torsion_free = (0..n).all(|a| {
        (0..n).all(|b| !same(a, b) || (0..n).all(|k| !same(a, k) || tor(a, b, k).is_zero()))
    });

    let mixed_symmetric = (0..n).all(|z| {
        (0..n).all(|x| {
            (0..n).all(|y| same(z, x) || !same(x, y) || tor_low(z, x, y) == tor_low(z, y, x))
        })
    });

    AxiomReport {
        metric_compatible,
        layers_parallel,
        layer_torsion_free,
        mixed_symmetric,
    }
}

/// Dimension of the solution space of the homogeneous linearized axiom
/// system; zero means the connection is unique.
pub fn uniqueness_defect(geom: &GradedLieGeometry) -> usize {
    let n = geom.dim();
    let var = |a: usize, b: usize, k: usize| (a * n + b) * n + k;
    let same = |a: usize, b: usize| geom.grade_of(a) == geom.grade_of(b);
    let mut r = RowReducer::new(n * n * n);
    let one = Rational::from_integer(1.into());
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                if !same(b, k) {
                    r.insert(sparse_row([(var(a, b, k), one.clone())]));
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for cc in b..n {
                if !same(b, cc) {
                    continue;
                }
                let row = sparse_row((0..n).flat_map(|k| {
                    [
                        (var(a, b, k), geom.g(k, cc).clone()),
                        (var(a, cc, k), geom.g(k, b).clone()),
                    ]
                }));
                r.insert(row);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !same(a, b) {
                continue;
            }
            for k in geom.layer(geom.grade_of(a)) {
                r.insert(sparse_row([
                    (var(a, b, k), one.clone()),
                    (var(b, a, k), -one.clone()),
                ]));
            }
        }
    }
    // ⟨Γ_z x − Γ_x z, y⟩ = ⟨Γ_z y − Γ_y z, x⟩
    for z in 0..n {
        for x in 0..n {
            if same(z, x) {
                continue;
            }
            for y in 0..n {
                if !same(x, y) {
                    continue;
                }
                let row = sparse_row((0..n).flat_map(|k| {
                    let gy = geom.g(k, y).clone();
                    let gx = geom.g(k, x).clone();
                    [
                        (var(z, x, k), gy.clone()),
                        (var(x, z, k), -gy),
                        (var(z, y, k), -gx.clone()),
                        (var(y, z, k), gx),
                    ]
                }));
                r.insert(row);
            }
        }
    }
    n * n * n - r.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, q};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn rototranslation() -> GradedLieGeometry {
        // X, Θ | T with [X,Θ] = T, [Θ,T] = X.
        GradedLieGeometry::from_brackets(
            "rt",
            names(&["X", "Theta", "T"]),
            vec![2, 1],
            &[(0, 1, 2, int(1)), (1, 2, 0, int(1))],
        )
    }

    #[test]
    fn heisenberg_connection_vanishes() {
        let g = GradedLieGeometry::from_brackets(
            "h",
            names(&["X", "Y", "T"]),
            vec![2, 1],
            &[(0, 1, 2, int(1))],
        );
        let c = build_connection(&g).unwrap();
        assert!(c.gamma.is_zero());
        assert!(verify_connection(&g, &c).all());
        assert_eq!(uniqueness_defect(&g), 0);
    }

    #[test]
    fn rototranslation_connection() {
        let g = rototranslation();
        let c = build_connection(&g).unwrap();
        // ∇_T X = Θ/2, ∇_T Θ = −X/2, everything else zero.
        let mut expected = Tensor::zeros(3, 3);
        expected[[2, 0, 1]] = q(1, 2);
        expected[[2, 1, 0]] = q(-1, 2);
        assert_eq!(c.gamma, expected);
        assert!(verify_connection(&g, &c).all());
    }

    #[test]
    fn zero_connection_breaks_mixed_symmetry() {
        let g = rototranslation();
        let report = verify_connection(
            &g,
            &Connection {
                gamma: Tensor::zeros(3, 3),
            },
        );
        assert!(!report.mixed_symmetric);
    }

    #[test]
    fn perturbation_is_detected() {
        let g = rototranslation();
        let mut c = build_connection(&g).unwrap();
        c.gamma[[0, 0, 1]] += int(1);
        assert!(!verify_connection(&g, &c).all());
    }
}
