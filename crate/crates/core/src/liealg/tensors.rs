use num_traits::Zero;

use super::connection::Connection;
use super::geometry::GradedLieGeometry;
use super::tensor::Tensor;
use super::LieError;
use crate::exact::{Rational, Vector};

/// `Tor(E_a, E_b) = Σ_k tor[a][b][k] E_k` and `(∇_{E_a} Tor)(E_b, E_c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionData {
    pub tor: Tensor,
    pub nabla_tor: Tensor,
}

/// `R(E_a, E_b) E_c = Σ_d riem[a][b][c][d] E_d` and `⟨R(A,B)C, D⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureData {
    pub riem: Tensor,
    pub rm_lowered: Tensor,
}

impl TorsionData {
    pub fn apply(&self, u: &[Rational], v: &[Rational]) -> Vector {
        self.tor.apply(&[u, v])
    }

    /// `Tor^[m]` as a tensor with `m + 1` inputs.
    pub fn step(&self, m: usize) -> Result<Tensor, LieError> {
        if m == 0 {
            return Err(LieError::BadStep);
        }
        let n = self.tor.dim();
        let mut cur = self.tor.clone();
        for level in 2..=m {
            // Tor^[level](z1, rest) = Tor(z1, Tor^[level-1](rest))
            let mut next = Tensor::zeros(level + 2, n);
            let prev = cur;
            for idx in prev.indices().collect::<Vec<_>>().chunks(n) {
                let inputs = &idx[0][..level];
                let inner = prev.fiber(inputs);
                for z in 0..n {
                    let mut key = vec![z];
                    key.extend_from_slice(inputs);
                    let out = next.fiber_mut(&key);
                    for (mm, x) in inner.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (d, t) in self.tor.fiber(&[z, mm]).iter().enumerate() {
                            if !t.is_zero() {
                                out[d] += x * t;
                            }
                        }
                    }
                }
            }
            cur = next;
        }
        Ok(cur)
    }
}

pub fn torsion(geom: &GradedLieGeometry, conn: &Connection) -> TorsionData {
    let n = geom.dim();
    let g = &conn.gamma;
    let c = geom.structure();
    let mut tor = Tensor::zeros(3, n);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                tor[[a, b, k]] = &g[[a, b, k]] - &g[[b, a, k]] - &c[[a, b, k]];
            }
        }
    }
    let mut nt = Tensor::zeros(4, n);
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let out = nt.fiber_mut(&[a, b, cc]);
                for m in 0..n {
                    let t = &tor[[b, cc, m]];
                    if !t.is_zero() {
                        for (d, x) in g.fiber(&[a, m]).iter().enumerate() {
                            out[d] += t * x;
                        }
                    }
                    let gb = &g[[a, b, m]];
                    if !gb.is_zero() {
                        for (d, x) in tor.fiber(&[m, cc]).iter().enumerate() {
                            out[d] -= gb * x;
                        }
                    }
                    let gc = &g[[a, cc, m]];
                    if !gc.is_zero() {
                        for (d, x) in tor.fiber(&[b, m]).iter().enumerate() {
                            out[d] -= gc * x;
                        }
                    }
                }
            }
        }
    }
    TorsionData { tor, nabla_tor: nt }
}

pub fn curvature(geom: &GradedLieGeometry, conn: &Connection) -> CurvatureData {
    let n = geom.dim();
    let g = &conn.gamma;
    let c = geom.structure();
    let mut riem = Tensor::zeros(4, n);
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let out = riem.fiber_mut(&[a, b, cc]);
                for m in 0..n {
                    let x = &g[[b, cc, m]];
                    if !x.is_zero() {
                        for (d, y) in g.fiber(&[a, m]).iter().enumerate() {
                            out[d] += x * y;
                        }
                    }
                    let x = &g[[a, cc, m]];
                    if !x.is_zero() {
                        for (d, y) in g.fiber(&[b, m]).iter().enumerate() {
                            out[d] -= x * y;
                        }
                    }
                    let x = &c[[a, b, m]];
                    if !x.is_zero() {
                        for (d, y) in g.fiber(&[m, cc]).iter().enumerate() {
                            out[d] -= x * y;
                        }
                    }
                }
            }
        }
    }
    let mut low = Tensor::zeros(4, n);
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let lowered = geom.gram().mul_vector(riem.fiber(&[a, b, cc]));
                low.fiber_mut(&[a, b, cc]).clone_from_slice(&lowered);
            }
        }
    }
    CurvatureData {
        riem,
        rm_lowered: low,
    }
}

/// Frame triples where the algebraic Bianchi identity
/// `𝒞 R(A,B)C = 𝒞 (∇_A Tor)(B,C) − 𝒞 Tor(A, Tor(B,C))` fails.
pub fn bianchi_failures(tors: &TorsionData, curv: &CurvatureData) -> Vec<(usize, usize, usize)> {
    let n = tors.tor.dim();
    let tor = &tors.tor;
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut diff = vec![Rational::zero(); n];
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    for d in 0..n {
                        diff[d] += &curv.riem[[x, y, z, d]];
                        diff[d] -= &tors.nabla_tor[[x, y, z, d]];
                    }
                    for m in 0..n {
                        let t = &tor[[y, z, m]];
                        if t.is_zero() {
                            continue;
                        }
                        for (d, s) in tor.fiber(&[x, m]).iter().enumerate() {
                            diff[d] += t * s;
                        }
                    }
                }
                if diff.iter().any(|x| !x.is_zero()) {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, q};
    use crate::liealg::build_connection;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn heisenberg_torsion_is_minus_bracket() {
        let g = GradedLieGeometry::from_brackets(
            "h",
            names(&["X", "Y", "T"]),
            vec![2, 1],
            &[(0, 1, 2, int(1))],
        );
        let conn = build_connection(&g).unwrap();
        let t = torsion(&g, &conn);
        assert_eq!(t.tor.fiber(&[0, 1]), &[int(0), int(0), int(-1)]);
        assert!(curvature(&g, &conn).riem.is_zero());
        for a in 0..3 {
            assert!(t.tor.fiber(&[a, a]).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rototranslation_torsion() {
        let g = GradedLieGeometry::from_brackets(
            "rt",
            names(&["X", "Theta", "T"]),
            vec![2, 1],
            &[(0, 1, 2, int(1)), (1, 2, 0, int(1))],
        );
        let conn = build_connection(&g).unwrap();
        let t = torsion(&g, &conn);
        assert_eq!(t.tor.fiber(&[2, 1]), &[q(1, 2), int(0), int(0)]);
        assert_eq!(t.tor.fiber(&[2, 0]), &[int(0), q(1, 2), int(0)]);
        assert_eq!(t.tor.fiber(&[0, 1]), &[int(0), int(0), int(-1)]);
        let curv = curvature(&g, &conn);
        assert!(bianchi_failures(&t, &curv).is_empty());
    }

    #[test]
    fn step_torsion_iterates() {
        let g = GradedLieGeometry::from_brackets(
            "rt",
            names(&["X", "Theta", "T"]),
            vec![2, 1],
            &[(0, 1, 2, int(1)), (1, 2, 0, int(1))],
        );
        let t = torsion(&g, &build_connection(&g).unwrap());
        assert!(t.step(0).is_err());
        assert_eq!(t.step(1).unwrap(), t.tor);
        let s2 = t.step(2).unwrap();
        // Tor^[2](T, X, Θ) = Tor(T, Tor(X, Θ)) = Tor(T, −T) = 0
        // Tor^[2](X, X, Θ) = Tor(X, −T) = Θ/2
        assert!(s2.fiber(&[2, 0, 1]).iter().all(Zero::is_zero));
        assert_eq!(s2.fiber(&[0, 0, 1]), &[int(0), q(1, 2), int(0)]);
    }
}
