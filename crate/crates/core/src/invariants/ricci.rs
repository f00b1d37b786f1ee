use num_traits::Zero;

use crate::exact::{ExactMatrix, Rational, Vector};
use crate::liealg::{CurvatureData, GradedLieGeometry, TorsionData};

/// Sub-Ricci curvature on the full frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubRicci {
    pub matrix: ExactMatrix,
}

impl SubRicci {
    pub fn is_symmetric(&self) -> bool {
        self.matrix.is_symmetric()
    }

    /// `Rc^s(A, B) = 0` whenever `A` or `B` is vertical.
    pub fn vanishes_on_vertical(&self, geom: &GradedLieGeometry) -> bool {
        let n = geom.dim();
        (0..n).all(|a| {
            (0..n).all(|b| {
                !(geom.is_vertical(a) || geom.is_vertical(b)) || self.matrix[(a, b)].is_zero()
            })
        })
    }
}

/// Slot conventions for the ambiguous traces in the sub-Ricci formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Conventions {
    /// `tr Tor²(A) = Σ Tor(E_k, Tor(E_k, A))` when true, else
    /// `Σ Tor(E_k, Tor(A, E_k))`.
    pub trace_first_two: bool,
    /// `(∇Tor)(A, B, C) = (∇_A Tor)(B, C)` when true, else `(∇_C Tor)(A, B)`.
    pub differentiate_first: bool,
    pub second_sign: i64,
}

pub(crate) const CONVENTIONS: Conventions = Conventions {
    trace_first_two: false,
    differentiate_first: true,
    second_sign: -1,
};

struct Frame<'a> {
    geom: &'a GradedLieGeometry,
    tors: &'a TorsionData,
    ginv: ExactMatrix,
}

impl Frame<'_> {
    fn n(&self) -> usize {
        self.geom.dim()
    }

    fn tor(&self, u: &[Rational], v: &[Rational]) -> Vector {
        self.tors.apply(u, v)
    }

    /// `(∇_{E_a} Tor)(u, v)`.
    fn nabla_tor_at(&self, a: usize, u: &[Rational], v: &[Rational]) -> Vector {
        let n = self.n();
        let mut out = vec![Rational::zero(); n];
        for (b, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (c, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let w = x * y;
                for (d, t) in self.tors.nabla_tor.fiber(&[a, b, c]).iter().enumerate() {
                    if !t.is_zero() {
                        out[d] += &w * t;
                    }
                }
            }
        }
        out
    }

    /// `(∇_w Tor)(u, v)`.
    fn nabla_tor(&self, w: &[Rational], u: &[Rational], v: &[Rational]) -> Vector {
        let mut out = vec![Rational::zero(); self.n()];
        for (a, x) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            crate::exact::rational::add_scaled(&mut out, x, &self.nabla_tor_at(a, u, v));
        }
        out
    }

    fn unit(&self, i: usize) -> Vector {
        crate::exact::rational::unit_vector(self.n(), i)
    }

    /// `Σ G⁻¹[i][j] f(E_i, E_j)` over the horizontal frame.
    fn trace<T>(
        &self,
        mut f: impl FnMut(&[Rational], &[Rational]) -> T,
        add: impl Fn(&mut T, &Rational, T),
        init: T,
    ) -> T {
        let mut acc = init;
        for i in self.geom.horizontal() {
            for j in self.geom.horizontal() {
                let w = &self.ginv[(i, j)];
                if w.is_zero() {
                    continue;
                }
                let v = f(&self.unit(i), &self.unit(j));
                add(&mut acc, w, v);
            }
        }
        acc
    }

    fn trace_scalar(&self, f: impl FnMut(&[Rational], &[Rational]) -> Rational) -> Rational {
        self.trace(f, |acc, w, v| *acc += w * v, Rational::zero())
    }

    fn trace_vector(&self, f: impl FnMut(&[Rational], &[Rational]) -> Vector) -> Vector {
        self.trace(
            f,
            |acc, w, v| crate::exact::rational::add_scaled(acc, w, &v),
            vec![Rational::zero(); self.n()],
        )
    }
}

/// `Σ_k Tor(E_k, Tor(E_k, A))` (or the alternative slot order).
fn trace_tor2(fr: &Frame, conv: Conventions, a: &[Rational]) -> Vector {
    fr.trace_vector(|ei, ej| {
        let inner = if conv.trace_first_two {
            fr.tor(ej, a)
        } else {
            fr.tor(a, ej)
        };
        fr.tor(ei, &inner)
    })
}

/// `Σ_k (∇Tor)(E_k, A, E_k)`.
fn trace_nabla_tor(fr: &Frame, conv: Conventions, a: &[Rational]) -> Vector {
    fr.trace_vector(|ei, ej| {
        if conv.differentiate_first {
            fr.nabla_tor(ei, a, ej)
        } else {
            fr.nabla_tor(ej, ei, a)
        }
    })
}

/// `(∇Tor)(x, y, z)` under the chosen slot convention.
fn nabla_tor3(
    fr: &Frame,
    conv: Conventions,
    x: &[Rational],
    y: &[Rational],
    z: &[Rational],
) -> Vector {
    if conv.differentiate_first {
        fr.nabla_tor(x, y, z)
    } else {
        fr.nabla_tor(z, x, y)
    }
}

/// `tr(∇Tor − Tor²)(A)`.
pub(crate) fn trace_correction(
    geom: &GradedLieGeometry,
    tors: &TorsionData,
    conv: Conventions,
    a: &[Rational],
) -> Vector {
    let fr = Frame {
        geom,
        tors,
        ginv: geom.gram_inverse(),
    };
    crate::exact::rational::sub_vectors(&trace_nabla_tor(&fr, conv, a), &trace_tor2(&fr, conv, a))
}

/// `tr Rm(A, B) = Σ_k Rm(E_k, A, B, E_k)`.
pub fn trace_rm(
    geom: &GradedLieGeometry,
    curv: &CurvatureData,
    a: &[Rational],
    b: &[Rational],
) -> Rational {
    let ginv = geom.gram_inverse();
    let mut acc = Rational::zero();
    for i in geom.horizontal() {
        for j in geom.horizontal() {
            let w = &ginv[(i, j)];
            if w.is_zero() {
                continue;
            }
            let mut s = Rational::zero();
            for (p, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (r, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    s += x * y * &curv.rm_lowered[[i, p, r, j]];
                }
            }
            acc += w * s;
        }
    }
    acc
}

pub(crate) fn sub_ricci_with(
    geom: &GradedLieGeometry,
    tors: &TorsionData,
    curv: &CurvatureData,
    conv: Conventions,
) -> SubRicci {
    let n = geom.dim();
    let fr = Frame {
        geom,
        tors,
        ginv: geom.gram_inverse(),
    };
    let mut m = ExactMatrix::zeros(n, n);
    let zero = vec![Rational::zero(); n];
    for a in 0..n {
        let ea = fr.unit(a);
        let (ah, av) = (geom.project_horizontal(&ea), geom.project_vertical(&ea));
        let tt_a = trace_tor2(&fr, conv, &ah);
        let corr_a = if av == zero {
            zero.clone()
        } else {
            trace_correction(geom, tors, conv, &av)
        };
        for b in 0..n {
            let eb = fr.unit(b);
            let bh = geom.project_horizontal(&eb);
            let mut v = trace_rm(geom, curv, &ea, &eb);
            let t_ab = fr.tor(&ah, &bh);
            v += fr.trace_scalar(|ei, ej| geom.inner(&fr.tor(ei, &t_ab), ej))
                * crate::exact::q(conv.second_sign, 2);
            v -= geom.inner(&tt_a, &bh);
            if av != zero && bh != zero {
                v -= fr.trace_scalar(|ei, ej| {
                    let d = nabla_tor3(&fr, conv, ei, &av, &bh);
                    let t = fr.tor(ei, &fr.tor(&av, &bh));
                    geom.inner(&crate::exact::rational::sub_vectors(&d, &t), ej)
                });
                v += geom.inner(&corr_a, &bh);
            }
            m[(a, b)] = v;
        }
    }
    SubRicci { matrix: m }
}

pub fn sub_ricci(geom: &GradedLieGeometry, tors: &TorsionData, curv: &CurvatureData) -> SubRicci {
    sub_ricci_with(geom, tors, curv, CONVENTIONS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{heisenberg, so, standard_entries};
    use crate::exact::{int, q};
    use crate::liealg::{build_connection, curvature, torsion};

    fn rc(g: &GradedLieGeometry) -> SubRicci {
        let conn = build_connection(g).unwrap();
        sub_ricci(g, &torsion(g, &conn), &curvature(g, &conn))
    }

    #[test]
    fn heisenberg_is_ricci_flat() {
        for n in 1..=3 {
            assert!(rc(&heisenberg(n)).matrix.is_zero());
        }
    }

    #[test]
    fn symmetric_and_horizontal_on_catalog() {
        for e in standard_entries() {
            let g = e.lie();
            let r = rc(&g);
            assert!(r.is_symmetric(), "{}", e.name());
            assert!(r.vanishes_on_vertical(&g), "{}", e.name());
        }
    }

    #[test]
    fn so3_frame_independence() {
        let g = so(3);
        let mut basis = ExactMatrix::identity(3);
        basis[(0, 0)] = q(3, 5);
        basis[(1, 0)] = q(4, 5);
        basis[(0, 1)] = q(-4, 5);
        basis[(1, 1)] = q(3, 5);
        let gram = &(&basis.transpose() * g.gram()) * &basis;
        let rotated = g.reframe(&basis, g.grading().to_vec(), gram).unwrap();
        let expected = &(&basis.transpose() * &rc(&g).matrix) * &basis;
        let r = rc(&rotated);
        assert_eq!(r.matrix, expected);
        assert!(!r.matrix.is_zero());
        assert_eq!(r.matrix[(0, 0)], r.matrix[(1, 1)]);
        assert_eq!(r.matrix[(0, 1)], int(0));
    }
}
