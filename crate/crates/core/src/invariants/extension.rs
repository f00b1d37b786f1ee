//! Independence of the horizontal invariants from the metric extension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ricci::sub_ricci;
use crate::exact::{int, q, ExactMatrix};
use crate::liealg::{build_connection, curvature, torsion, GradedLieGeometry, LieError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    /// `∇_A X` for horizontal `X`.
    pub horizontal_connection: bool,
    /// `Tor(X, Y)` for horizontal `X, Y`.
    pub horizontal_torsion: bool,
    /// `π⁰ Tor(X, T)` for horizontal `X`, vertical `T`.
    pub mixed_torsion: bool,
    pub sub_ricci: bool,
}

impl ExtensionReport {
    pub fn all(&self) -> bool {
        self.horizontal_connection
            && self.horizontal_torsion
            && self.mixed_torsion
            && self.sub_ricci
    }
}

/// A seeded random positive definite gram on each vertical layer, keeping the
/// horizontal block.
pub fn random_vertical_gram(geom: &GradedLieGeometry, seed: u64) -> ExactMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gram = geom.gram().clone();
    for j in 1..geom.grading().len() {
        let layer: Vec<usize> = geom.layer(j).collect();
        let m = layer.len();
        let a = ExactMatrix::from_fn(m, m, |_, _| int(rng.gen_range(-2..=2)));
        let scale = q(rng.gen_range(1..=9), rng.gen_range(1..=9));
        let block = (&a.transpose() * &a)
            .add(&ExactMatrix::identity(m))
            .scale(&scale);
        for (r, &x) in layer.iter().enumerate() {
            for (c, &y) in layer.iter().enumerate() {
                gram[(x, y)] = block[(r, c)].clone();
            }
        }
    }
    gram
}

/// Compares the horizontal invariants of `geom` with those of the same
/// geometry under a random vertical gram.
pub fn metric_extension_invariance(
    geom: &GradedLieGeometry,
    seed: u64,
) -> Result<ExtensionReport, LieError> {
    let other = geom.with_gram(random_vertical_gram(geom, seed));
    let (c0, c1) = (build_connection(geom)?, build_connection(&other)?);
    let (t0, t1) = (torsion(geom, &c0), torsion(&other, &c1));
    let (r0, r1) = (curvature(geom, &c0), curvature(&other, &c1));
    let n = geom.dim();
    let h: Vec<usize> = geom.horizontal().collect();
    let v: Vec<usize> = geom.vertical().collect();
    let horizontal_connection = (0..n).all(|a| {
        h.iter()
            .all(|&b| c0.gamma.fiber(&[a, b]) == c1.gamma.fiber(&[a, b]))
    });
    let horizontal_torsion = h.iter().all(|&x| {
        h.iter()
            .all(|&y| t0.tor.fiber(&[x, y]) == t1.tor.fiber(&[x, y]))
    });
    let mixed_torsion = h.iter().all(|&x| {
        v.iter()
            .all(|&t| h.iter().all(|&k| t0.tor[[x, t, k]] == t1.tor[[x, t, k]]))
    });
    let sub_ricci = sub_ricci(geom, &t0, &r0) == sub_ricci(&other, &t1, &r1);
    Ok(ExtensionReport {
        horizontal_connection,
        horizontal_torsion,
        mixed_torsion,
        sub_ricci,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::standard_entries;

    #[test]
    fn random_gram_is_positive_and_keeps_horizontal_block() {
        for e in standard_entries() {
            let g = e.lie();
            let gram = random_vertical_gram(&g, 3);
            assert!(gram.is_positive_definite());
            for i in g.horizontal() {
                for j in 0..g.dim() {
                    assert_eq!(gram[(i, j)], g.gram()[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn catalog_invariants_are_extension_independent() {
        for e in standard_entries() {
            for seed in 0..5 {
                let r = metric_extension_invariance(&e.lie(), seed).unwrap();
                assert!(r.all(), "{} seed {seed}: {r:?}", e.name());
            }
        }
    }
}
