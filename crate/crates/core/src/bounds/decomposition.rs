use num_traits::Zero;

use super::linear::embed;
use crate::exact::{is_zero_vector, unit_vector, ExactMatrix, Rational, Subspace, Vector};
use crate::liealg::{GradedLieGeometry, TorsionData};

/// Orthogonal splitting `H = H̃⁰ ⊕ H̃¹ ⊕ … ⊕ H̃^m` with no torsion between blocks.
#[derive(Clone, Debug)]
pub struct TorsionDecomposition {
    pub kernel: Subspace,
    pub blocks: Vec<Subspace>,
    /// Span of `Tor(H̃ⁱ, H̃ⁱ)` for each block.
    pub v_images: Vec<Subspace>,
    pub strong: bool,
    /// Blocks are spans of frame vectors.
    pub frame_aligned: bool,
}

/// `{X ∈ H : Tor(X, H) = 0}`, as a subspace of the full frame.
pub fn torsion_kernel(geom: &GradedLieGeometry, tors: &TorsionData) -> Subspace {
    let n = geom.dim();
    let k = geom.horizontal_dim();
    let columns: Vec<Vector> = geom
        .horizontal()
        .map(|i| {
            let ei = unit_vector(n, i);
            geom.horizontal()
                .flat_map(|j| tors.apply(&ei, &unit_vector(n, j)))
                .collect()
        })
        .collect();
    let rows = columns.first().map_or(0, Vec::len);
    let kernel = if k == 0 {
        Vec::new()
    } else {
        ExactMatrix::from_columns(rows, &columns)
            .null_space()
            .into_basis()
    };
    Subspace::from_independent(n, kernel.iter().map(|x| embed(geom, x)).collect())
}

/// Gram–Schmidt without normalization in the `g_H` inner product.
fn orthogonalize(geom: &GradedLieGeometry, vectors: &[Vector]) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for u in &out {
            let c = geom.inner(v, u) / geom.inner(u, u);
            for (x, y) in w.iter_mut().zip(u) {
                *x -= &c * y;
            }
        }
        if !is_zero_vector(&w) {
            out.push(w);
        }
    }
    out
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Finest decomposition whose blocks are spans of the candidate vectors.
///
/// Candidates are the frame vectors off the kernel when the horizontal Gram
/// block is diagonal and the kernel is frame-aligned; otherwise an orthogonal
/// basis of the kernel complement.
pub fn torsion_decomposition(geom: &GradedLieGeometry, tors: &TorsionData) -> TorsionDecomposition {
    let n = geom.dim();
    let kernel = torsion_kernel(geom, tors);
    let gh = geom.gram_block(0);
    let diagonal = (0..gh.rows()).all(|i| (0..gh.cols()).all(|j| i == j || gh[(i, j)].is_zero()));
    let in_kernel: Vec<usize> = geom
        .horizontal()
        .filter(|&i| kernel.contains(&unit_vector(n, i)))
        .collect();
    let frame_aligned = diagonal && in_kernel.len() == kernel.dim();
    let candidates: Vec<Vector> = if frame_aligned {
        geom.horizontal()
            .filter(|i| !in_kernel.contains(i))
            .map(|i| unit_vector(n, i))
            .collect()
    } else {
        let horizontal = geom.layer_subspace(0);
        let complement = kernel.complement_within(&horizontal, geom.gram());
        orthogonalize(geom, complement.basis())
    };

    let mut parent: Vec<usize> = (0..candidates.len()).collect();
    for a in 0..candidates.len() {
        for b in a + 1..candidates.len() {
            if !is_zero_vector(&tors.apply(&candidates[a], &candidates[b])) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for a in 0..candidates.len() {
        let r = find(&mut parent, a);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(a),
            None => groups.push((r, vec![a])),
        }
    }

    let mut blocks = Vec::new();
    let mut v_images = Vec::new();
    for (_, members) in &groups {
        let basis: Vec<Vector> = members.iter().map(|&a| candidates[a].clone()).collect();
        let mut images = Vec::new();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                images.push(tors.apply(&candidates[a], &candidates[b]));
            }
        }
        blocks.push(Subspace::from_independent(n, basis));
        v_images.push(Subspace::span(n, images));
    }
    let total: usize = v_images.iter().map(Subspace::dim).sum();
    let joined = v_images.iter().fold(Subspace::zero(n), |acc, s| {
        acc.sum(s).expect("same ambient dimension")
    });
    let strong = joined.dim() == total;
    let decomposition = TorsionDecomposition {
        kernel,
        blocks,
        v_images,
        strong,
        frame_aligned,
    };
    debug_assert!(decomposition.cross_torsion_vanishes(tors));
    decomposition
}

impl TorsionDecomposition {
    /// `Tor(H̃ⁱ, H̃ʲ) = 0` for distinct blocks, kernel included.
    pub fn cross_torsion_vanishes(&self, tors: &TorsionData) -> bool {
        let mut parts: Vec<&Subspace> = vec![&self.kernel];
        parts.extend(self.blocks.iter());
        let all = |a: &Subspace, b: &Subspace| {
            a.basis()
                .iter()
                .all(|x| b.basis().iter().all(|y| is_zero_vector(&tors.apply(x, y))))
        };
        (0..parts.len()).all(|i| (i + 1..parts.len()).all(|j| all(parts[i], parts[j])))
    }

    /// Blocks pairwise orthogonal and orthogonal to the kernel.
    pub fn is_orthogonal(&self, geom: &GradedLieGeometry) -> bool {
        let mut parts: Vec<&Subspace> = vec![&self.kernel];
        parts.extend(self.blocks.iter());
        (0..parts.len()).all(|i| {
            (i + 1..parts.len()).all(|j| {
                parts[i].basis().iter().all(|x| {
                    parts[j]
                        .basis()
                        .iter()
                        .all(|y| geom.inner(x, y) == Rational::zero())
                })
            })
        })
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Subspace::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.kernel.dim() + self.blocks.iter().map(Subspace::dim).sum::<usize>()
    }

    /// Every block other than the kernel has dimension at most two.
    pub fn blocks_at_most_planar(&self) -> bool {
        self.blocks.iter().all(|b| b.dim() <= 2)
    }
}
