use super::geometry::GradedLieGeometry;
use crate::exact::{Subspace, Vector};

/// The bracket filtration `H⁰ ⊆ H¹ ⊆ …` of the horizontal distribution.
#[derive(Clone, Debug)]
pub struct Filtration {
    /// `H⁰, H¹, …` up to stabilization (the last entry repeats nothing).
    pub terms: Vec<Subspace>,
    pub bracket_generating: bool,
    /// `r + 1` with `H^{r-1}` the first term equal to the whole algebra.
    pub step: Option<usize>,
    /// `H^j = H^{j-1} ⊕ V^j` for every layer, and the step is `r + 1`.
    pub regular: bool,
}

pub fn filtration(geom: &GradedLieGeometry) -> Filtration {
    let n = geom.dim();
    let h0 = geom.layer_subspace(0);
    let mut terms = vec![h0.clone()];
    loop {
        let last = terms.last().unwrap();
        let mut vectors: Vec<Vector> = last.basis().to_vec();
        for x in h0.basis() {
            for z in last.basis() {
                vectors.push(geom.bracket(x, z));
            }
        }
        let next = Subspace::span(n, vectors);
        if next.dim() == last.dim() {
            break;
        }
        terms.push(next);
    }
    let bracket_generating = terms.last().unwrap().dim() == n;
    let step = bracket_generating.then_some(terms.len());
    let mut layered = geom.layer_subspace(0);
    let mut regular = step == Some(geom.depth() + 1);
    for j in 1..=geom.depth() {
        layered = layered.sum(&geom.layer_subspace(j)).unwrap();
        regular &= terms.get(j).is_some_and(|t| t.same_as(&layered));
    }
    Filtration {
        terms,
        bracket_generating,
        step,
        regular,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("E{i}")).collect()
    }

    #[test]
    fn heisenberg_step_two() {
        let g = GradedLieGeometry::from_brackets("h", names(3), vec![2, 1], &[(0, 1, 2, int(1))]);
        let f = filtration(&g);
        assert_eq!(f.terms.len(), 2);
        assert_eq!(f.step, Some(2));
        assert!(f.regular);
    }

    #[test]
    fn abelian_is_not_bracket_generating() {
        let g = GradedLieGeometry::from_brackets("r3", names(3), vec![2, 1], &[]);
        let f = filtration(&g);
        assert!(!f.bracket_generating);
        assert!(!f.regular);
        assert_eq!(f.step, None);
    }
}
