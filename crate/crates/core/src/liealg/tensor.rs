use num_traits::Zero;
use std::ops::{Index, IndexMut};

use crate::exact::{Rational, Vector};

/// Dense rank-`R` tensor over the frame indices `0..n`; the last index is
/// always the output component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    rank: usize,
    n: usize,
    data: Vec<Rational>,
}

impl Tensor {
    pub fn zeros(rank: usize, n: usize) -> Self {
        Self {
            rank,
            n,
            data: vec![Rational::zero(); n.pow(rank as u32)],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank, "wrong number of indices");
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.n);
            acc * self.n + i
        })
    }

    pub fn at(&self, idx: &[usize]) -> &Rational {
        &self.data[self.offset(idx)]
    }

    pub fn at_mut(&mut self, idx: &[usize]) -> &mut Rational {
        let o = self.offset(idx);
        &mut self.data[o]
    }

    /// The output vector at fixed input indices.
    pub fn fiber(&self, inputs: &[usize]) -> &[Rational] {
        debug_assert_eq!(inputs.len() + 1, self.rank);
        let start = inputs.iter().fold(0, |acc, &i| acc * self.n + i) * self.n;
        &self.data[start..start + self.n]
    }

    pub fn fiber_mut(&mut self, inputs: &[usize]) -> &mut [Rational] {
        let start = inputs.iter().fold(0, |acc, &i| acc * self.n + i) * self.n;
        &mut self.data[start..start + self.n]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Multilinear evaluation on `rank - 1` vectors.
    pub fn apply(&self, args: &[&[Rational]]) -> Vector {
        assert_eq!(args.len() + 1, self.rank);
        let mut out = vec![Rational::zero(); self.n];
        self.apply_rec(
            args,
            0,
            Rational::from_integer(1.into()),
            &mut Vec::new(),
            &mut out,
        );
        out
    }

    fn apply_rec(
        &self,
        args: &[&[Rational]],
        depth: usize,
        weight: Rational,
        prefix: &mut Vec<usize>,
        out: &mut Vector,
    ) {
        if depth == args.len() {
            for (o, x) in out.iter_mut().zip(self.fiber(prefix)) {
                if !x.is_zero() {
                    *o += &weight * x;
                }
            }
            return;
        }
        for (i, a) in args[depth].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            prefix.push(i);
            self.apply_rec(args, depth + 1, &weight * a, prefix, out);
            prefix.pop();
        }
    }

    /// All index tuples of the tensor, in storage order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.data.len()).map(move |mut o| {
            let mut idx = vec![0; self.rank];
            for slot in idx.iter_mut().rev() {
                *slot = o % self.n;
                o /= self.n;
            }
            idx
        })
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> {
        self.indices().zip(&self.data).filter(|(_, x)| !x.is_zero())
    }
}

impl<const R: usize> Index<[usize; R]> for Tensor {
    type Output = Rational;
    fn index(&self, idx: [usize; R]) -> &Rational {
        self.at(&idx)
    }
}

impl<const R: usize> IndexMut<[usize; R]> for Tensor {
    fn index_mut(&mut self, idx: [usize; R]) -> &mut Rational {
        self.at_mut(&idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn bilinear_apply() {
        let mut t = Tensor::zeros(3, 2);
        t[[0, 1, 0]] = int(1);
        t[[1, 0, 0]] = int(-1);
        let out = t.apply(&[&[int(2), int(0)], &[int(0), int(3)]]);
        assert_eq!(out, vec![int(6), int(0)]);
        assert_eq!(t.fiber(&[1, 0]), &[int(-1), int(0)]);
        assert_eq!(t.nonzero_entries().count(), 2);
    }
}
