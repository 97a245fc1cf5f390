//! Dense covariant tensors with every index ranging over the full frame.

use num_traits::Zero;

use crate::scalar::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor {
    dim: usize,
    rank: usize,
    data: Vec<Rat>,
}

impl Tensor {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Tensor {
            dim,
            rank,
            data: vec![Rat::zero(); dim.pow(rank as u32)],
        }
    }

    /// Fills every slot from `f(index tuple)`.
    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> Rat) -> Self {
        let mut data = Vec::with_capacity(dim.pow(rank as u32));
        let mut ix = vec![0usize; rank];
        for _ in 0..dim.pow(rank as u32) {
            data.push(f(&ix));
            for slot in (0..rank).rev() {
                ix[slot] += 1;
                if ix[slot] < dim {
                    break;
                }
                ix[slot] = 0;
            }
        }
        Tensor { dim, rank, data }
    }

    /// Builds from flat data in row-major index order.
    pub fn from_data(dim: usize, rank: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), dim.pow(rank as u32));
        Tensor { dim, rank, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    fn offset(&self, ix: &[usize]) -> usize {
        debug_assert_eq!(ix.len(), self.rank);
        ix.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    #[inline]
    pub fn get(&self, ix: &[usize]) -> &Rat {
        &self.data[self.offset(ix)]
    }

    pub fn set(&mut self, ix: &[usize], v: Rat) {
        let o = self.offset(ix);
        self.data[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn data(&self) -> &[Rat] {
        &self.data
    }

    /// First nonzero entry, for witnesses.
    pub fn first_nonzero(&self) -> Option<(Vec<usize>, Rat)> {
        let pos = self.data.iter().position(|v| !v.is_zero())?;
        let mut ix = vec![0; self.rank];
        let mut rest = pos;
        for slot in (0..self.rank).rev() {
            ix[slot] = rest % self.dim;
            rest /= self.dim;
        }
        Some((ix, self.data[pos].clone()))
    }

    /// `t(v₁, …, v_k)` for arbitrary frame vectors.
    pub fn eval(&self, args: &[&[Rat]]) -> Rat {
        assert_eq!(args.len(), self.rank);
        let nz: Vec<Vec<(usize, &Rat)>> = args
            .iter()
            .map(|v| v.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        let mut acc = Rat::zero();
        let mut ix = vec![0usize; self.rank];
        self.eval_rec(&nz, 0, &mut ix, &Rat::from_integer(1.into()), &mut acc);
        acc
    }

    fn eval_rec(&self, nz: &[Vec<(usize, &Rat)>], slot: usize, ix: &mut Vec<usize>, w: &Rat, acc: &mut Rat) {
        if slot == self.rank {
            let v = self.get(ix);
            if !v.is_zero() {
                *acc += w * v;
            }
            return;
        }
        for &(i, x) in &nz[slot] {
            ix[slot] = i;
            self.eval_rec(nz, slot + 1, ix, &(w * x), acc);
        }
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn indexing_round_trip() {
        let t = Tensor::from_fn(3, 3, |ix| int((ix[0] * 100 + ix[1] * 10 + ix[2]) as i64));
        assert_eq!(*t.get(&[2, 1, 0]), int(210));
        let mut z = Tensor::zeros(3, 3);
        z.set(&[1, 2, 0], int(5));
        assert_eq!(z.first_nonzero(), Some((vec![1, 2, 0], int(5))));
        assert_eq!(z.count_nonzero(), 1);
    }
}
