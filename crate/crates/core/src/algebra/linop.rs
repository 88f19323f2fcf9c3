use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix, SparseVec};

/// Linear operator on an n-dimensional coordinate space, stored by the
/// images of the coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinOp {
    dim: usize,
    cols: Vec<SparseVec>,
}

impl LinOp {
    pub fn zero(dim: usize) -> Self {
        LinOp { dim, cols: vec![SparseVec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        LinOp { dim, cols: (0..dim).map(|i| SparseVec::from_entries(vec![(i, Rat::one())])).collect() }
    }

    /// `cols[j]` is the image of the j-th coordinate vector.
    pub fn from_columns(dim: usize, cols: Vec<SparseVec>) -> Result<Self> {
        if cols.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: cols.len() });
        }
        if let Some(m) = cols.iter().filter_map(|c| c.max_index()).max() {
            if m >= dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m + 1 });
            }
        }
        Ok(LinOp { dim, cols })
    }

    pub fn from_matrix(m: &RatMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let cols = (0..m.ncols()).map(|c| SparseVec::from_dense(&m.column(c))).collect();
        Ok(LinOp { dim: m.nrows(), cols })
    }

    pub fn to_matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col.entries() {
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn entry(&self, r: usize, c: usize) -> Rat {
        self.cols[c].get(r)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == LinOp::identity(self.dim)
    }

    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, x) in v.entries() {
            out = out.axpy(x, &self.cols[*j]);
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim);
        self.apply_sparse(&SparseVec::from_dense(v)).to_dense(self.dim)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinOp) -> LinOp {
        assert_eq!(self.dim, other.dim);
        LinOp { dim: self.dim, cols: other.cols.iter().map(|c| self.apply_sparse(c)).collect() }
    }

    pub fn add(&self, other: &LinOp) -> LinOp {
        self.axpy(&Rat::one(), other)
    }

    pub fn sub(&self, other: &LinOp) -> LinOp {
        self.axpy(&-Rat::one(), other)
    }

    pub fn scale(&self, c: &Rat) -> LinOp {
        LinOp { dim: self.dim, cols: self.cols.iter().map(|v| v.scale(c)).collect() }
    }

    /// self + c·other.
    pub fn axpy(&self, c: &Rat, other: &LinOp) -> LinOp {
        assert_eq!(self.dim, other.dim);
        LinOp { dim: self.dim, cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.axpy(c, b)).collect() }
    }

    pub fn trace(&self) -> Rat {
        (0..self.dim).fold(Rat::zero(), |acc, i| acc + self.cols[i].get(i))
    }

    /// Flattened entries, index `r * dim + c`.
    pub fn to_flat(&self) -> SparseVec {
        let mut e = Vec::new();
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col.entries() {
                e.push((r * self.dim + c, v.clone()));
            }
        }
        SparseVec::from_entries(e)
    }

    pub fn from_flat(dim: usize, v: &SparseVec) -> LinOp {
        let mut cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); dim];
        for (i, x) in v.entries() {
            cols[i % dim].push((i / dim, x.clone()));
        }
        LinOp { dim, cols: cols.into_iter().map(SparseVec::from_entries).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip_and_composition() {
        let a = RatMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        let b = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let (la, lb) = (LinOp::from_matrix(&a).unwrap(), LinOp::from_matrix(&b).unwrap());
        assert_eq!(la.to_matrix(), a);
        assert_eq!(la.compose(&lb).to_matrix(), a.mul(&b).unwrap());
        assert_eq!(LinOp::from_flat(2, &la.to_flat()), la);
        assert_eq!(la.trace(), crate::linalg::rat(2));
    }
}
