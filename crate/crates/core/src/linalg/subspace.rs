use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};

use super::{Rat, SparseVec};
use crate::error::{Error, Result};

/// A subspace of Q^n stored by its reduced row echelon basis.
///
/// Rows are sorted by pivot column, each pivot entry is 1 and every other
/// row is zero in that column, so equal subspaces compare equal.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
    pivot_row: BTreeMap<usize, usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rows == other.rows
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.rows.hash(state);
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivot_row: BTreeMap::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let rows: Vec<SparseVec> =
            (0..ambient).map(|i| SparseVec::from_sorted_unchecked(vec![(i, Rat::one())])).collect();
        Self::from_rref_unchecked(ambient, rows)
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Rat>>) -> Result<Self> {
        let mut s = Self::zero(ambient);
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: v.len() });
            }
            s.insert_sparse(SparseVec::from_dense(&v));
        }
        Ok(s)
    }

    pub fn span_sparse(ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Result<Self> {
        let mut s = Self::zero(ambient);
        for v in vectors {
            if v.max_index().is_some_and(|m| m >= ambient) {
                return Err(Error::DimensionMismatch { expected: ambient, found: v.max_index().unwrap() + 1 });
            }
            s.insert_sparse(v);
        }
        Ok(s)
    }

    /// Trusts that `rows` already form a reduced echelon basis (any order).
    pub(crate) fn from_rref_unchecked(ambient: usize, mut rows: Vec<SparseVec>) -> Self {
        rows.sort_by_key(|r| r.leading().map(|l| l.0));
        let pivot_row = rows.iter().enumerate().map(|(i, r)| (r.leading().expect("nonzero basis row").0, i)).collect();
        let s = Subspace { ambient, rows, pivot_row };
        debug_assert!(s.is_canonical());
        s
    }

    fn is_canonical(&self) -> bool {
        self.rows.iter().all(|r| {
            let (p, v) = r.leading().expect("nonzero");
            v.is_one()
                && r.entries().iter().skip(1).all(|(c, _)| !self.pivot_row.contains_key(c))
                && self.pivot_row.contains_key(&p)
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn basis_dense(&self) -> Vec<Vec<Rat>> {
        self.rows.iter().map(|r| r.to_dense(self.ambient)).collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading().unwrap().0).collect()
    }

    /// Coordinates not used as pivots; they index a basis of the quotient.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivot_row.contains_key(c)).collect()
    }

    /// Remainder of `v` after eliminating every pivot coordinate.
    pub fn reduce_sparse(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, Rat)> =
            v.entries().iter().filter_map(|(c, x)| self.pivot_row.get(c).map(|&r| (r, x.clone()))).collect();
        let mut out = v.clone();
        for (r, x) in hits {
            out = out.axpy(&-x, &self.rows[r]);
        }
        out
    }

    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        self.reduce_sparse(&SparseVec::from_dense(v)).to_dense(self.ambient)
    }

    pub fn contains_vector(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce_sparse(&SparseVec::from_dense(v)).is_zero()
    }

    pub fn contains_sparse(&self, v: &SparseVec) -> bool {
        self.reduce_sparse(v).is_zero()
    }

    /// Coefficients of `v` in the stored basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots().into_iter().map(|p| v[p].clone()).collect())
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.insert_sparse(SparseVec::from_dense(v))
    }

    pub fn insert_sparse(&mut self, v: SparseVec) -> bool {
        let r = self.reduce_sparse(&v);
        let Some((p, lead)) = r.leading() else {
            return false;
        };
        let inv = Rat::one() / lead;
        let r = r.scale(&inv);
        for row in self.rows.iter_mut() {
            let c = row.get(p);
            if !c.is_zero() {
                *row = row.axpy(&-c, &r);
            }
        }
        let pos = self.rows.partition_point(|x| x.leading().unwrap().0 < p);
        self.rows.insert(pos, r);
        self.pivot_row = self.rows.iter().enumerate().map(|(i, r)| (r.leading().unwrap().0, i)).collect();
        true
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut s = self.clone();
        for r in &other.rows {
            s.insert_sparse(r.clone());
        }
        Ok(s)
    }

    /// Zassenhaus: row-reduce [(u, u) | u ∈ self] ∪ [(v, 0) | v ∈ other];
    /// rows with zero first half span the intersection.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let n = self.ambient;
        let mut big = Subspace::zero(2 * n);
        for u in &self.rows {
            let mut e = u.entries().to_vec();
            e.extend(u.entries().iter().map(|(i, x)| (i + n, x.clone())));
            big.insert_sparse(SparseVec::from_sorted_unchecked(e));
        }
        for v in &other.rows {
            big.insert_sparse(v.clone());
        }
        let rows =
            big.rows.iter().filter(|r| r.leading().unwrap().0 >= n).map(|r| {
                SparseVec::from_sorted_unchecked(r.entries().iter().map(|(i, x)| (i - n, x.clone())).collect())
            });
        Subspace::span_sparse(n, rows)
    }

    /// True iff `other` ⊆ `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_same(other)?;
        Ok(other.rows.iter().all(|r| self.contains_sparse(r)))
    }

    /// Image under a map given by the images of the coordinate vectors.
    pub fn map(&self, target_dim: usize, f: impl Fn(&SparseVec) -> SparseVec) -> Subspace {
        let mut s = Subspace::zero(target_dim);
        for r in &self.rows {
            s.insert_sparse(f(r));
        }
        s
    }
}
