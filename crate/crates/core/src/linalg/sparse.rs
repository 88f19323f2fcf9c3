use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::echelon::{integer_rank, IntEchelon};
use super::{common_denominator, Rat, RatMatrix, Subspace};
use crate::error::{Error, Result};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rat)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Sorts, merges duplicates by addition and drops zeros.
    pub fn from_entries(mut entries: Vec<(usize, Rat)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Rat)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        SparseVec { entries: out }
    }

    pub(crate) fn from_sorted_unchecked(entries: Vec<(usize, Rat)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| !e.1.is_zero()));
        SparseVec { entries }
    }

    pub fn from_dense(v: &[Rat]) -> Self {
        SparseVec { entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect() }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); n];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Rat)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, &Rat)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn get(&self, i: usize) -> Rat {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn has(&self, i: usize) -> bool {
        self.entries.binary_search_by_key(&i, |e| e.0).is_ok()
    }

    pub fn scale(&self, c: &Rat) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    /// Returns self + c·other.
    pub fn axpy(&self, c: &Rat, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * c));
                j += 1;
            } else {
                let v = &a[i].1 + &b[j].1 * c;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn dot(&self, dense: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, v) in &self.entries {
            if !dense[*i].is_zero() {
                acc += v * &dense[*i];
            }
        }
        acc
    }

    /// Primitive integer form (same span), as `(index, value)` pairs.
    pub fn to_primitive_integers(&self) -> Vec<(u32, BigInt)> {
        let d = common_denominator(self.entries.iter().map(|e| &e.1));
        let ints: Vec<(u32, BigInt)> =
            self.entries.iter().map(|(i, v)| (*i as u32, v.numer() * (&d / v.denom()))).collect();
        super::echelon::make_primitive(ints)
    }
}

/// Row-major sparse rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn from_triples(rows: usize, cols: usize, triples: Vec<(usize, usize, Rat)>) -> Result<Self> {
        let mut buckets: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); rows];
        for (r, c, v) in triples {
            if r >= rows {
                return Err(Error::DimensionMismatch { expected: rows, found: r + 1 });
            }
            if c >= cols {
                return Err(Error::DimensionMismatch { expected: cols, found: c + 1 });
            }
            buckets[r].push((c, v));
        }
        let mut data = Vec::with_capacity(rows);
        for (r, mut b) in buckets.into_iter().enumerate() {
            b.sort_by_key(|e| e.0);
            if let Some(w) = b.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::Invalid(format!("duplicate entry at ({}, {})", r, w[0].0)));
            }
            b.retain(|e| !e.1.is_zero());
            data.push(SparseVec::from_sorted_unchecked(b));
        }
        Ok(SparseMatrix { rows, cols, data })
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        for r in &rows {
            if let Some(m) = r.max_index() {
                if m >= cols {
                    return Err(Error::DimensionMismatch { expected: cols, found: m + 1 });
                }
            }
        }
        Ok(SparseMatrix { rows: rows.len(), cols, data: rows })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.nnz()).sum()
    }

    pub fn to_dense(&self) -> RatMatrix {
        let rows = self.data.iter().map(|r| r.to_dense(self.cols)).collect();
        RatMatrix::from_rows(self.cols, rows).expect("consistent")
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row.entries() {
                cols[*c].push((r, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data: cols.into_iter().map(SparseVec::from_sorted_unchecked).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        integer_rank(self.data.iter().map(|r| r.to_primitive_integers()))
    }

    /// Canonical basis of {v : v·m = 0}.
    ///
    /// Rows are scanned from last to first; a row that depends on the rows
    /// already kept yields the kernel vector e_m − Σ c_p e_p, and these
    /// vectors are exactly the reduced echelon basis of the kernel.
    pub fn left_kernel_basis(&self) -> Subspace {
        let mut ech: IntEchelon<BigInt> = IntEchelon::new();
        let mut kept: Vec<usize> = Vec::new();
        let mut dependent: Vec<usize> = Vec::new();
        for m in (0..self.rows).rev() {
            let row = self.data[m].to_primitive_integers();
            if ech.insert(row).expect("BigInt arithmetic cannot overflow") {
                kept.push(m);
            } else {
                dependent.push(m);
            }
        }
        let r = kept.len();
        if dependent.is_empty() {
            return Subspace::zero(self.rows);
        }
        let mut pcols: Vec<usize> = ech.pivot_columns().into_iter().map(|c| c as usize).collect();
        pcols.sort_unstable();
        // kept rows restricted to pcols form an invertible r×r block S
        let mut aug = Vec::with_capacity(r);
        for (i, &p) in kept.iter().enumerate() {
            let mut row: Vec<Rat> = pcols.iter().map(|&c| self.data[p].get(c)).collect();
            row.extend((0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            aug.push(row);
        }
        // rows of [S | I] reduce to [I | S^{-1}] when read transposed:
        // we need c with c·S = b, i.e. c = b·S^{-1}.
        let inv = invert(&aug, r);
        let mut vecs = Vec::with_capacity(dependent.len());
        for &m in dependent.iter().rev() {
            let b: Vec<Rat> = pcols.iter().map(|&c| self.data[m].get(c)).collect();
            let mut entries = vec![(m, Rat::one())];
            for (j, &p) in kept.iter().enumerate() {
                let mut c = Rat::zero();
                for (k, bk) in b.iter().enumerate() {
                    if !bk.is_zero() && !inv[k][j].is_zero() {
                        c += bk * &inv[k][j];
                    }
                }
                if !c.is_zero() {
                    entries.push((p, -c));
                }
            }
            vecs.push(SparseVec::from_entries(entries));
        }
        Subspace::from_rref_unchecked(self.rows, vecs)
    }
}

/// Inverse of the left r×r block of `aug` = [S | I], by Gauss–Jordan.
fn invert(aug: &[Vec<Rat>], r: usize) -> Vec<Vec<Rat>> {
    let s = Subspace::span(2 * r, aug.to_vec()).expect("row lengths match");
    assert_eq!(s.dim(), r);
    let basis = s.basis_dense();
    debug_assert!(s.pivots().iter().enumerate().all(|(i, &p)| i == p));
    basis.into_iter().map(|row| row[r..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn axpy_cancels() {
        let a = SparseVec::from_entries(vec![(0, rat(1)), (2, rat(3))]);
        let b = SparseVec::from_entries(vec![(2, rat(1)), (5, rat(1))]);
        let c = a.axpy(&rat(-3), &b);
        assert_eq!(c.entries(), &[(0, rat(1)), (5, rat(-3))]);
    }

    #[test]
    fn duplicate_triples_rejected() {
        let r = SparseMatrix::from_triples(2, 2, vec![(0, 0, rat(1)), (0, 0, rat(2))]);
        assert!(r.is_err());
        let r = SparseMatrix::from_triples(2, 2, vec![(2, 0, rat(1))]);
        assert!(r.is_err());
    }

    #[test]
    fn sparse_kernel_matches_dense_definition() {
        let m = RatMatrix::from_i64(&[&[1, 2, 0], &[2, 4, 0], &[0, 1, 1], &[1, 3, 1], &[0, 0, 0]]);
        let k = m.to_sparse().left_kernel_basis();
        assert_eq!(k.dim(), 5 - m.rank());
        for v in k.basis_dense() {
            assert!(m.left_apply(&v).iter().all(|x| x.is_zero()));
        }
        let again = Subspace::span(5, k.basis_dense()).unwrap();
        assert_eq!(again, k);
    }
}
