use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{primitive_integer_row, Rat, SparseMatrix, Subspace};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed for the zero-row case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(RatMatrix { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&x| super::rat(x)).collect()).collect();
        Self::from_rows(cols, rows).expect("ragged integer matrix")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Rat::zero(); self.cols];
        for (r, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (c, b) in self.row(r).iter().enumerate() {
                if !b.is_zero() {
                    out[c] += a * b;
                }
            }
        }
        out
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut triples = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    triples.push((r, c, v.clone()));
                }
            }
        }
        SparseMatrix::from_triples(self.rows, self.cols, triples).expect("dense entries are unique")
    }

    /// Rows scaled to primitive integer vectors (a rank-preserving change).
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| primitive_integer_row(self.row(r))).collect()
    }

    /// Fraction-free Bareiss elimination. Returns the pivot columns and the
    /// row permutation applied (original index of each eliminated row).
    fn bareiss(&self) -> (Vec<usize>, Vec<usize>) {
        let mut m = self.integer_rows();
        let mut order: Vec<usize> = (0..self.rows).collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            order.swap(r, p);
            let (top, bottom) = m.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let piv = &pivot_row[c];
            for row in bottom.iter_mut() {
                let f = row[c].clone();
                for j in c..self.cols {
                    let v = &row[j] * piv - &f * &pivot_row[j];
                    row[j] = v / &prev;
                }
            }
            prev = piv.clone();
            pivots.push(c);
            r += 1;
        }
        (pivots, order)
    }

    pub fn rank(&self) -> usize {
        if self.rows * self.cols > super::DENSE_THRESHOLD {
            return self.to_sparse().rank();
        }
        self.bareiss().0.len()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let s = Subspace::span(self.cols, self.row_vecs()).expect("row lengths match");
        let pivots = s.pivots();
        let mut rows = s.basis_dense();
        rows.resize(self.rows, vec![Rat::zero(); self.cols]);
        (RatMatrix::from_rows(self.cols, rows).expect("consistent"), pivots)
    }

    /// Canonical basis of {v : v·m = 0}.
    pub fn left_kernel_basis(&self) -> Subspace {
        self.to_sparse().left_kernel_basis()
    }

    /// Canonical basis of {x : m·x = 0}.
    pub fn right_kernel_basis(&self) -> Subspace {
        self.transpose().left_kernel_basis()
    }

    /// Solves m·x = b, returning one solution if it exists.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.push(b[r].clone());
            aug.push(row);
        }
        let s = Subspace::span(self.cols + 1, aug).expect("row lengths match");
        let mut x = vec![Rat::zero(); self.cols];
        for (row, p) in s.basis().iter().zip(s.pivots()) {
            if p == self.cols {
                return None;
            }
            x[p] = row.get(self.cols);
        }
        Some(x)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(super::format_rat).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn ranks() {
        assert_eq!(RatMatrix::identity(3).rank(), 3);
        assert_eq!(RatMatrix::from_i64(&[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(RatMatrix::from_i64(&[&[1, 2], &[2, 4], &[0, 1]]).rank(), 2);
        assert_eq!(RatMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(RatMatrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn left_kernels() {
        assert_eq!(RatMatrix::identity(3).left_kernel_basis().dim(), 0);
        let k = RatMatrix::zeros(2, 3).left_kernel_basis();
        assert_eq!(k, Subspace::full(2));
        let k = RatMatrix::from_i64(&[&[1, 0], &[1, 0]]).left_kernel_basis();
        let expected = Subspace::span(2, vec![vec![rat(1), rat(-1)]]).unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn rref_and_solve() {
        let m = RatMatrix::from_i64(&[&[2, 4, 6], &[1, 1, 1]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.row(0), &[rat(1), rat(0), rat(-1)]);
        assert_eq!(r.row(1), &[rat(0), rat(1), rat(2)]);
        let x = m.solve(&[rat(2), rat(1)]).unwrap();
        assert_eq!(m.apply(&x), vec![rat(2), rat(1)]);
        let sing = RatMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(sing.solve(&[rat(1), rat(2)]).is_none());
    }

    #[test]
    fn product_and_transpose() {
        let a = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let b = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), RatMatrix::from_i64(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), RatMatrix::from_i64(&[&[1, 3], &[2, 4]]));
        assert_eq!(a.left_apply(&[rat(1), rat(1)]), vec![rat(4), rat(6)]);
    }
}
