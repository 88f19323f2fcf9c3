//! Multipliers (R, L) of an algebra and the multiplier algebra M(A).
//!
//! A pair of operators is a multiplier when, for all a1, a2,
//! R(a1 a2) = a1 R(a2), L(a1 a2) = L(a1) a2 and R(a1) a2 = a1 L(a2).
//! The product is (R1, L1)(R2, L2) = (R2 ∘ R1, L1 ∘ L2).

use std::fmt;

use num_traits::Zero;

use crate::algebra::{unit_vec, LinOp, StructureAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix, SparseMatrix, SparseVec, Subspace};
use crate::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multiplier {
    pub r: LinOp,
    pub l: LinOp,
}

impl Multiplier {
    pub fn new(r: LinOp, l: LinOp) -> Result<Self> {
        if r.dim() != l.dim() {
            return Err(Error::DimensionMismatch { expected: r.dim(), found: l.dim() });
        }
        Ok(Multiplier { r, l })
    }

    pub fn identity(dim: usize) -> Self {
        Multiplier { r: LinOp::identity(dim), l: LinOp::identity(dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Multiplier { r: LinOp::zero(dim), l: LinOp::zero(dim) }
    }

    pub fn inner(a: &StructureAlgebra, m: &SparseVec) -> Self {
        let (r, l) = a.regular_reps_sparse(m);
        Multiplier { r, l }
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.l.is_zero()
    }

    /// (R1, L1)(R2, L2) = (R2 ∘ R1, L1 ∘ L2).
    pub fn product(&self, other: &Multiplier) -> Multiplier {
        Multiplier { r: other.r.compose(&self.r), l: self.l.compose(&other.l) }
    }

    pub fn axpy(&self, c: &Rat, other: &Multiplier) -> Multiplier {
        Multiplier { r: self.r.axpy(c, &other.r), l: self.l.axpy(c, &other.l) }
    }

    pub fn scale(&self, c: &Rat) -> Multiplier {
        Multiplier { r: self.r.scale(c), l: self.l.scale(c) }
    }

    /// Coordinates in operator-pair space: R entries then L entries.
    pub fn to_flat(&self) -> SparseVec {
        let n2 = self.dim() * self.dim();
        let mut e = self.r.to_flat().entries().to_vec();
        e.extend(self.l.to_flat().entries().iter().map(|(i, x)| (i + n2, x.clone())));
        SparseVec::from_entries(e)
    }

    pub fn from_flat(dim: usize, v: &SparseVec) -> Multiplier {
        let n2 = dim * dim;
        let (r, l): (Vec<_>, Vec<_>) = v.entries().iter().cloned().partition(|(i, _)| *i < n2);
        let l = l.into_iter().map(|(i, x)| (i - n2, x)).collect();
        Multiplier {
            r: LinOp::from_flat(dim, &SparseVec::from_entries(r)),
            l: LinOp::from_flat(dim, &SparseVec::from_entries(l)),
        }
    }
}

/// Which of the three defining identities failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// R(a1 a2) = a1 R(a2)
    Right,
    /// L(a1 a2) = L(a1) a2
    Left,
    /// R(a1) a2 = a1 L(a2)
    Compatibility,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constraint::Right => "R(a1 a2) = a1 R(a2)",
            Constraint::Left => "L(a1 a2) = L(a1) a2",
            Constraint::Compatibility => "R(a1) a2 = a1 L(a2)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    pub constraint: Constraint,
    pub i: usize,
    pub j: usize,
}

impl Violation {
    pub fn describe(&self, a: &StructureAlgebra) -> String {
        format!("{} fails at ({}, {})", self.constraint, a.labels()[self.i], a.labels()[self.j])
    }
}

/// All violated basis constraints, ordered by family and then (i, j).
pub fn multiplier_violations(a: &StructureAlgebra, r: &LinOp, l: &LinOp) -> Result<Vec<Violation>> {
    let n = a.dim();
    for op in [r, l] {
        if op.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: op.dim() });
        }
    }
    let mut out = Vec::new();
    let families = [Constraint::Right, Constraint::Left, Constraint::Compatibility];
    for c in families {
        for i in 0..n {
            for j in 0..n {
                let (bi, bj) = (unit_vec(i), unit_vec(j));
                let (lhs, rhs) = match c {
                    Constraint::Right => (r.apply_sparse(a.basis_product(i, j)), a.mul_sparse(&bi, r.column(j))),
                    Constraint::Left => (l.apply_sparse(a.basis_product(i, j)), a.mul_sparse(l.column(i), &bj)),
                    Constraint::Compatibility => (a.mul_sparse(r.column(i), &bj), a.mul_sparse(&bi, l.column(j))),
                };
                if lhs != rhs {
                    out.push(Violation { constraint: c, i, j });
                }
            }
        }
    }
    Ok(out)
}

/// Checks the multiplier identities on all basis pairs.
pub fn is_multiplier(a: &StructureAlgebra, r: &LinOp, l: &LinOp) -> Result<Verdict> {
    let v = multiplier_violations(a, r, l)?;
    Ok(match v.first() {
        None => Verdict::holds(),
        Some(w) => Verdict::fails(w.describe(a)),
    })
}

/// The multiplier algebra with a canonical basis and its product table.
#[derive(Clone, Debug)]
pub struct MultiplierAlgebra {
    parent_dim: usize,
    basis: Vec<Multiplier>,
    space: Subspace,
    algebra: StructureAlgebra,
}

/// Linear constraint system over the unknowns (R entries, L entries).
fn constraint_matrix(a: &StructureAlgebra) -> SparseMatrix {
    let n = a.dim();
    let n2 = n * n;
    let rv = |row: usize, col: usize| row * n + col;
    let lv = |row: usize, col: usize| n2 + row * n + col;
    let mut rows: Vec<SparseVec> = Vec::new();
    let c = |i: usize, j: usize, k: usize| a.basis_product(i, j).get(k);
    // structure constants by (i, j) with their nonzero k
    for i in 0..n {
        for j in 0..n {
            for t in 0..n {
                // Σ_k c_ijk R[t,k] − Σ_s c_ist R[s,j]
                let mut e = Vec::new();
                for (k, x) in a.basis_product(i, j).entries() {
                    e.push((rv(t, *k), x.clone()));
                }
                for s in 0..n {
                    let x = c(i, s, t);
                    if !x.is_zero() {
                        e.push((rv(s, j), -x));
                    }
                }
                rows.push(SparseVec::from_entries(e));
                // Σ_k c_ijk L[t,k] − Σ_s c_sjt L[s,i]
                let mut e = Vec::new();
                for (k, x) in a.basis_product(i, j).entries() {
                    e.push((lv(t, *k), x.clone()));
                }
                for s in 0..n {
                    let x = c(s, j, t);
                    if !x.is_zero() {
                        e.push((lv(s, i), -x));
                    }
                }
                rows.push(SparseVec::from_entries(e));
                // Σ_s c_sjt R[s,i] − Σ_s c_ist L[s,j]
                let mut e = Vec::new();
                for s in 0..n {
                    let x = c(s, j, t);
                    if !x.is_zero() {
                        e.push((rv(s, i), x));
                    }
                    let y = c(i, s, t);
                    if !y.is_zero() {
                        e.push((lv(s, j), -y));
                    }
                }
                rows.push(SparseVec::from_entries(e));
            }
        }
    }
    rows.retain(|r| !r.is_zero());
    SparseMatrix::from_rows(2 * n2, rows).expect("indices in range")
}

pub fn multiplier_algebra(a: &StructureAlgebra) -> Result<MultiplierAlgebra> {
    let n = a.dim();
    let cons = constraint_matrix(a);
    // solutions x of cons·x = 0 are the left kernel of the transpose
    let space = cons.transpose().left_kernel_basis();
    let basis: Vec<Multiplier> = space.basis().iter().map(|v| Multiplier::from_flat(n, v)).collect();
    let k = basis.len();
    let coords = |m: &Multiplier| -> Result<SparseVec> {
        let v = m.to_flat();
        if !space.contains_sparse(&v) {
            return Err(Error::Internal("multiplier product left the solution space".into()));
        }
        let piv = space.pivots();
        Ok(SparseVec::from_entries(piv.iter().enumerate().map(|(i, p)| (i, v.get(*p))).collect()))
    };
    let mut triples = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            for (t, v) in coords(&x.product(y))?.entries() {
                triples.push((i, j, *t, v.clone()));
            }
        }
    }
    let unit = coords(&Multiplier::identity(n))?.to_dense(k);
    let labels = (1..=k).map(|i| format!("m{i}")).collect();
    let algebra = StructureAlgebra::new(labels, triples, Some(unit))
        .map_err(|e| Error::Internal(format!("multiplier algebra table invalid: {e}")))?;
    Ok(MultiplierAlgebra { parent_dim: n, basis, space, algebra })
}

impl MultiplierAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn parent_dim(&self) -> usize {
        self.parent_dim
    }

    pub fn basis(&self) -> &[Multiplier] {
        &self.basis
    }

    /// M(A) as an abstract algebra in the basis m1..mk.
    pub fn as_algebra(&self) -> &StructureAlgebra {
        &self.algebra
    }

    /// Coordinates of a multiplier in the basis, if it is one.
    pub fn coordinates(&self, m: &Multiplier) -> Option<SparseVec> {
        let v = m.to_flat();
        if !self.space.contains_sparse(&v) {
            return None;
        }
        let piv = self.space.pivots();
        Some(SparseVec::from_entries(piv.iter().enumerate().map(|(i, p)| (i, v.get(*p))).collect()))
    }

    pub fn contains(&self, m: &Multiplier) -> bool {
        self.space.contains_sparse(&m.to_flat())
    }
}

/// μ: A → M(A), m ↦ (R_m, L_m), in the canonical bases.
#[derive(Clone, Debug)]
pub struct MuMap {
    /// dim M(A) × dim A; column j holds the coordinates of μ(b_j).
    pub matrix: RatMatrix,
    pub kernel: Subspace,
    pub injective: bool,
    pub surjective: bool,
}

pub fn mu_map(a: &StructureAlgebra, ma: &MultiplierAlgebra) -> Result<MuMap> {
    let n = a.dim();
    let k = ma.dim();
    let mut m = RatMatrix::zeros(k, n);
    for j in 0..n {
        let mu = Multiplier::inner(a, &unit_vec(j));
        let c = ma.coordinates(&mu).ok_or_else(|| Error::Internal("inner multiplier outside M(A)".into()))?;
        for (i, v) in c.entries() {
            m.set(*i, j, v.clone());
        }
    }
    let kernel = m.right_kernel_basis();
    let rank = m.rank();
    Ok(MuMap { injective: kernel.is_zero(), surjective: rank == k, kernel, matrix: m })
}

/// μ(A) is a two-sided ideal of M(A).
pub fn inner_ideal_check(a: &StructureAlgebra, ma: &MultiplierAlgebra) -> Verdict {
    let n = a.dim();
    let inner: Vec<Multiplier> = (0..n).map(|j| Multiplier::inner(a, &unit_vec(j))).collect();
    let span = Subspace::span_sparse(2 * n * n, inner.iter().map(|m| m.to_flat())).expect("sizes match");
    for (i, x) in ma.basis().iter().enumerate() {
        for (j, mu) in inner.iter().enumerate() {
            for (side, p) in [("left", x.product(mu)), ("right", mu.product(x))] {
                if !span.contains_sparse(&p.to_flat()) {
                    return Verdict::fails(format!(
                        "{side} product of m{} with mu({}) is not inner",
                        i + 1,
                        a.labels()[j]
                    ));
                }
            }
        }
    }
    Verdict::holds()
}

/// R' ∘ L = L ∘ R' for all pairs of basis multipliers (R, L), (R', L').
pub fn permutability_check(ma: &MultiplierAlgebra) -> Verdict {
    let b = ma.basis();
    for (i, x) in b.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if y.r.compose(&x.l) != x.l.compose(&y.r) {
                return Verdict::fails(format!("R of m{} does not commute with L of m{}", j + 1, i + 1));
            }
        }
    }
    Verdict::holds()
}

/// Every multiplier permutes with every inner multiplier.
pub fn permutes_with_inner(a: &StructureAlgebra, ma: &MultiplierAlgebra) -> Verdict {
    for (i, x) in ma.basis().iter().enumerate() {
        for j in 0..a.dim() {
            let mu = Multiplier::inner(a, &unit_vec(j));
            if x.r.compose(&mu.l) != mu.l.compose(&x.r) || mu.r.compose(&x.l) != x.l.compose(&mu.r) {
                return Verdict::fails(format!("m{} and mu({}) do not permute", i + 1, a.labels()[j]));
            }
        }
    }
    Verdict::holds()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    #[test]
    fn inner_pairs_are_multipliers() {
        let a = builtin("ut:2").unwrap();
        let m = Multiplier::inner(&a, &unit_vec(2));
        assert!(is_multiplier(&a, &m.r, &m.l).unwrap().holds);
    }

    #[test]
    fn identity_with_inner_left_fails() {
        let a = builtin("ut:2").unwrap();
        let (_, l) = a.regular_reps_sparse(&unit_vec(2));
        let v = multiplier_violations(&a, &LinOp::identity(3), &l).unwrap();
        assert!(v.contains(&Violation { constraint: Constraint::Compatibility, i: 0, j: 1 }));
        assert!(!is_multiplier(&a, &LinOp::identity(3), &l).unwrap().holds);
        assert!(is_multiplier(&a, &LinOp::identity(2), &l).is_err());
    }

    #[test]
    fn zero_algebra_everything_is_multiplier() {
        let z = builtin("zero_mult:1").unwrap();
        let r = LinOp::identity(1).scale(&crate::linalg::rat(5));
        assert!(is_multiplier(&z, &r, &LinOp::identity(1)).unwrap().holds);
        assert_eq!(multiplier_algebra(&z).unwrap().dim(), 2);
    }

    #[test]
    fn unital_algebras() {
        for name in ["ut:2", "grassmann_unital:2", "mat:2"] {
            let a = builtin(name).unwrap();
            let ma = multiplier_algebra(&a).unwrap();
            assert_eq!(ma.dim(), a.dim(), "{name}");
            let mu = mu_map(&a, &ma).unwrap();
            assert!(mu.injective && mu.surjective, "{name}");
            assert!(permutability_check(&ma).holds);
            assert!(inner_ideal_check(&a, &ma).holds);
        }
    }

    #[test]
    fn zero_mult_two() {
        let z = builtin("zero_mult:2").unwrap();
        let ma = multiplier_algebra(&z).unwrap();
        assert_eq!(ma.dim(), 8);
        let mu = mu_map(&z, &ma).unwrap();
        assert_eq!(mu.kernel.dim(), 2);
        assert!(!mu.surjective);
        assert!(!permutability_check(&ma).holds);
        assert!(inner_ideal_check(&z, &ma).holds);
    }

    #[test]
    fn product_rule_composes_oppositely() {
        let a = builtin("ut:2").unwrap();
        // μ(ab) = μ(a)μ(b)
        for i in 0..3 {
            for j in 0..3 {
                let lhs = Multiplier::inner(&a, a.basis_product(i, j));
                let rhs = Multiplier::inner(&a, &unit_vec(i)).product(&Multiplier::inner(&a, &unit_vec(j)));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
