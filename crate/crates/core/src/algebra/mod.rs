//! Finite-dimensional associative algebras given by structure constants.

mod builtins;
pub(crate) mod io;
mod linop;

pub use builtins::{builtin, grassmann_word_label, grassmann_words, Builtin};
pub use io::{AlgebraFile, AlgebraRef};
pub use linop::LinOp;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix, SparseVec, Subspace};

/// Product tables with at most this many basis elements are stored densely.
pub const DENSE_TABLE_MAX_DIM: usize = 64;

/// Content fingerprint of an algebra, used to check element parents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraId(pub u64);

#[derive(Clone, Debug)]
enum ProductTable {
    Dense(Vec<SparseVec>),
    Sparse(HashMap<(u32, u32), SparseVec>),
}

/// Associative algebra over Q with basis b_0..b_{n-1} and
/// b_i·b_j = Σ_k c[i][j][k] b_k.
#[derive(Clone, Debug)]
pub struct StructureAlgebra {
    id: AlgebraId,
    dim: usize,
    labels: Vec<String>,
    table: ProductTable,
    unit: Option<SparseVec>,
}

impl PartialEq for StructureAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.dim == other.dim && self.labels == other.labels
    }
}

impl Eq for StructureAlgebra {}

/// Element of a specific algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElement {
    parent: AlgebraId,
    coords: Vec<Rat>,
}

impl AlgElement {
    pub fn parent(&self) -> AlgebraId {
        self.parent
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
}

fn empty() -> &'static SparseVec {
    static EMPTY: std::sync::OnceLock<SparseVec> = std::sync::OnceLock::new();
    EMPTY.get_or_init(SparseVec::new)
}

impl StructureAlgebra {
    /// Validated constructor. `constants` lists nonzero c[i][j][k] (repeated
    /// keys are rejected). Associativity and the unit are checked exhaustively.
    pub fn new(
        labels: Vec<String>,
        constants: Vec<(usize, usize, usize, Rat)>,
        unit: Option<Vec<Rat>>,
    ) -> Result<Self> {
        let a = Self::build(labels, constants, unit)?;
        a.check_associative()?;
        a.check_unit()?;
        Ok(a)
    }

    /// Constructor from a dense dim×dim×dim array.
    pub fn from_dense(labels: Vec<String>, c: &[Vec<Vec<Rat>>], unit: Option<Vec<Rat>>) -> Result<Self> {
        let n = labels.len();
        let mut triples = Vec::new();
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.len() });
        }
        for (i, ci) in c.iter().enumerate() {
            if ci.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: ci.len() });
            }
            for (j, cij) in ci.iter().enumerate() {
                if cij.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: cij.len() });
                }
                for (k, v) in cij.iter().enumerate() {
                    if !v.is_zero() {
                        triples.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        Self::new(labels, triples, unit)
    }

    /// Builds without the exhaustive associativity check. Used only for
    /// programmatically generated families whose small members are tested.
    pub(crate) fn new_unchecked(
        labels: Vec<String>,
        constants: Vec<(usize, usize, usize, Rat)>,
        unit: Option<Vec<Rat>>,
    ) -> Result<Self> {
        Self::build(labels, constants, unit)
    }

    fn build(labels: Vec<String>, constants: Vec<(usize, usize, usize, Rat)>, unit: Option<Vec<Rat>>) -> Result<Self> {
        let dim = labels.len();
        let mut entries: HashMap<(u32, u32), Vec<(usize, Rat)>> = HashMap::new();
        for (i, j, k, v) in constants {
            let m = i.max(j).max(k);
            if m >= dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m + 1 });
            }
            let e = entries.entry((i as u32, j as u32)).or_default();
            if e.iter().any(|x| x.0 == k) {
                return Err(Error::Invalid(format!("duplicate structure constant ({i}, {j}, {k})")));
            }
            e.push((k, v));
        }
        let sparse: HashMap<(u32, u32), SparseVec> = entries
            .into_iter()
            .map(|(key, e)| (key, SparseVec::from_entries(e)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let unit = match unit {
            Some(u) => {
                if u.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: u.len() });
                }
                Some(SparseVec::from_dense(&u))
            }
            None => None,
        };
        let id = fingerprint(&labels, &sparse, &unit);
        let table = if dim <= DENSE_TABLE_MAX_DIM {
            let mut t = vec![SparseVec::new(); dim * dim];
            for ((i, j), v) in sparse {
                t[i as usize * dim + j as usize] = v;
            }
            ProductTable::Dense(t)
        } else {
            ProductTable::Sparse(sparse)
        };
        Ok(StructureAlgebra { id, dim, labels, table, unit })
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let left = self.mul_sparse(ij, &unit_vec(k));
                    let right = self.mul_sparse(&unit_vec(i), self.basis_product(j, k));
                    if left != right {
                        return Err(Error::NotAssociative(
                            self.labels[i].clone(),
                            self.labels[j].clone(),
                            self.labels[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        let Some(u) = &self.unit else { return Ok(()) };
        for i in 0..self.dim {
            let e = unit_vec(i);
            if self.mul_sparse(u, &e) != e || self.mul_sparse(&e, u) != e {
                return Err(Error::BadUnit(self.labels[i].clone()));
            }
        }
        Ok(())
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn unit(&self) -> Option<&SparseVec> {
        self.unit.as_ref()
    }

    pub fn unit_element(&self) -> Option<AlgElement> {
        self.unit.as_ref().map(|u| self.element_sparse(u))
    }

    /// b_i·b_j as a sparse coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        match &self.table {
            ProductTable::Dense(t) => &t[i * self.dim + j],
            ProductTable::Sparse(m) => m.get(&(i as u32, j as u32)).unwrap_or_else(|| empty()),
        }
    }

    /// All nonzero constants as (i, j, k, c), sorted.
    pub fn constants(&self) -> Vec<(usize, usize, usize, Rat)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, v) in self.basis_product(i, j).entries() {
                    out.push((i, j, *k, v.clone()));
                }
            }
        }
        out
    }

    /// Nonzero basis products as ((i, j), product); order unspecified.
    pub fn nonzero_products(&self) -> Vec<((usize, usize), &SparseVec)> {
        match &self.table {
            ProductTable::Dense(t) => t
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(idx, v)| ((idx / self.dim, idx % self.dim), v))
                .collect(),
            ProductTable::Sparse(m) => m.iter().map(|(&(i, j), v)| ((i as usize, j as usize), v)).collect(),
        }
    }

    pub fn mul_sparse(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc: Vec<(usize, Rat)> = Vec::new();
        for (i, x) in a.entries() {
            for (j, y) in b.entries() {
                let p = self.basis_product(*i, *j);
                if p.is_zero() {
                    continue;
                }
                let c = x * y;
                acc.extend(p.entries().iter().map(|(k, v)| (*k, v * &c)));
            }
        }
        SparseVec::from_entries(acc)
    }

    pub fn mul_vec(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        self.mul_sparse(&SparseVec::from_dense(a), &SparseVec::from_dense(b)).to_dense(self.dim)
    }

    pub fn element(&self, coords: Vec<Rat>) -> Result<AlgElement> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: coords.len() });
        }
        Ok(AlgElement { parent: self.id, coords })
    }

    pub fn element_sparse(&self, v: &SparseVec) -> AlgElement {
        AlgElement { parent: self.id, coords: v.to_dense(self.dim) }
    }

    pub fn basis_element(&self, i: usize) -> AlgElement {
        self.element_sparse(&unit_vec(i))
    }

    pub fn basis_element_by_label(&self, label: &str) -> Option<AlgElement> {
        self.label_index(label).map(|i| self.basis_element(i))
    }

    pub fn zero_element(&self) -> AlgElement {
        AlgElement { parent: self.id, coords: vec![Rat::zero(); self.dim] }
    }

    fn check_parent(&self, a: &AlgElement) -> Result<()> {
        if a.parent != self.id {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    pub fn multiply(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        Ok(AlgElement { parent: self.id, coords: self.mul_vec(&a.coords, &b.coords) })
    }

    pub fn add(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        Ok(AlgElement { parent: self.id, coords })
    }

    pub fn scale(&self, c: &Rat, a: &AlgElement) -> AlgElement {
        AlgElement { parent: a.parent, coords: a.coords.iter().map(|x| x * c).collect() }
    }

    /// (R_a, L_a) with R_a(b) = b·a and L_a(b) = a·b.
    pub fn regular_reps(&self, a: &AlgElement) -> Result<(LinOp, LinOp)> {
        self.check_parent(a)?;
        Ok(self.regular_reps_sparse(&SparseVec::from_dense(&a.coords)))
    }

    pub fn regular_reps_sparse(&self, a: &SparseVec) -> (LinOp, LinOp) {
        let mut r = Vec::with_capacity(self.dim);
        let mut l = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let e = unit_vec(i);
            r.push(self.mul_sparse(&e, a));
            l.push(self.mul_sparse(a, &e));
        }
        (LinOp::from_columns(self.dim, r).expect("square"), LinOp::from_columns(self.dim, l).expect("square"))
    }

    pub fn right_mult(&self, i: usize) -> LinOp {
        let cols = (0..self.dim).map(|j| self.basis_product(j, i).clone()).collect();
        LinOp::from_columns(self.dim, cols).expect("square")
    }

    pub fn left_mult(&self, i: usize) -> LinOp {
        let cols = (0..self.dim).map(|j| self.basis_product(i, j).clone()).collect();
        LinOp::from_columns(self.dim, cols).expect("square")
    }

    /// Smallest subspace containing `gens` and closed under left and right
    /// multiplication by the basis.
    pub fn generated_ideal(&self, gens: &[AlgElement]) -> Result<Subspace> {
        for g in gens {
            self.check_parent(g)?;
        }
        Ok(self.ideal_closure(gens.iter().map(|g| SparseVec::from_dense(&g.coords))))
    }

    pub fn ideal_closure(&self, gens: impl IntoIterator<Item = SparseVec>) -> Subspace {
        let mut s = Subspace::zero(self.dim);
        let mut queue: Vec<SparseVec> = Vec::new();
        for g in gens {
            if s.insert_sparse(g.clone()) {
                queue.push(g);
            }
        }
        while let Some(v) = queue.pop() {
            for i in 0..self.dim {
                let e = unit_vec(i);
                for w in [self.mul_sparse(&e, &v), self.mul_sparse(&v, &e)] {
                    if !w.is_zero() && s.insert_sparse(w.clone()) {
                        queue.push(w);
                    }
                }
            }
        }
        s
    }

    /// Smallest subalgebra (not necessarily unital) containing `gens`.
    pub fn subalgebra_closure(&self, gens: impl IntoIterator<Item = SparseVec>) -> Subspace {
        let mut s = Subspace::zero(self.dim);
        for g in gens {
            s.insert_sparse(g);
        }
        loop {
            let basis = s.basis().to_vec();
            let mut grew = false;
            for a in &basis {
                for b in &basis {
                    grew |= s.insert_sparse(self.mul_sparse(a, b));
                }
            }
            if !grew {
                return s;
            }
        }
    }

    /// span{u·v : u ∈ U, v ∈ V}.
    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut s = Subspace::zero(self.dim);
        for a in u.basis() {
            for b in v.basis() {
                s.insert_sparse(self.mul_sparse(a, b));
            }
        }
        s
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        let b = s.basis();
        b.iter().all(|x| b.iter().all(|y| s.contains_sparse(&self.mul_sparse(x, y))))
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        (0..self.dim).all(|i| {
            let e = unit_vec(i);
            s.basis()
                .iter()
                .all(|v| s.contains_sparse(&self.mul_sparse(&e, v)) && s.contains_sparse(&self.mul_sparse(v, &e)))
        })
    }

    /// Joint kernel {x : x·b_i = b_i·x = 0 for all i}.
    pub fn annihilator(&self) -> Subspace {
        let n = self.dim;
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for i in 0..n {
            let (r, l) = (self.right_mult(i), self.left_mult(i));
            for op in [r, l] {
                let m = op.to_matrix();
                rows.extend(m.row_vecs());
            }
        }
        RatMatrix::from_rows(n, rows).expect("square blocks").right_kernel_basis()
    }

    /// Center {x : x·b_i = b_i·x for all i}.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for i in 0..n {
            let m = self.right_mult(i).sub(&self.left_mult(i)).to_matrix();
            rows.extend(m.row_vecs());
        }
        RatMatrix::from_rows(n, rows).expect("square blocks").right_kernel_basis()
    }

    /// span{b_i·b_j}.
    pub fn square(&self) -> Subspace {
        let mut s = Subspace::zero(self.dim);
        for (_, v) in self.nonzero_products() {
            s.insert_sparse(v.clone());
        }
        s
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.annihilator().is_zero()
    }

    pub fn is_idempotent(&self) -> bool {
        self.square().dim() == self.dim
    }

    /// A unit if one exists (stored or found by solving u·b_i = b_i·u = b_i).
    pub fn find_unit(&self) -> Option<SparseVec> {
        if let Some(u) = &self.unit {
            return Some(u.clone());
        }
        let n = self.dim;
        // unknown u: Σ_k u_k b_k b_i = b_i and Σ_k u_k b_i b_k = b_i
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            for side in 0..2 {
                for t in 0..n {
                    let row: Vec<Rat> = (0..n)
                        .map(|k| {
                            let p = if side == 0 { self.basis_product(k, i) } else { self.basis_product(i, k) };
                            p.get(t)
                        })
                        .collect();
                    rows.push(row);
                    rhs.push(if t == i { Rat::one() } else { Rat::zero() });
                }
            }
        }
        if n == 0 {
            return Some(SparseVec::new());
        }
        let m = RatMatrix::from_rows(n, rows).expect("consistent");
        m.solve(&rhs).map(|u| SparseVec::from_dense(&u))
    }

    pub fn has_unit(&self) -> bool {
        self.find_unit().is_some()
    }

    /// Returns a copy whose stored unit is set when one exists.
    pub fn with_detected_unit(&self) -> StructureAlgebra {
        let mut a = self.clone();
        if a.unit.is_none() {
            a.unit = a.find_unit();
            if a.unit.is_some() {
                let sparse: HashMap<(u32, u32), SparseVec> =
                    a.nonzero_products().into_iter().map(|((i, j), v)| ((i as u32, j as u32), v.clone())).collect();
                a.id = fingerprint(&a.labels, &sparse, &a.unit);
            }
        }
        a
    }

    /// Structure constants of the subalgebra spanned by `basis` (given in
    /// A-coordinates) in that basis.
    pub fn subalgebra(&self, basis: &[SparseVec], labels: Vec<String>) -> Result<StructureAlgebra> {
        let span = Subspace::span_sparse(self.dim, basis.iter().cloned())?;
        if span.dim() != basis.len() {
            return Err(Error::Invalid("subalgebra basis is linearly dependent".into()));
        }
        let coords = CoordinateSolver::new(self.dim, basis);
        let mut triples = Vec::new();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let p = self.mul_sparse(a, b);
                let c = coords.solve(&p).ok_or_else(|| Error::NotClosed(format!("{} * {}", labels[i], labels[j])))?;
                for (k, v) in c.entries() {
                    triples.push((i, j, *k, v.clone()));
                }
            }
        }
        let unit = self.unit.as_ref().and_then(|u| coords.solve(u)).map(|u| u.to_dense(basis.len()));
        let a = StructureAlgebra::new_unchecked(labels, triples, unit)?;
        if a.dim <= DENSE_TABLE_MAX_DIM {
            a.check_associative()?;
        }
        Ok(a)
    }

    /// A/I with basis the cosets of the non-pivot coordinates of I.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(StructureAlgebra, Vec<usize>)> {
        if !self.is_ideal(ideal) {
            return Err(Error::Invalid("quotient by a subspace that is not an ideal".into()));
        }
        let keep = ideal.non_pivots();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let project = |v: &SparseVec| -> SparseVec {
            let r = ideal.reduce_sparse(v);
            SparseVec::from_entries(r.entries().iter().map(|(c, x)| (pos[c], x.clone())).collect())
        };
        let mut triples = Vec::new();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                for (k, v) in project(self.basis_product(i, j)).entries() {
                    triples.push((a, b, *k, v.clone()));
                }
            }
        }
        let labels = keep.iter().map(|&i| format!("[{}]", self.labels[i])).collect();
        let unit = self.unit.as_ref().map(|u| project(u).to_dense(keep.len()));
        Ok((StructureAlgebra::new(labels, triples, unit)?, keep))
    }

    /// Human-readable linear combination of basis labels.
    pub fn format_vector(&self, v: &SparseVec) -> String {
        format_combination(v, &self.labels)
    }

    pub fn format_element(&self, a: &AlgElement) -> String {
        self.format_vector(&SparseVec::from_dense(&a.coords))
    }
}

/// Solves for coordinates of vectors in a fixed independent list.
pub(crate) struct CoordinateSolver {
    space: Subspace,
    // rows of the stored echelon basis expressed in the original list
    expr: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl CoordinateSolver {
    pub(crate) fn new(ambient: usize, basis: &[SparseVec]) -> Self {
        let k = basis.len();
        // echelonize [v | e_i] and read off the echelon rows' expressions
        let aug: Vec<SparseVec> = basis
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut e = v.entries().to_vec();
                e.push((ambient + i, Rat::one()));
                SparseVec::from_entries(e)
            })
            .collect();
        let big = Subspace::span_sparse(ambient + k, aug).expect("sizes match");
        let mut rows = Vec::new();
        let mut expr = Vec::new();
        for r in big.basis() {
            if r.leading().unwrap().0 >= ambient {
                continue;
            }
            let (head, tail): (Vec<_>, Vec<_>) = r.entries().iter().cloned().partition(|(c, _)| *c < ambient);
            rows.push(SparseVec::from_entries(head));
            expr.push(SparseVec::from_entries(tail.into_iter().map(|(c, x)| (c - ambient, x)).collect()));
        }
        let space = Subspace::span_sparse(ambient, rows.clone()).expect("sizes match");
        let pivots = rows.iter().map(|r| r.leading().unwrap().0).collect();
        CoordinateSolver { space, expr, pivots }
    }

    pub(crate) fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.space.contains_sparse(v) {
            return None;
        }
        let mut out = SparseVec::new();
        for (p, e) in self.pivots.iter().zip(&self.expr) {
            let c = v.get(*p);
            if !c.is_zero() {
                out = out.axpy(&c, e);
            }
        }
        Some(out)
    }
}

pub fn format_combination(v: &SparseVec, labels: &[String]) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (n, (i, c)) in v.entries().iter().enumerate() {
        let neg = c < &Rat::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if n == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            s.push_str(&crate::linalg::format_rat(&abs));
            s.push('*');
        }
        s.push_str(&labels[*i]);
    }
    s
}

pub(crate) fn unit_vec(i: usize) -> SparseVec {
    SparseVec::from_entries(vec![(i, Rat::one())])
}

fn fingerprint(labels: &[String], table: &HashMap<(u32, u32), SparseVec>, unit: &Option<SparseVec>) -> AlgebraId {
    let mut h = DefaultHasher::new();
    labels.hash(&mut h);
    let mut keys: Vec<_> = table.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        k.hash(&mut h);
        table[&k].hash(&mut h);
    }
    unit.hash(&mut h);
    AlgebraId(h.finish())
}
