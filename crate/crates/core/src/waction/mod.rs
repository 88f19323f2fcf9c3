//! W-algebra structures given by an acting homomorphism Φ: W → M(A),
//! w ↦ (ρ(w), λ(w)), with ρ(w) acting as a·w and λ(w) as w·a.

mod io;
mod presets;

pub use io::{ActionFile, PairFile};
pub use presets::{action_from_subalgebra, full_action, ordinary_action, preset, Preset};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{unit_vec, CoordinateSolver, LinOp, StructureAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix, SparseVec, Subspace};
use crate::multiplier::{multiplier_violations, Multiplier};
use crate::structure::{jacobson_radical, wedderburn_malcev};
use crate::Verdict;

/// Families with a dedicated fast evaluation path in the codimension engine.
/// Only set by trusted constructors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ActionFamily {
    /// E_k = grassmann_unital(k) acting on grassmann_unital(m) by
    /// multiplication on both sides.
    Grassmann { k: usize, m: usize },
}

/// A validated W-action on A.
#[derive(Clone, Debug)]
pub struct ActingHom {
    w: StructureAlgebra,
    a: StructureAlgebra,
    pairs: Vec<Multiplier>,
    kernel_tail: bool,
    family: Option<ActionFamily>,
}

impl PartialEq for ActingHom {
    fn eq(&self, other: &Self) -> bool {
        self.w == other.w && self.a == other.a && self.pairs == other.pairs && self.kernel_tail == other.kernel_tail
    }
}

/// Validates pairs[i] = (ρ(w_i), λ(w_i)). Errors are reported in priority
/// order: multiplier, homomorphism, permutability, unit.
pub fn make_action(
    w: StructureAlgebra,
    a: StructureAlgebra,
    pairs: Vec<Multiplier>,
    kernel_tail: bool,
) -> Result<ActingHom> {
    if pairs.len() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), found: pairs.len() });
    }
    for (i, p) in pairs.iter().enumerate() {
        if p.dim() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: p.dim() });
        }
        if let Some(v) = multiplier_violations(&a, &p.r, &p.l)?.first() {
            return Err(Error::NotMultiplier { index: i, witness: v.describe(&a) });
        }
    }
    let phi = |v: &SparseVec| -> Multiplier {
        v.entries().iter().fold(Multiplier::zero(a.dim()), |acc, (k, x)| acc.axpy(x, &pairs[*k]))
    };
    for i in 0..w.dim() {
        for j in 0..w.dim() {
            if phi(w.basis_product(i, j)) != pairs[i].product(&pairs[j]) {
                return Err(Error::NotHomomorphism(i, j));
            }
        }
    }
    for i in 0..w.dim() {
        for j in 0..w.dim() {
            if pairs[j].r.compose(&pairs[i].l) != pairs[i].l.compose(&pairs[j].r) {
                return Err(Error::NotPermutable(i, j));
            }
        }
    }
    if let Some(u) = w.unit() {
        if phi(u) != Multiplier::identity(a.dim()) {
            return Err(Error::UnitMismatch);
        }
    }
    Ok(ActingHom { w, a, pairs, kernel_tail, family: None })
}

/// Φ(W) presented by a basis of images, plus the coefficient alphabet used by
/// the codimension engine (identity pair first).
#[derive(Clone, Debug)]
pub struct EffectiveAction {
    /// W indices whose images form a basis of Φ(W), chosen greedily.
    pub effective_basis: Vec<usize>,
    /// Φ(W) by structure constants in that basis.
    pub image_algebra: StructureAlgebra,
    /// Coordinates of Φ(w_i) in the image basis, per W basis element.
    pub projection: Vec<SparseVec>,
    /// Coefficient alphabet: the identity pair followed by independent images.
    pub alphabet: Vec<Multiplier>,
    /// W index for each alphabet letter (None for an adjoined identity).
    pub alphabet_source: Vec<Option<usize>>,
    /// Coordinates of Φ(w_i) in the alphabet, per W basis element.
    pub alphabet_coords: Vec<SparseVec>,
    /// Product of alphabet letters re-expanded in the alphabet.
    pub alphabet_products: Vec<Vec<SparseVec>>,
}

impl EffectiveAction {
    pub fn dim(&self) -> usize {
        self.effective_basis.len()
    }

    /// Number of alphabet letters (s in the monomial count n!·s^{n+1}).
    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }
}

impl ActingHom {
    pub fn w(&self) -> &StructureAlgebra {
        &self.w
    }

    pub fn a(&self) -> &StructureAlgebra {
        &self.a
    }

    pub fn pairs(&self) -> &[Multiplier] {
        &self.pairs
    }

    pub fn rho(&self, i: usize) -> &LinOp {
        &self.pairs[i].r
    }

    pub fn lambda(&self, i: usize) -> &LinOp {
        &self.pairs[i].l
    }

    pub fn kernel_tail(&self) -> bool {
        self.kernel_tail
    }

    pub fn family(&self) -> Option<&ActionFamily> {
        self.family.as_ref()
    }

    pub(crate) fn with_family(mut self, f: ActionFamily) -> Self {
        self.family = Some(f);
        self
    }

    /// Φ applied to a W-coordinate vector.
    pub fn phi(&self, v: &SparseVec) -> Multiplier {
        v.entries().iter().fold(Multiplier::zero(self.a.dim()), |acc, (k, x)| acc.axpy(x, &self.pairs[*k]))
    }

    /// W-coordinates of w_0 = 1 is the expected convention; true when the
    /// first W basis element is the unit of W.
    pub fn w0_is_unit(&self) -> bool {
        self.w.dim() > 0 && self.w.unit() == Some(&unit_vec(0))
    }

    pub fn effective_image(&self) -> EffectiveAction {
        let n = self.a.dim();
        let flat: Vec<SparseVec> = self.pairs.iter().map(|p| p.to_flat()).collect();
        let amb = 2 * n * n;
        let mut span = Subspace::zero(amb);
        let mut basis_idx = Vec::new();
        for (i, f) in flat.iter().enumerate() {
            if span.insert_sparse(f.clone()) {
                basis_idx.push(i);
            }
        }
        let basis_flat: Vec<SparseVec> = basis_idx.iter().map(|&i| flat[i].clone()).collect();
        let solver = CoordinateSolver::new(amb, &basis_flat);
        let projection: Vec<SparseVec> = flat.iter().map(|f| solver.solve(f).expect("in span")).collect();
        let labels: Vec<String> = basis_idx.iter().map(|&i| self.w.labels()[i].clone()).collect();
        let mut triples = Vec::new();
        for (p, &i) in basis_idx.iter().enumerate() {
            for (q, &j) in basis_idx.iter().enumerate() {
                let prod = self.pairs[i].product(&self.pairs[j]).to_flat();
                for (k, x) in solver.solve(&prod).expect("image is closed").entries() {
                    triples.push((p, q, *k, x.clone()));
                }
            }
        }
        let id = Multiplier::identity(n);
        let unit = solver.solve(&id.to_flat()).map(|u| u.to_dense(basis_idx.len()));
        let image_algebra =
            StructureAlgebra::new(labels, triples, unit).expect("image of a homomorphism is an associative algebra");

        // alphabet: identity first, then greedy independent images
        let mut alpha_span = Subspace::zero(amb);
        alpha_span.insert_sparse(id.to_flat());
        let mut alphabet = vec![id.clone()];
        let mut alphabet_source = vec![None];
        if let Some(i0) = (0..self.pairs.len()).find(|&i| self.pairs[i] == id) {
            alphabet_source[0] = Some(i0);
        }
        for (i, f) in flat.iter().enumerate() {
            if alpha_span.insert_sparse(f.clone()) {
                alphabet.push(self.pairs[i].clone());
                alphabet_source.push(Some(i));
            }
        }
        let alpha_flat: Vec<SparseVec> = alphabet.iter().map(|m| m.to_flat()).collect();
        let asolver = CoordinateSolver::new(amb, &alpha_flat);
        let alphabet_coords = flat.iter().map(|f| asolver.solve(f).expect("in span")).collect();
        let alphabet_products = alphabet
            .iter()
            .map(|x| {
                alphabet
                    .iter()
                    .map(|y| asolver.solve(&x.product(y).to_flat()).expect("alphabet span is closed"))
                    .collect()
            })
            .collect();
        EffectiveAction {
            effective_basis: basis_idx,
            image_algebra,
            projection,
            alphabet,
            alphabet_source,
            alphabet_coords,
            alphabet_products,
        }
    }

    /// Closure of `gens` under multiplication by A and under all ρ(w), λ(w).
    pub fn w_ideal_generated(&self, gens: &[SparseVec]) -> Subspace {
        let a = &self.a;
        let mut ops: Vec<LinOp> = Vec::new();
        for i in 0..a.dim() {
            ops.push(a.left_mult(i));
            ops.push(a.right_mult(i));
        }
        for p in &self.pairs {
            ops.push(p.r.clone());
            ops.push(p.l.clone());
        }
        invariant_closure(a.dim(), gens.iter().cloned(), &ops)
    }

    /// ρ(w)(J) ⊆ J and λ(w)(J) ⊆ J for every W basis element.
    pub fn radical_invariance(&self) -> Result<Verdict> {
        let j = jacobson_radical(&self.a)?;
        for (i, p) in self.pairs.iter().enumerate() {
            for v in j.basis() {
                if !j.contains_sparse(&p.r.apply_sparse(v)) || !j.contains_sparse(&p.l.apply_sparse(v)) {
                    return Ok(Verdict::fails(format!("w{i} moves the radical")));
                }
            }
        }
        Ok(Verdict::holds())
    }

    /// ρ(w)(B_i), λ(w)(B_i) ⊆ B_i + J for every block (A split).
    pub fn block_invariance(&self) -> Result<Verdict> {
        let wm = wedderburn_malcev(&self.a)?;
        for (b, blk) in wm.blocks.iter().enumerate() {
            let target = blk.sum(&wm.radical)?;
            for (i, p) in self.pairs.iter().enumerate() {
                for v in blk.basis() {
                    if !target.contains_sparse(&p.r.apply_sparse(v)) || !target.contains_sparse(&p.l.apply_sparse(v)) {
                        return Ok(Verdict::fails(format!("w{i} moves block {} outside B + J", b + 1)));
                    }
                }
            }
        }
        Ok(Verdict::holds())
    }

    /// Extends the action to a larger W whose basis starts with this W's
    /// basis, letting the extra basis elements act as zero.
    pub fn extend_by_zero(&self, w: &StructureAlgebra) -> Result<ActingHom> {
        let k = self.w.dim();
        if w.dim() < k || w.labels()[..k] != self.w.labels()[..] {
            return Err(Error::BasisMismatch(format!(
                "W basis {:?} is not a prefix of {:?}",
                self.w.labels(),
                w.labels()
            )));
        }
        let mut pairs = self.pairs.clone();
        pairs.resize(w.dim(), Multiplier::zero(self.a.dim()));
        make_action(w.clone(), self.a.clone(), pairs, self.kernel_tail)
            .map_err(|e| Error::BasisMismatch(format!("zero extension is not an action: {e}")))
    }
}

/// Brings two actions to a common W when one W basis extends the other.
pub fn align_actions(h1: &ActingHom, h2: &ActingHom) -> Result<(ActingHom, ActingHom)> {
    if h1.w == h2.w {
        return Ok((h1.clone(), h2.clone()));
    }
    if h1.w.dim() >= h2.w.dim() {
        Ok((h1.clone(), h2.extend_by_zero(&h1.w)?))
    } else {
        Ok((h1.extend_by_zero(&h2.w)?, h2.clone()))
    }
}

fn invariant_closure(n: usize, gens: impl Iterator<Item = SparseVec>, ops: &[LinOp]) -> Subspace {
    let mut s = Subspace::zero(n);
    let mut queue = Vec::new();
    for g in gens {
        if s.insert_sparse(g.clone()) {
            queue.push(g);
        }
    }
    while let Some(v) = queue.pop() {
        for op in ops {
            let w = op.apply_sparse(&v);
            if !w.is_zero() && s.insert_sparse(w.clone()) {
                queue.push(w);
            }
        }
    }
    s
}

/// Φ_ss = π∘Φ together with the hypothesis check J̄ ⊆ μ(J(A)).
#[derive(Clone, Debug)]
pub struct SemisimplePart {
    pub action: ActingHom,
    pub image_dim: usize,
    pub radical_dim: usize,
    pub hypothesis_holds: bool,
}

pub fn semisimple_part_action(h: &ActingHom) -> Result<SemisimplePart> {
    let eff = h.effective_image();
    let img = &eff.image_algebra;
    let wm = wedderburn_malcev(img)?;
    let n = h.a.dim();
    // image basis as operator pairs
    let img_pairs: Vec<Multiplier> = eff.effective_basis.iter().map(|&i| h.pairs[i].clone()).collect();
    let as_pair = |v: &SparseVec| -> Multiplier {
        v.entries().iter().fold(Multiplier::zero(n), |acc, (k, x)| acc.axpy(x, &img_pairs[*k]))
    };
    // projection onto the complement along J̄, in image coordinates
    let mut basis: Vec<SparseVec> = wm.complement.basis().to_vec();
    let c_dim = basis.len();
    basis.extend(wm.radical.basis().iter().cloned());
    let solver = CoordinateSolver::new(img.dim(), &basis);
    let project = |v: &SparseVec| -> SparseVec {
        let c = solver.solve(v).expect("complement and radical span the image");
        c.entries().iter().filter(|(k, _)| *k < c_dim).fold(SparseVec::new(), |acc, (k, x)| acc.axpy(x, &basis[*k]))
    };
    let pairs: Vec<Multiplier> = eff.projection.iter().map(|v| as_pair(&project(v))).collect();
    let action = make_action(h.w.clone(), h.a.clone(), pairs, h.kernel_tail)?;
    // J̄ ⊆ μ(J(A))
    let ja = jacobson_radical(&h.a)?;
    let inner_j = Subspace::span_sparse(2 * n * n, ja.basis().iter().map(|v| Multiplier::inner(&h.a, v).to_flat()))?;
    let hypothesis_holds = wm.radical.basis().iter().all(|v| inner_j.contains_sparse(&as_pair(v).to_flat()));
    let image_dim = action.effective_image().dim();
    Ok(SemisimplePart { action, image_dim, radical_dim: wm.radical.dim(), hypothesis_holds })
}

/// W̄⋉A on W̄ ⊕ A with (w̄1, a1)(w̄2, a2) = (w̄1w̄2, w̄1a2 + a1w̄2 + a1a2).
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub algebra: StructureAlgebra,
    pub w_dim: usize,
    pub a_dim: usize,
}

impl SemidirectProduct {
    pub fn i1(&self, v: &SparseVec) -> SparseVec {
        v.clone()
    }

    pub fn i2(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_entries(v.entries().iter().map(|(i, x)| (i + self.w_dim, x.clone())).collect())
    }

    pub fn pi1(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_entries(v.entries().iter().filter(|(i, _)| *i < self.w_dim).cloned().collect())
    }

    pub fn a_part(&self) -> Subspace {
        Subspace::span_sparse(self.w_dim + self.a_dim, (0..self.a_dim).map(|i| unit_vec(i + self.w_dim)))
            .expect("sizes match")
    }
}

pub fn semidirect_product(h: &ActingHom) -> Result<SemidirectProduct> {
    let eff = h.effective_image();
    let img = &eff.image_algebra;
    let (s, n) = (img.dim(), h.a.dim());
    let img_pairs: Vec<&Multiplier> = eff.effective_basis.iter().map(|&i| &h.pairs[i]).collect();
    let mut labels: Vec<String> = img.labels().iter().map(|l| format!("W:{l}")).collect();
    labels.extend(h.a.labels().iter().map(|l| format!("A:{l}")));
    let mut triples = Vec::new();
    let shift = |v: &SparseVec, off: usize| -> Vec<(usize, Rat)> {
        v.entries().iter().map(|(k, x)| (k + off, x.clone())).collect()
    };
    for i in 0..s {
        for j in 0..s {
            for (k, x) in shift(img.basis_product(i, j), 0) {
                triples.push((i, j, k, x));
            }
        }
        for j in 0..n {
            for (k, x) in shift(img_pairs[i].l.column(j), s) {
                triples.push((i, s + j, k, x));
            }
            for (k, x) in shift(img_pairs[i].r.column(j), s) {
                triples.push((s + j, i, k, x));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for (k, x) in shift(h.a.basis_product(i, j), s) {
                triples.push((s + i, s + j, k, x));
            }
        }
    }
    let unit = img.unit().map(|u| {
        let mut v = u.to_dense(s);
        v.resize(s + n, Rat::zero());
        v
    });
    let algebra = StructureAlgebra::new(labels, triples, unit)?;
    Ok(SemidirectProduct { algebra, w_dim: s, a_dim: n })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SimplicityMethod {
    /// A² = 0.
    ZeroSquare,
    /// A split: W-simple iff simple.
    SplitCriterion,
    /// Decided by the invariant-subspace certificate.
    Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WSimplicity {
    pub w_simple: bool,
    pub method: SimplicityMethod,
    /// Outcome of the invariant-subspace certificate (experimental): Some(true)
    /// if irreducibility was certified, Some(false) if a proper W-ideal was
    /// found, None if inconclusive.
    pub certificate: Option<bool>,
    pub witness: Option<String>,
}

/// W-simplicity: A² ≠ 0 and no proper nonzero W-ideal.
pub fn is_w_simple(h: &ActingHom) -> Result<WSimplicity> {
    let a = &h.a;
    if a.square().is_zero() {
        return Ok(WSimplicity {
            w_simple: false,
            method: SimplicityMethod::ZeroSquare,
            certificate: Some(false),
            witness: Some("A^2 = 0".into()),
        });
    }
    let (certificate, witness) = irreducibility_certificate(h);
    let split = match wedderburn_malcev(a) {
        Ok(wm) => Some(wm.radical.is_zero() && wm.blocks.len() == 1),
        Err(Error::NotSplit(_)) => None,
        Err(e) => return Err(e),
    };
    match split {
        Some(simple) => {
            Ok(WSimplicity { w_simple: simple, method: SimplicityMethod::SplitCriterion, certificate, witness })
        }
        None => match certificate {
            Some(c) => Ok(WSimplicity { w_simple: c, method: SimplicityMethod::Certificate, certificate, witness }),
            None => Err(Error::NotSplit("W-simplicity undecided for a non-split algebra".into())),
        },
    }
}

/// Invariant-subspace test for the operator algebra U generated by the
/// regular representations and the action. Returns (verdict, witness).
fn irreducibility_certificate(h: &ActingHom) -> (Option<bool>, Option<String>) {
    let a = &h.a;
    let n = a.dim();
    let mut gens: Vec<LinOp> = vec![LinOp::identity(n)];
    for i in 0..n {
        gens.push(a.left_mult(i));
        gens.push(a.right_mult(i));
    }
    for p in &h.pairs {
        gens.push(p.r.clone());
        gens.push(p.l.clone());
    }
    // (a) U·b_i must be all of A
    for i in 0..n {
        let orbit = invariant_closure(n, std::iter::once(unit_vec(i)), &gens);
        if orbit.dim() < n {
            return (
                Some(false),
                Some(format!("W-ideal generated by {} has dimension {}", a.labels()[i], orbit.dim())),
            );
        }
    }
    // span of U as operators
    let mut u_span = Subspace::zero(n * n);
    let mut elems: Vec<LinOp> = Vec::new();
    let mut queue: Vec<LinOp> = Vec::new();
    for g in &gens {
        if u_span.insert_sparse(g.to_flat()) {
            elems.push(g.clone());
            queue.push(g.clone());
        }
    }
    while let Some(x) = queue.pop() {
        for g in &gens {
            let y = x.compose(g);
            if u_span.insert_sparse(y.to_flat()) {
                elems.push(y.clone());
                queue.push(y);
            }
        }
    }
    if u_span.dim() == n * n {
        return (Some(true), None);
    }
    // Norton test with θ = X − r·id having a one-dimensional kernel
    let transposed: Vec<LinOp> = gens.iter().map(|g| LinOp::from_matrix(&g.to_matrix().transpose()).unwrap()).collect();
    let mut candidates: Vec<LinOp> = u_span.basis().iter().map(|v| LinOp::from_flat(n, v)).collect();
    let base = candidates.clone();
    for i in 0..base.len() {
        for j in i + 1..base.len().min(i + 4) {
            candidates.push(base[i].add(&base[j]));
        }
    }
    for x in candidates {
        for r in char_poly_rational_roots(&x) {
            let theta = x.sub(&LinOp::identity(n).scale(&r));
            let m = theta.to_matrix();
            let ker = m.right_kernel_basis();
            if ker.dim() != 1 {
                continue;
            }
            let v = &ker.basis()[0];
            if invariant_closure(n, std::iter::once(v.clone()), &gens).dim() < n {
                return (Some(false), Some("cyclic submodule of a kernel vector is proper".into()));
            }
            let kt = m.transpose().right_kernel_basis();
            let vt = &kt.basis()[0];
            if invariant_closure(n, std::iter::once(vt.clone()), &transposed).dim() < n {
                return (Some(false), Some("dual cyclic submodule is proper".into()));
            }
            return (Some(true), None);
        }
    }
    (None, None)
}

/// Characteristic polynomial by Faddeev–LeVerrier; returns its rational roots.
fn char_poly_rational_roots(x: &LinOp) -> Vec<Rat> {
    let n = x.dim();
    let a = x.to_matrix();
    // c_n = 1, M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = −tr(A M_k)/k
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m).expect("square");
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        let am = a.mul(&next).expect("square");
        let tr = (0..n).fold(Rat::zero(), |acc, i| acc + am.get(i, i));
        coeffs[n - k] = -tr / Rat::from_integer((k as i64).into());
        m = next;
    }
    crate::structure::rational_roots(&coeffs).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::linalg::rat;

    #[test]
    fn presets_validate() {
        for name in ["ut2F", "ut2D", "ut2C", "ut2full", "grassmann_Ek(1,3)", "grassmann_full(2)"] {
            let h = preset(name).unwrap();
            assert!(h.radical_invariance().unwrap().holds, "{name}");
            assert!(h.block_invariance().unwrap().holds, "{name}");
        }
    }

    #[test]
    fn permutability_violation() {
        let z = builtin("zero_mult:2").unwrap();
        let f = builtin("ut:1").unwrap();
        // on A with A² = 0 every pair of operators is a multiplier
        let r = LinOp::from_matrix(&RatMatrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        let l = LinOp::from_matrix(&RatMatrix::from_i64(&[&[1, 0], &[0, 0]])).unwrap();
        let w = StructureAlgebra::new(vec!["u".into()], vec![], None).unwrap();
        let e = make_action(w, z.clone(), vec![Multiplier::new(r, l).unwrap()], false);
        assert!(matches!(e, Err(Error::NotHomomorphism(0, 0)) | Err(Error::NotPermutable(0, 0))));
        // a nilpotent pair that is a homomorphism but not permutable
        let r = LinOp::from_matrix(&RatMatrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        let l = LinOp::from_matrix(&RatMatrix::from_i64(&[&[0, 0], &[1, 0]])).unwrap();
        let w = builtin("zero_mult:1").unwrap();
        let e = make_action(w, z, vec![Multiplier::new(r, l).unwrap()], false);
        assert_eq!(e.unwrap_err(), Error::NotPermutable(0, 0));
        let _ = f;
    }

    #[test]
    fn unit_mismatch_and_non_multiplier() {
        let a = builtin("ut:2").unwrap();
        let f = builtin("ut:1").unwrap();
        let e = make_action(f.clone(), a.clone(), vec![Multiplier::zero(3)], false);
        assert_eq!(e.unwrap_err(), Error::UnitMismatch);
        let bad = Multiplier::new(LinOp::identity(3), a.left_mult(2)).unwrap();
        let e = make_action(f, a, vec![bad], false);
        assert!(matches!(e, Err(Error::NotMultiplier { index: 0, .. })));
    }

    #[test]
    fn effective_images() {
        assert_eq!(preset("ut2D").unwrap().effective_image().dim(), 2);
        assert_eq!(preset("ut2F").unwrap().effective_image().dim(), 1);
        assert_eq!(preset("grassmann_Ek(1,4)").unwrap().effective_image().dim(), 2);
        let eff = preset("ut2full").unwrap().effective_image();
        assert_eq!(eff.alphabet_size(), 3);
        assert_eq!(eff.alphabet_source, vec![Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn semisimple_parts() {
        let c = semisimple_part_action(&preset("ut2C").unwrap()).unwrap();
        assert_eq!(c.image_dim, 1);
        assert!(c.hypothesis_holds);
        let d = semisimple_part_action(&preset("ut2D").unwrap()).unwrap();
        assert_eq!(d.image_dim, 2);
        assert_eq!(d.radical_dim, 0);
        assert_eq!(d.action, preset("ut2D").unwrap());
        let full = semisimple_part_action(&preset("ut2full").unwrap()).unwrap();
        assert_eq!(full.image_dim, 2);
        let proj = &full.action.pairs()[1];
        let a = builtin("ut:2").unwrap();
        assert_eq!(*proj, Multiplier::inner(&a, &unit_vec(1)));
    }

    #[test]
    fn semidirect_products() {
        let p = semidirect_product(&preset("ut2D").unwrap()).unwrap();
        assert_eq!(p.algebra.dim(), 5);
        assert_eq!(p.algebra.unit(), Some(&unit_vec(0)));
        assert!(p.algebra.is_ideal(&p.a_part()));
        let v = SparseVec::from_entries(vec![(1, rat(3))]);
        assert_eq!(p.pi1(&p.i1(&v)), v);
        let o = semidirect_product(&ordinary_action(builtin("ut:2").unwrap()).unwrap()).unwrap();
        assert_eq!(o.algebra.dim(), 4);
        let z = semidirect_product(&ordinary_action(builtin("zero_mult:1").unwrap()).unwrap());
        // the identity pair on a zero algebra is an action of F
        let z = z.unwrap();
        assert_eq!(z.algebra.dim(), 2);
        assert_eq!(z.algebra.unit(), Some(&unit_vec(0)));
    }

    #[test]
    fn w_ideals() {
        let h = preset("ut2D").unwrap();
        assert_eq!(h.w_ideal_generated(&[unit_vec(2)]).dim(), 1);
        let i = h.w_ideal_generated(&[unit_vec(0)]);
        assert_eq!(i, Subspace::span_sparse(3, vec![unit_vec(0), unit_vec(2)]).unwrap());
        let m = full_action(builtin("mat:2").unwrap()).unwrap();
        assert_eq!(m.w_ideal_generated(&[unit_vec(1)]).dim(), 4);
    }

    #[test]
    fn w_simplicity() {
        let m = is_w_simple(&full_action(builtin("mat:2").unwrap()).unwrap()).unwrap();
        assert!(m.w_simple);
        assert_eq!(m.certificate, Some(true));
        for name in ["ut2F", "ut2D", "ut2C", "ut2full"] {
            let r = is_w_simple(&preset(name).unwrap()).unwrap();
            assert!(!r.w_simple && r.certificate == Some(false), "{name}");
        }
        let z = is_w_simple(&ordinary_action(builtin("zero_mult:2").unwrap()).unwrap()).unwrap();
        assert!(!z.w_simple);
        // M_2 with only scalars acting: still simple, certificate from U = End(A)
        let o = is_w_simple(&ordinary_action(builtin("mat:2").unwrap()).unwrap()).unwrap();
        assert!(o.w_simple && o.certificate == Some(true));
    }

    #[test]
    fn alignment() {
        let f = preset("ut2F").unwrap();
        let d = preset("ut2D").unwrap();
        let (x, y) = align_actions(&f, &d).unwrap();
        assert_eq!(x.w(), y.w());
        assert!(x.pairs()[1].is_zero());
        let g = preset("grassmann_Ek(1,2)").unwrap();
        assert!(matches!(align_actions(&g, &d), Err(Error::BasisMismatch(_))));
    }
}
