//! Jacobson radical, Wedderburn–Malcev decomposition, simple blocks and the
//! PI-exponent of finite-dimensional algebras over Q.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{unit_vec, StructureAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{common_denominator, Rat, RatMatrix, SparseVec, Subspace};
use crate::multiplier::MultiplierAlgebra;
use crate::Verdict;

/// A = B ⊕ J with B = B_1 ⊕ ⋯ ⊕ B_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WMDecomposition {
    pub radical: Subspace,
    pub complement: Subspace,
    pub blocks: Vec<Subspace>,
    /// Central idempotent of B generating each block.
    pub block_units: Vec<SparseVec>,
}

impl WMDecomposition {
    /// n with dim B_i = n², or None if the dimension is not a square.
    pub fn block_degrees(&self) -> Vec<Option<usize>> {
        self.blocks
            .iter()
            .map(|b| {
                let d = b.dim();
                let n = (d as f64).sqrt().round() as usize;
                (n * n == d).then_some(n)
            })
            .collect()
    }
}

/// Gram matrix of the trace form tr(L_{b_i b_j}) of an algebra.
fn trace_form(a: &StructureAlgebra) -> RatMatrix {
    let n = a.dim();
    let traces: Vec<Rat> = (0..n).map(|k| a.left_mult(k).trace()).collect();
    let mut g = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, a.basis_product(i, j).dot(&traces));
        }
    }
    g
}

/// A with an adjoined unit as basis element 0 (labelled "1"); the original
/// basis follows with indices shifted by one.
fn adjoin_unit(a: &StructureAlgebra) -> Result<StructureAlgebra> {
    let n = a.dim();
    let mut labels = vec!["1".to_string()];
    labels.extend(a.labels().iter().cloned());
    let mut triples = vec![(0, 0, 0, Rat::one())];
    for i in 0..n {
        triples.push((0, i + 1, i + 1, Rat::one()));
        triples.push((i + 1, 0, i + 1, Rat::one()));
    }
    for ((i, j), v) in a.nonzero_products() {
        for (k, x) in v.entries() {
            triples.push((i + 1, j + 1, k + 1, x.clone()));
        }
    }
    let mut unit = vec![Rat::zero(); n + 1];
    unit[0] = Rat::one();
    StructureAlgebra::new_unchecked(labels, triples, Some(unit))
}

/// Powers J, J², … until zero; errors if J is not nilpotent.
pub fn radical_powers(a: &StructureAlgebra, j: &Subspace) -> Result<Vec<Subspace>> {
    let mut powers = vec![j.clone()];
    while !powers.last().unwrap().is_zero() {
        if powers.len() > a.dim() + 1 {
            return Err(Error::Internal("radical is not nilpotent".into()));
        }
        let next = a.subspace_product(powers.last().unwrap(), j);
        if next == *powers.last().unwrap() {
            return Err(Error::Internal("radical is not nilpotent".into()));
        }
        powers.push(next);
    }
    Ok(powers)
}

/// J(A) via the trace form: x ∈ J(A⁺) iff tr(L_{xy}) = 0 for all y in A⁺.
pub fn jacobson_radical(a: &StructureAlgebra) -> Result<Subspace> {
    let n = a.dim();
    let j = if a.has_unit() {
        trace_form(a).right_kernel_basis()
    } else {
        let plus = adjoin_unit(a)?;
        let k = trace_form(&plus).right_kernel_basis();
        let inside_a = Subspace::span_sparse(n + 1, (1..=n).map(unit_vec))?;
        let k = k.intersection(&inside_a)?;
        let shifted = k
            .basis()
            .iter()
            .map(|v| SparseVec::from_entries(v.entries().iter().map(|(i, x)| (i - 1, x.clone())).collect()));
        Subspace::span_sparse(n, shifted)?
    };
    if !a.is_ideal(&j) {
        return Err(Error::Internal("computed radical is not an ideal".into()));
    }
    radical_powers(a, &j)?;
    Ok(j)
}

/// Wedderburn–Malcev decomposition. The complement is built by lifting a
/// linear section of A → A/J one radical layer at a time, solving
/// σ(a)φ(b) + φ(a)σ(b) − φ(ab) ≡ σ(a)σ(b) − σ(ab) mod J^{i+1} for φ with
/// values in J^i and replacing σ by σ − φ.
pub fn wedderburn_malcev(a: &StructureAlgebra) -> Result<WMDecomposition> {
    let n = a.dim();
    let j = jacobson_radical(a)?;
    let powers = radical_powers(a, &j)?;
    let keep = j.non_pivots();
    let m = keep.len();
    // quotient product: b̄_p b̄_q = Σ_r c̄_pqr b̄_r
    let project = |v: &SparseVec| -> SparseVec {
        let r = j.reduce_sparse(v);
        SparseVec::from_entries(
            r.entries()
                .iter()
                .map(|(c, x)| (keep.iter().position(|k| k == c).expect("non-pivot"), x.clone()))
                .collect(),
        )
    };
    let qprod: Vec<Vec<SparseVec>> =
        keep.iter().map(|&p| keep.iter().map(|&q| project(a.basis_product(p, q))).collect()).collect();
    let mut sigma: Vec<SparseVec> = keep.iter().map(|&p| unit_vec(p)).collect();
    let apply = |s: &[SparseVec], v: &SparseVec| -> SparseVec {
        v.entries().iter().fold(SparseVec::new(), |acc, (k, x)| acc.axpy(x, &s[*k]))
    };
    for i in 1..powers.len() {
        let ji = &powers[i - 1];
        let next = &powers[i];
        let defect = |s: &[SparseVec], p: usize, q: usize| -> SparseVec {
            a.mul_sparse(&s[p], &s[q]).axpy(&-Rat::one(), &apply(s, &qprod[p][q]))
        };
        let all_zero = (0..m).all(|p| (0..m).all(|q| next.contains_sparse(&defect(&sigma, p, q))));
        if all_zero {
            continue;
        }
        // unknown y[k][t]: φ(b̄_k) = Σ_t y[k][t] u_t with u_t the basis of J^i
        let u = ji.basis();
        let d = u.len();
        let coord_rows = next.non_pivots();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        for p in 0..m {
            for q in 0..m {
                // columns: contribution of y[k][t] to the (p, q) equation
                let mut cols: Vec<SparseVec> = vec![SparseVec::new(); m * d];
                for (t, ut) in u.iter().enumerate() {
                    let left = next.reduce_sparse(&a.mul_sparse(&sigma[p], ut));
                    let right = next.reduce_sparse(&a.mul_sparse(ut, &sigma[q]));
                    cols[q * d + t] = cols[q * d + t].axpy(&Rat::one(), &left);
                    cols[p * d + t] = cols[p * d + t].axpy(&Rat::one(), &right);
                    for (k, x) in qprod[p][q].entries() {
                        let v = next.reduce_sparse(&ut.scale(x));
                        cols[k * d + t] = cols[k * d + t].axpy(&-Rat::one(), &v);
                    }
                }
                let target = next.reduce_sparse(&defect(&sigma, p, q));
                for &c in &coord_rows {
                    rows.push(cols.iter().map(|col| col.get(c)).collect());
                    rhs.push(target.get(c));
                }
            }
        }
        let mat = RatMatrix::from_rows(m * d, rows)?;
        let y = mat
            .solve(&rhs)
            .ok_or_else(|| Error::Internal("Wedderburn-Malcev lifting system is inconsistent".into()))?;
        for k in 0..m {
            let mut phi = SparseVec::new();
            for (t, ut) in u.iter().enumerate() {
                phi = phi.axpy(&y[k * d + t], ut);
            }
            sigma[k] = sigma[k].axpy(&-Rat::one(), &phi);
        }
    }
    for p in 0..m {
        for q in 0..m {
            if a.mul_sparse(&sigma[p], &sigma[q]) != apply(&sigma, &qprod[p][q]) {
                return Err(Error::Internal("lifted section is not multiplicative".into()));
            }
        }
    }
    let complement = Subspace::span_sparse(n, sigma.iter().cloned())?;
    if complement.dim() + j.dim() != n || !a.is_subalgebra(&complement) {
        return Err(Error::Internal("complement does not split A".into()));
    }
    let (blocks, block_units) = split_blocks(a, &sigma)?;
    Ok(WMDecomposition { radical: j, complement, blocks, block_units })
}

/// Splits a semisimple subalgebra (spanned by `basis`) into simple ideals.
fn split_blocks(a: &StructureAlgebra, basis: &[SparseVec]) -> Result<(Vec<Subspace>, Vec<SparseVec>)> {
    let n = a.dim();
    if basis.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let labels = (0..basis.len()).map(|i| format!("s{i}")).collect();
    let b = a.subalgebra(basis, labels)?;
    let to_a = |v: &SparseVec| -> SparseVec {
        v.entries().iter().fold(SparseVec::new(), |acc, (k, x)| acc.axpy(x, &basis[*k]))
    };
    let unit = b.find_unit().ok_or_else(|| Error::Internal("semisimple part has no unit".into()))?;
    let center = b.center();
    let mut done: Vec<SparseVec> = Vec::new();
    let mut todo = vec![unit];
    while let Some(e) = todo.pop() {
        let ez = center.map(b.dim(), |z| b.mul_sparse(&e, z));
        if ez.dim() <= 1 {
            done.push(e);
            continue;
        }
        let mut split = None;
        for z in ez.basis() {
            let f = min_poly(&b, &e, z);
            if f.len() <= 2 {
                continue;
            }
            let roots = rational_roots(&f)?;
            if roots.is_empty() {
                return Err(Error::NotSplit(format!(
                    "central element with minimal polynomial of degree {} and no rational root",
                    f.len() - 1
                )));
            }
            split = Some(lagrange_idempotents(&b, &e, z, &f, &roots));
            break;
        }
        match split {
            Some(parts) => todo.extend(parts),
            None => return Err(Error::Internal("center failed to split".into())),
        }
    }
    // deterministic order: by the leading coordinate of each block in A
    let mut out: Vec<(Subspace, SparseVec)> = done
        .into_iter()
        .map(|e| {
            let block = Subspace::span_sparse(n, (0..b.dim()).map(|k| to_a(&b.mul_sparse(&e, &unit_vec(k)))))
                .expect("sizes match");
            (block, to_a(&e))
        })
        .collect();
    out.sort_by_key(|(s, _)| s.pivots());
    for (s, _) in &out {
        let block_basis: Vec<SparseVec> = s.basis().to_vec();
        let labels = (0..block_basis.len()).map(|i| format!("c{i}")).collect();
        let blk = a.subalgebra(&block_basis, labels)?;
        if blk.center().dim() != 1 {
            return Err(Error::NotSplit("simple block with center larger than Q".into()));
        }
    }
    Ok(out.into_iter().unzip())
}

/// Minimal polynomial of z in the algebra with unit e, low degree first.
fn min_poly(b: &StructureAlgebra, e: &SparseVec, z: &SparseVec) -> Vec<Rat> {
    let dim = b.dim();
    let mut powers = vec![e.clone()];
    loop {
        let next = b.mul_sparse(powers.last().unwrap(), z);
        let cols: Vec<Vec<Rat>> = powers.iter().map(|p| p.to_dense(dim)).collect();
        let mat = RatMatrix::from_rows(dim, cols).expect("sizes").transpose();
        if let Some(c) = mat.solve(&next.to_dense(dim)) {
            // z^k = Σ c_i z^i  →  x^k − Σ c_i x^i
            let mut f: Vec<Rat> = c.into_iter().map(|x| -x).collect();
            f.push(Rat::one());
            return f;
        }
        powers.push(next);
    }
}

fn eval_poly_at(f: &[Rat], x: &Rat) -> Rat {
    f.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn divisors(v: &BigInt) -> Result<Vec<BigInt>> {
    let v = v.abs().to_u128().ok_or_else(|| Error::NotSplit("polynomial coefficient too large".into()))?;
    let mut out = Vec::new();
    let mut d = 1u128;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

/// Rational roots of a polynomial given low degree first.
pub(crate) fn rational_roots(f: &[Rat]) -> Result<Vec<Rat>> {
    let den = common_denominator(f);
    let mut ints: Vec<BigInt> = f.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut roots = Vec::new();
    while ints.len() > 1 && ints[0].is_zero() {
        if !roots.contains(&Rat::zero()) {
            roots.push(Rat::zero());
        }
        ints.remove(0);
    }
    if ints.len() > 1 {
        let a0 = ints[0].clone();
        let an = ints.last().unwrap().clone();
        for p in divisors(&a0)? {
            for q in divisors(&an)? {
                for s in [1, -1] {
                    let r = Rat::new(&p * s, q.clone());
                    let fr: Vec<Rat> = ints.iter().map(|c| Rat::from_integer(c.clone())).collect();
                    if eval_poly_at(&fr, &r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

/// Idempotents e_r = h_r(z)/h_r(r) with h_r = f/(x − r) for each rational root,
/// plus the remaining idempotent when the roots do not exhaust f.
fn lagrange_idempotents(
    b: &StructureAlgebra,
    e: &SparseVec,
    z: &SparseVec,
    f: &[Rat],
    roots: &[Rat],
) -> Vec<SparseVec> {
    let eval_at_z = |h: &[Rat]| -> SparseVec {
        let mut acc = SparseVec::new();
        for c in h.iter().rev() {
            acc = b.mul_sparse(&acc, z).axpy(c, e);
        }
        acc
    };
    let mut parts = Vec::new();
    let mut rest = e.clone();
    for r in roots {
        // synthetic division of f by (x − r)
        let deg = f.len() - 1;
        let mut h = vec![Rat::zero(); deg];
        let mut carry = Rat::zero();
        for k in (1..=deg).rev() {
            carry = &f[k] + &carry * r;
            h[k - 1] = carry.clone();
        }
        let scale = Rat::one() / eval_poly_at(&h, r);
        let er = eval_at_z(&h).scale(&scale);
        rest = rest.axpy(&-Rat::one(), &er);
        parts.push(er);
    }
    if !rest.is_zero() {
        parts.push(rest);
    }
    parts
}

/// exp(A) = max dim(B_{i1} ⊕ ⋯ ⊕ B_{ir}) over sequences of distinct blocks
/// with B_{i1} J B_{i2} J ⋯ J B_{ir} ≠ 0.
pub fn pi_exponent(a: &StructureAlgebra) -> Result<usize> {
    let wm = wedderburn_malcev(a)?;
    Ok(exponent_from(a, &wm))
}

pub fn exponent_from(a: &StructureAlgebra, wm: &WMDecomposition) -> usize {
    fn dfs(a: &StructureAlgebra, wm: &WMDecomposition, prod: &Subspace, used: &mut Vec<bool>, total: usize) -> usize {
        let mut best = total;
        let pj = a.subspace_product(prod, &wm.radical);
        if pj.is_zero() {
            return best;
        }
        for (k, blk) in wm.blocks.iter().enumerate() {
            if used[k] {
                continue;
            }
            let next = a.subspace_product(&pj, blk);
            if next.is_zero() {
                continue;
            }
            used[k] = true;
            best = best.max(dfs(a, wm, &next, used, total + blk.dim()));
            used[k] = false;
        }
        best
    }
    let mut best = 0;
    let mut used = vec![false; wm.blocks.len()];
    for (k, blk) in wm.blocks.iter().enumerate() {
        used[k] = true;
        best = best.max(dfs(a, wm, blk, &mut used, blk.dim()));
        used[k] = false;
    }
    best
}

/// Split simple: zero radical and one-dimensional center.
pub fn is_split_simple(a: &StructureAlgebra) -> Result<bool> {
    Ok(a.dim() > 0 && jacobson_radical(a)?.is_zero() && a.center().dim() == 1)
}

/// R(J), L(J) ⊆ J and R(B_i), L(B_i) ⊆ B_i + J for every basis multiplier.
pub fn multiplier_radical_invariance(a: &StructureAlgebra, ma: &MultiplierAlgebra) -> Result<Verdict> {
    let wm = wedderburn_malcev(a)?;
    let j = &wm.radical;
    let image_in = |op: &crate::algebra::LinOp, s: &Subspace, target: &Subspace| {
        s.basis().iter().all(|v| target.contains_sparse(&op.apply_sparse(v)))
    };
    for (k, m) in ma.basis().iter().enumerate() {
        if !image_in(&m.r, j, j) || !image_in(&m.l, j, j) {
            return Ok(Verdict::fails(format!("m{} does not preserve the radical", k + 1)));
        }
        for (i, blk) in wm.blocks.iter().enumerate() {
            let target = blk.sum(j)?;
            if !image_in(&m.r, blk, &target) || !image_in(&m.l, blk, &target) {
                return Ok(Verdict::fails(format!("m{} moves block {} outside B_{} + J", k + 1, i + 1, i + 1)));
            }
        }
    }
    Ok(Verdict::holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::linalg::rat;

    fn span(n: usize, idx: &[usize]) -> Subspace {
        Subspace::span_sparse(n, idx.iter().map(|&i| unit_vec(i))).unwrap()
    }

    #[test]
    fn radicals() {
        assert_eq!(jacobson_radical(&builtin("ut:2").unwrap()).unwrap(), span(3, &[2]));
        assert!(jacobson_radical(&builtin("mat:2").unwrap()).unwrap().is_zero());
        assert_eq!(jacobson_radical(&builtin("grassmann_unital:2").unwrap()).unwrap(), span(4, &[1, 2, 3]));
        assert_eq!(jacobson_radical(&builtin("grassmann:2").unwrap()).unwrap().dim(), 3);
        assert_eq!(jacobson_radical(&builtin("zero_mult:3").unwrap()).unwrap().dim(), 3);
        assert!(jacobson_radical(&builtin("diag_D").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn wm_ut2() {
        let a = builtin("ut:2").unwrap();
        let wm = wedderburn_malcev(&a).unwrap();
        assert_eq!(wm.complement, span(3, &[0, 1]));
        assert_eq!(wm.blocks, vec![span(3, &[0]), span(3, &[1])]);
    }

    #[test]
    fn wm_block_ut() {
        let a = builtin("block_ut:1,2").unwrap();
        let wm = wedderburn_malcev(&a).unwrap();
        assert_eq!(wm.radical.dim(), 2);
        let mut dims: Vec<usize> = wm.blocks.iter().map(|b| b.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 4]);
        assert!(a.is_subalgebra(&wm.complement));
    }

    #[test]
    fn wm_mat2_and_diag() {
        let m = builtin("mat:2").unwrap();
        let wm = wedderburn_malcev(&m).unwrap();
        assert_eq!(wm.complement.dim(), 4);
        assert_eq!(wm.blocks.len(), 1);
        let d = builtin("diag_D").unwrap();
        assert_eq!(wedderburn_malcev(&d).unwrap().blocks.len(), 2);
    }

    #[test]
    fn wm_with_nontrivial_lift() {
        // conjugate ut(2) by a change of basis so the naive section fails:
        // basis f0 = e11 + e12, f1 = e22, f2 = e12
        let a = builtin("ut:2").unwrap();
        let basis = vec![
            SparseVec::from_entries(vec![(0, rat(1)), (2, rat(1))]),
            SparseVec::from_entries(vec![(1, rat(1)), (2, rat(3))]),
            unit_vec(2),
        ];
        let b = a.subalgebra(&basis, vec!["f0".into(), "f1".into(), "f2".into()]).unwrap();
        let wm = wedderburn_malcev(&b).unwrap();
        assert_eq!(wm.complement.dim(), 2);
        assert!(b.is_subalgebra(&wm.complement));
        assert_eq!(exponent_from(&b, &wm), 2);
    }

    #[test]
    fn non_split_center() {
        // Q(i) as a 2-dimensional algebra: i² = −1
        let k = StructureAlgebra::new(
            vec!["1".into(), "i".into()],
            vec![(0, 0, 0, rat(1)), (0, 1, 1, rat(1)), (1, 0, 1, rat(1)), (1, 1, 0, rat(-1))],
            Some(vec![rat(1), rat(0)]),
        )
        .unwrap();
        assert!(matches!(wedderburn_malcev(&k), Err(Error::NotSplit(_))));
    }

    #[test]
    fn exponents() {
        assert_eq!(pi_exponent(&builtin("ut:2").unwrap()).unwrap(), 2);
        assert_eq!(pi_exponent(&builtin("mat:2").unwrap()).unwrap(), 4);
        assert_eq!(pi_exponent(&builtin("diag_D").unwrap()).unwrap(), 1);
        assert_eq!(pi_exponent(&builtin("grassmann_unital:3").unwrap()).unwrap(), 1);
        assert_eq!(pi_exponent(&builtin("zero_mult:2").unwrap()).unwrap(), 0);
        for n in 1..=4 {
            assert_eq!(pi_exponent(&builtin(&format!("ut:{n}")).unwrap()).unwrap(), n);
        }
    }

    #[test]
    fn rational_root_search() {
        // (x − 1)(x + 1/2)(x² + 1)
        let f = vec![rat(-1) / rat(2), rat(-1) / rat(2), rat(1) / rat(2), rat(-1) / rat(2), rat(1)];
        let f: Vec<Rat> = f;
        let roots = rational_roots(&f).unwrap();
        assert_eq!(roots, vec![rat(-1) / rat(2), rat(1)]);
    }
}
