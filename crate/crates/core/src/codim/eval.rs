//! Integer evaluation of multilinear monomials on basis tuples.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{grassmann_words, LinOp, StructureAlgebra};
use crate::error::{Error, Result};
use crate::linalg::echelon::IntRow;
use crate::linalg::{Rat, SparseVec};
use crate::multiplier::Multiplier;
use crate::waction::{ActingHom, ActionFamily};

type IVec = Vec<(u32, i128)>;

fn lcm_denoms<'a>(it: impl Iterator<Item = &'a Rat>) -> Result<i128> {
    let mut l = BigInt::one();
    for r in it {
        l = l.lcm(r.denom());
    }
    l.to_i128().ok_or_else(|| Error::Internal("denominator too large".into()))
}

fn scaled(v: &SparseVec, d: i128) -> Result<IVec> {
    v.entries()
        .iter()
        .map(|(i, x)| {
            let y = x * Rat::from_integer(d.into());
            debug_assert!(y.is_integer());
            y.to_integer().to_i128().map(|z| (*i as u32, z)).ok_or_else(|| Error::Internal("constant too large".into()))
        })
        .collect()
}

fn scaled_op(op: &LinOp, d: i128) -> Result<Vec<IVec>> {
    (0..op.dim()).map(|j| scaled(op.column(j), d)).collect()
}

/// Structure constants and letter operators scaled to integers. Every value
/// of a given monomial carries the same scale, so rows stay proportional to
/// the exact ones.
pub(crate) struct IntModel {
    pub dim: usize,
    /// right[j][c]: e_c·e_j scaled by `prod_scale`.
    right: Vec<Vec<IVec>>,
    prod_scale: i128,
    lam: Vec<Vec<IVec>>,
    rho: Vec<Vec<IVec>>,
    letter_scale: Vec<i128>,
}

impl IntModel {
    pub fn new(a: &StructureAlgebra, letters: &[Multiplier]) -> Result<Self> {
        let n = a.dim();
        let consts = a.constants();
        let prod_scale = lcm_denoms(consts.iter().map(|c| &c.3))?;
        // right[j][c] = e_c·e_j
        let mut right = vec![vec![IVec::new(); n]; n];
        for c in 0..n {
            for j in 0..n {
                right[j][c] = scaled(a.basis_product(c, j), prod_scale)?;
            }
        }
        let mut lam = Vec::new();
        let mut rho = Vec::new();
        let mut letter_scale = Vec::new();
        for m in letters {
            let d = lcm_denoms(m.l.to_flat().entries().iter().chain(m.r.to_flat().entries()).map(|(_, x)| x))?;
            letter_scale.push(d);
            lam.push(scaled_op(&m.l, d)?);
            rho.push(scaled_op(&m.r, d)?);
        }
        Ok(IntModel { dim: n, right, prod_scale, lam, rho, letter_scale })
    }

    pub fn letters(&self) -> usize {
        self.lam.len()
    }

    /// Row scale of the monomial with coefficient letters `coeffs`.
    pub fn row_scale(&self, coeffs: &[usize]) -> BigInt {
        let mut s = BigInt::one();
        for &c in coeffs {
            s *= self.letter_scale[c];
        }
        for _ in 1..coeffs.len().saturating_sub(1) {
            s *= self.prod_scale;
        }
        s
    }

    fn apply(op: &[IVec], v: &IVec) -> Result<IVec> {
        let mut acc: Vec<(u32, i128)> = Vec::new();
        for (j, x) in v {
            for (i, y) in &op[*j as usize] {
                acc.push((*i, x.checked_mul(*y).ok_or_else(overflow)?));
            }
        }
        merge(acc)
    }

    fn mul_basis(&self, v: &IVec, j: usize) -> Result<IVec> {
        Self::apply(&self.right[j], v)
    }
}

fn overflow() -> Error {
    Error::Internal("integer overflow during evaluation".into())
}

fn merge(mut acc: Vec<(u32, i128)>) -> Result<IVec> {
    if acc.len() <= 1 {
        acc.retain(|e| e.1 != 0);
        return Ok(acc);
    }
    acc.sort_unstable_by_key(|e| e.0);
    let mut out: IVec = Vec::with_capacity(acc.len());
    for (i, x) in acc {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = last.1.checked_add(x).ok_or_else(overflow)?,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| e.1 != 0);
    Ok(out)
}

/// Which basis tuples index the columns.
#[derive(Clone, Debug)]
pub(crate) enum Columns {
    /// All dim^n tuples, tuple index Σ b_j·dim^{n-j}.
    All,
    /// Explicit tuples (variable order), e.g. orbit representatives.
    Tuples(Vec<Vec<usize>>),
}

impl Columns {
    pub fn count(&self, dim: usize, n: usize) -> u128 {
        match self {
            Columns::All => (dim as u128).pow(n as u32),
            Columns::Tuples(t) => t.len() as u128,
        }
    }

    fn tuple(&self, dim: usize, n: usize, idx: usize) -> Vec<usize> {
        match self {
            Columns::All => {
                let mut t = vec![0; n];
                let mut x = idx;
                for k in (0..n).rev() {
                    t[k] = x % dim;
                    x /= dim;
                }
                t
            }
            Columns::Tuples(ts) => ts[idx].clone(),
        }
    }
}

/// Columns for an action: orbit representatives under permutations of the
/// non-acting generators for the Grassmann family, all tuples otherwise.
pub(crate) fn columns_for(h: &ActingHom, n: usize) -> Columns {
    match h.family() {
        Some(ActionFamily::Grassmann { k, m }) => Columns::Tuples(grassmann_orbit_tuples(*k, *m, n, h.a())),
        None => Columns::All,
    }
}

/// Tuples of words with pairwise disjoint supports whose tail parts are
/// consecutive blocks of e_{k+1}, …, e_m in variable order. Every tuple of
/// words is a tail permutation image of one of these or evaluates to zero.
fn grassmann_orbit_tuples(k: usize, m: usize, n: usize, a: &StructureAlgebra) -> Vec<Vec<usize>> {
    let words = grassmann_words(m, true);
    let index: std::collections::HashMap<u32, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    debug_assert_eq!(words.len(), a.dim());
    let tail = m - k;
    let mut out = Vec::new();
    // acting generators: each goes to one variable or none
    let acting_choices = (n + 1).pow(k as u32);
    let mut sizes = vec![0usize; n];
    loop {
        if sizes.iter().sum::<usize>() <= tail {
            for code in 0..acting_choices {
                let mut act = vec![0u32; n];
                let mut c = code;
                for g in 0..k {
                    let slot = c % (n + 1);
                    c /= n + 1;
                    if slot < n {
                        act[slot] |= 1 << g;
                    }
                }
                let mut start = k;
                let mut tuple = Vec::with_capacity(n);
                for j in 0..n {
                    let block: u32 = ((1u32 << sizes[j]) - 1) << start;
                    start += sizes[j];
                    tuple.push(index[&(act[j] | block)]);
                }
                out.push(tuple);
            }
        }
        // next size vector with entries ≤ tail
        let mut j = n;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if sizes[j] < tail {
                sizes[j] += 1;
                break;
            }
            sizes[j] = 0;
        }
    }
}

/// Evaluation rows for one permutation σ: s^{n+1} rows in coefficient order.
fn rows_for_perm(model: &IntModel, perm: &[u32], cols: &Columns, n: usize) -> Result<Vec<IntRow<i128>>> {
    let s = model.letters();
    let per = s.pow(n as u32 + 1);
    let dim = model.dim;
    let mut rows: Vec<IntRow<i128>> = vec![Vec::new(); per];
    let count = cols.count(dim, n) as usize;
    // stack frames: (level, coefficient prefix number, value)
    for t in 0..count {
        let tuple = cols.tuple(dim, n, t);
        let base = (t * dim) as u32;
        let first = tuple[perm[0] as usize - 1];
        let mut stack: Vec<(usize, usize, IVec)> = Vec::new();
        for i0 in (0..s).rev() {
            let v = model.lam[i0][first].clone();
            if !v.is_empty() {
                stack.push((1, i0, v));
            }
        }
        while let Some((level, prefix, v)) = stack.pop() {
            if level == n {
                for i in (0..s).rev() {
                    let w = IntModel::apply(&model.rho[i], &v)?;
                    let row = &mut rows[prefix * s + i];
                    row.extend(w.into_iter().map(|(c, x)| (base + c, x)));
                }
                continue;
            }
            let b = tuple[perm[level] as usize - 1];
            for i in (0..s).rev() {
                let w = IntModel::apply(&model.rho[i], &v)?;
                if w.is_empty() {
                    continue;
                }
                let w = model.mul_basis(&w, b)?;
                if !w.is_empty() {
                    stack.push((level + 1, prefix * s + i, w));
                }
            }
        }
    }
    Ok(rows)
}

/// Permutations of 1..=n in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut p: Vec<u32> = (1..=n as u32).collect();
    loop {
        out.push(p.clone());
        let mut i = n.saturating_sub(1);
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Streams evaluation rows in monomial order, computing permutation blocks
/// in parallel and handing them to `sink` sequentially.
pub(crate) fn for_each_row(
    model: &IntModel,
    cols: &Columns,
    n: usize,
    mut sink: impl FnMut(usize, IntRow<i128>) -> Result<()>,
) -> Result<()> {
    let perms = permutations(n);
    let per = model.letters().pow(n as u32 + 1);
    let chunk = rayon::current_num_threads().max(1) * 2;
    for (c, group) in perms.chunks(chunk).enumerate() {
        let blocks: Vec<Result<Vec<IntRow<i128>>>> =
            group.par_iter().map(|p| rows_for_perm(model, p, cols, n)).collect();
        for (g, block) in blocks.into_iter().enumerate() {
            let first = (c * chunk + g) * per;
            for (r, row) in block?.into_iter().enumerate() {
                sink(first + r, row)?;
            }
        }
    }
    Ok(())
}

pub(crate) fn to_rat_row(row: &IntRow<i128>, scale: &BigInt) -> SparseVec {
    let d = Rat::from_integer(scale.clone());
    SparseVec::from_entries(row.iter().map(|(c, x)| (*c as usize, Rat::from_integer((*x).into()) / &d)).collect())
}

pub(crate) fn is_zero_row(row: &IntRow<i128>) -> bool {
    row.iter().all(|e| e.1.is_zero())
}
