//! Multilinear consequences of generalized polynomials.
//!
//! The span of consequences in degree m is built from degree m − 1 by the
//! operations that introduce the new variable x_m (g·a·x_m, x_m·a·g and
//! x_i ↦ x_i·a·x_m), then closed under the degree-preserving operations
//! (multiplication by a letter on either side, x_i ↦ a·x_i, x_i ↦ x_i·a and
//! relabelling of variables).

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::eval::{columns_for, for_each_row, IntModel};
use super::{exact_rank, Budget};
use crate::algebra::unit_vec;
use crate::error::{Error, Result};
use crate::genpoly::{
    check_coefficients, monomial_at, monomial_coordinates, monomial_count, monomial_index, multilinearize, Expr,
    GenMonomial, Letter, WordPoly,
};
use crate::linalg::echelon::{make_primitive, ModEchelon, DEFAULT_PRIME};
use crate::linalg::{Rat, SparseVec, Subspace};
use crate::multiplier::Multiplier;
use crate::waction::{ActingHom, EffectiveAction};

const SECOND_PRIME: u64 = 4_294_967_279;

/// How W-coefficients may enter the substitutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConsequenceMode {
    /// Variables are replaced by generalized monomials only.
    Strict,
    /// Variables may also be replaced by coefficient letters (including 1)
    /// whose action is inner, i.e. by the elements of A realizing them.
    InnerCoefficients,
}

trait Field {
    type E: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn from_rat(&self, r: &Rat) -> Result<Self::E>;
}

struct Exact;

impl Field for Exact {
    type E = Rat;
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn from_rat(&self, r: &Rat) -> Result<Rat> {
        Ok(r.clone())
    }
}

struct Modp(u64);

fn mod_big(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i64().expect("reduced");
    if r < 0 {
        (r + p as i64) as u64
    } else {
        r as u64
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut b, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl Field for Modp {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn from_rat(&self, r: &Rat) -> Result<u64> {
        let d = mod_big(r.denom(), self.0);
        if d == 0 {
            return Err(Error::Internal(format!("denominator divisible by {}", self.0)));
        }
        Ok(mod_big(r.numer(), self.0) * mod_inv(d, self.0) % self.0)
    }
}

type Combo<E> = Vec<(usize, E)>;
type Vector<E> = Vec<(u32, E)>;

/// Letter arithmetic and monomial rewriting over a field.
struct Ctx<F: Field> {
    f: F,
    s: usize,
    prod: Vec<Vec<Combo<F::E>>>,
}

enum Op {
    Left(usize),
    Right(usize),
    Before(u32, usize),
    After(u32, usize),
    Swap,
    Cycle,
}

enum Raise {
    Left(usize),
    Right(usize),
    After(u32, usize),
}

impl<F: Field> Ctx<F> {
    fn new(f: F, eff: &EffectiveAction) -> Result<Self> {
        let prod = eff
            .alphabet_products
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.entries().iter().map(|(k, x)| Ok((*k, f.from_rat(x)?))).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ctx { f, s: eff.alphabet_size(), prod })
    }

    fn convert(&self, v: &SparseVec) -> Result<Vector<F::E>> {
        let mut out = Vec::with_capacity(v.nnz());
        for (i, x) in v.entries() {
            let y = self.f.from_rat(x)?;
            if !self.f.is_zero(&y) {
                out.push((*i as u32, y));
            }
        }
        Ok(out)
    }

    /// Rewrites every monomial of `v` (degree n) into a combination of
    /// monomials of degree `n_out`.
    fn map(
        &self,
        v: &Vector<F::E>,
        n: usize,
        n_out: usize,
        mut rewrite: impl FnMut(&GenMonomial, &mut Vec<(GenMonomial, F::E)>),
    ) -> Vector<F::E> {
        let mut acc: HashMap<u32, F::E> = HashMap::new();
        let mut images = Vec::new();
        for (idx, c) in v {
            let m = monomial_at(*idx as usize, n, self.s);
            images.clear();
            rewrite(&m, &mut images);
            for (mm, x) in images.drain(..) {
                debug_assert_eq!(mm.degree(), n_out);
                let k = monomial_index(&mm, self.s) as u32;
                let y = self.f.mul(c, &x);
                let e = acc.entry(k).or_insert_with(|| self.f.zero());
                *e = self.f.add(e, &y);
            }
        }
        let mut out: Vector<F::E> = acc.into_iter().filter(|(_, x)| !self.f.is_zero(x)).collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// Replace slot k of m by each term of `combo`.
    fn set_slot(&self, m: &GenMonomial, k: usize, combo: &Combo<F::E>, out: &mut Vec<(GenMonomial, F::E)>) {
        for (l, x) in combo {
            let mut mm = m.clone();
            mm.coeffs[k] = *l;
            out.push((mm, x.clone()));
        }
    }

    fn apply(&self, op: &Op, v: &Vector<F::E>, n: usize) -> Vector<F::E> {
        let pos = |m: &GenMonomial, i: u32| m.perm.iter().position(|&x| x == i).expect("variable present");
        match *op {
            Op::Left(a) => self.map(v, n, n, |m, out| self.set_slot(m, 0, &self.prod[a][m.coeffs[0]], out)),
            Op::Right(a) => self.map(v, n, n, |m, out| self.set_slot(m, n, &self.prod[m.coeffs[n]][a], out)),
            Op::Before(i, a) => self.map(v, n, n, |m, out| {
                let k = pos(m, i);
                self.set_slot(m, k, &self.prod[m.coeffs[k]][a], out)
            }),
            Op::After(i, a) => self.map(v, n, n, |m, out| {
                let k = pos(m, i) + 1;
                self.set_slot(m, k, &self.prod[a][m.coeffs[k]], out)
            }),
            Op::Swap => self.map(v, n, n, |m, out| {
                let mut mm = m.clone();
                for x in mm.perm.iter_mut() {
                    *x = match *x {
                        1 => 2,
                        2 => 1,
                        y => y,
                    };
                }
                out.push((mm, self.f.one()));
            }),
            Op::Cycle => self.map(v, n, n, |m, out| {
                let mut mm = m.clone();
                for x in mm.perm.iter_mut() {
                    *x = *x % n as u32 + 1;
                }
                out.push((mm, self.f.one()));
            }),
        }
    }

    fn raise(&self, op: &Raise, v: &Vector<F::E>, n: usize) -> Vector<F::E> {
        let new = n as u32 + 1;
        match *op {
            Raise::Right(a) => self.map(v, n, n + 1, |m, out| {
                for (l, x) in &self.prod[m.coeffs[n]][a] {
                    let mut mm = m.clone();
                    mm.perm.push(new);
                    mm.coeffs[n] = *l;
                    mm.coeffs.push(0);
                    out.push((mm, x.clone()));
                }
            }),
            Raise::Left(a) => self.map(v, n, n + 1, |m, out| {
                for (l, x) in &self.prod[a][m.coeffs[0]] {
                    let mut mm = m.clone();
                    mm.perm.insert(0, new);
                    mm.coeffs[0] = *l;
                    mm.coeffs.insert(0, 0);
                    out.push((mm, x.clone()));
                }
            }),
            Raise::After(i, a) => self.map(v, n, n + 1, |m, out| {
                let k = m.perm.iter().position(|&x| x == i).expect("variable present");
                let mut mm = m.clone();
                mm.perm.insert(k + 1, new);
                mm.coeffs.insert(k + 1, a);
                out.push((mm, self.f.one()));
            }),
        }
    }

    fn fixed_ops(&self, n: usize) -> Vec<Op> {
        let mut ops = Vec::new();
        for a in 1..self.s {
            ops.push(Op::Left(a));
            ops.push(Op::Right(a));
            for i in 1..=n as u32 {
                ops.push(Op::Before(i, a));
                ops.push(Op::After(i, a));
            }
        }
        if n >= 2 {
            ops.push(Op::Swap);
        }
        if n >= 3 {
            ops.push(Op::Cycle);
        }
        ops
    }

    fn raise_ops(&self, n: usize) -> Vec<Raise> {
        let mut ops = Vec::new();
        for a in 0..self.s {
            ops.push(Raise::Left(a));
            ops.push(Raise::Right(a));
            for i in 1..=n as u32 {
                ops.push(Raise::After(i, a));
            }
        }
        ops
    }

    /// Product of a combination of letters with one letter on the right.
    fn times(&self, c: &Combo<F::E>, a: usize) -> Combo<F::E> {
        let mut acc: Vec<(usize, F::E)> = Vec::new();
        for (l, x) in c {
            for (k, y) in &self.prod[*l][a] {
                let z = self.f.mul(x, y);
                match acc.iter_mut().find(|e| e.0 == *k) {
                    Some(e) => e.1 = self.f.add(&e.1, &z),
                    None => acc.push((*k, z)),
                }
            }
        }
        acc.retain(|e| !self.f.is_zero(&e.1));
        acc
    }

    /// Replaces the variables in `subst` (variable, letter) by letters and
    /// renumbers the remaining ones in order.
    fn specialize(&self, v: &Vector<F::E>, n: usize, subst: &[(u32, usize)]) -> Vector<F::E> {
        let n_out = n - subst.len();
        let mut renum = vec![0u32; n + 1];
        let mut next = 1;
        for x in 1..=n as u32 {
            if !subst.iter().any(|e| e.0 == x) {
                renum[x as usize] = next;
                next += 1;
            }
        }
        self.map(v, n, n_out, |m, out| {
            let mut slots: Vec<Combo<F::E>> = Vec::with_capacity(n_out + 1);
            let mut perm = Vec::with_capacity(n_out);
            let mut cur: Combo<F::E> = vec![(m.coeffs[0], self.f.one())];
            for k in 0..n {
                let x = m.perm[k];
                match subst.iter().find(|e| e.0 == x) {
                    Some(&(_, a)) => {
                        cur = self.times(&cur, a);
                        cur = self.times(&cur, m.coeffs[k + 1]);
                    }
                    None => {
                        slots.push(std::mem::replace(&mut cur, vec![(m.coeffs[k + 1], self.f.one())]));
                        perm.push(renum[x as usize]);
                    }
                }
            }
            slots.push(cur);
            let mut partial: Vec<(Vec<usize>, F::E)> = vec![(Vec::new(), self.f.one())];
            for sl in &slots {
                let mut next = Vec::with_capacity(partial.len() * sl.len());
                for (idx, x) in &partial {
                    for (l, y) in sl {
                        let mut i2 = idx.clone();
                        i2.push(*l);
                        next.push((i2, self.f.mul(x, y)));
                    }
                }
                partial = next;
            }
            for (coeffs, x) in partial {
                out.push((GenMonomial { perm: perm.clone(), coeffs }, x));
            }
        })
    }
}

trait Tracker<E> {
    fn insert(&mut self, v: &Vector<E>) -> bool;
    fn dim(&self) -> usize;
}

impl Tracker<Rat> for Subspace {
    fn insert(&mut self, v: &Vector<Rat>) -> bool {
        self.insert_sparse(SparseVec::from_entries(v.iter().map(|(i, x)| (*i as usize, x.clone())).collect()))
    }
    fn dim(&self) -> usize {
        Subspace::dim(self)
    }
}

impl Tracker<u64> for ModEchelon {
    fn insert(&mut self, v: &Vector<u64>) -> bool {
        ModEchelon::insert(self, v.clone())
    }
    fn dim(&self) -> usize {
        self.rank()
    }
}

/// Closes `seeds` under the degree-n operations; returns the accepted
/// vectors, which span the closure (or a subspace of dimension `stop_at`).
fn close<F: Field, T: Tracker<F::E>>(
    ctx: &Ctx<F>,
    tracker: &mut T,
    n: usize,
    seeds: impl IntoIterator<Item = Vector<F::E>>,
    stop_at: Option<usize>,
) -> Vec<Vector<F::E>> {
    let ops = ctx.fixed_ops(n);
    let mut accepted = Vec::new();
    let mut queue: VecDeque<Vector<F::E>> = VecDeque::new();
    let full = |t: &T| stop_at.is_some_and(|d| t.dim() >= d);
    for v in seeds {
        if full(tracker) {
            return accepted;
        }
        if !v.is_empty() && tracker.insert(&v) {
            queue.push_back(v.clone());
            accepted.push(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for op in &ops {
            if full(tracker) {
                return accepted;
            }
            let w = ctx.apply(op, &v, n);
            if !w.is_empty() && tracker.insert(&w) {
                queue.push_back(w.clone());
                accepted.push(w);
            }
        }
    }
    accepted
}

/// A multilinear generator with variables renumbered to x1..xd.
struct Prepared {
    degree: usize,
    coords: SparseVec,
}

fn renumber(p: &WordPoly) -> (WordPoly, usize) {
    let vars = p.variables();
    let map: HashMap<u32, u32> = vars.iter().enumerate().map(|(k, &v)| (v, k as u32 + 1)).collect();
    let mut out = WordPoly::zero();
    for (w, c) in p.terms() {
        let nw = w
            .iter()
            .map(|l| match l {
                Letter::X(v) => Letter::X(map[v]),
                other => other.clone(),
            })
            .collect();
        out.add_term(nw, c.clone());
    }
    (out, vars.len())
}

fn prepare(gens: &[Expr], h: &ActingHom, eff: &EffectiveAction) -> Result<Vec<Prepared>> {
    let mut out = Vec::new();
    for g in gens {
        let p = g.expand();
        check_coefficients(&p, h)?;
        for comp in multilinearize(g) {
            let (comp, d) = renumber(&comp);
            if d == 0 {
                continue;
            }
            let coords = monomial_coordinates(&comp, d, h, eff)?;
            if !coords.is_zero() {
                out.push(Prepared { degree: d, coords });
            }
        }
    }
    Ok(out)
}

/// Alphabet letters realized by elements of A.
fn inner_letters(h: &ActingHom, eff: &EffectiveAction) -> Vec<usize> {
    let a = h.a();
    let n = a.dim();
    let span = Subspace::span_sparse(2 * n * n, (0..n).map(|j| Multiplier::inner(a, &unit_vec(j)).to_flat()))
        .expect("sizes match");
    (0..eff.alphabet_size()).filter(|&l| span.contains_sparse(&eff.alphabet[l].to_flat())).collect()
}

/// Seeds of each degree 1..=n: the generators and, in the inner mode, their
/// specializations.
fn seeds_by_degree<F: Field>(
    ctx: &Ctx<F>,
    prepared: &[Prepared],
    letters: &[usize],
    n: usize,
) -> Result<Vec<Vec<Vector<F::E>>>> {
    let mut by_degree: Vec<Vec<Vector<F::E>>> = vec![Vec::new(); n + 1];
    for g in prepared {
        let d = g.degree;
        let v = ctx.convert(&g.coords)?;
        if d <= n {
            by_degree[d].push(v.clone());
        }
        if letters.is_empty() {
            continue;
        }
        for mask in 1u32..(1 << d) - 1 {
            let vars: Vec<u32> = (0..d as u32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
            let d_out = d - vars.len();
            if d_out > n {
                continue;
            }
            let combos = letters.len().pow(vars.len() as u32);
            for mut code in 0..combos {
                let subst: Vec<(u32, usize)> = vars
                    .iter()
                    .map(|&x| {
                        let l = letters[code % letters.len()];
                        code /= letters.len();
                        (x, l)
                    })
                    .collect();
                let w = ctx.specialize(&v, d, &subst);
                if !w.is_empty() {
                    by_degree[d_out].push(w);
                }
            }
        }
    }
    Ok(by_degree)
}

fn check_size(eff: &EffectiveAction, n: usize, budget: &Budget) -> Result<usize> {
    let rows = monomial_count(n, eff.alphabet_size()).unwrap_or(u128::MAX);
    if rows > budget.max_rows {
        return Err(Error::BudgetExceeded { rows, cols: 0, limit: budget.max_rows });
    }
    Ok(rows as usize)
}

fn letters_for(mode: ConsequenceMode, h: &ActingHom, eff: &EffectiveAction) -> Vec<usize> {
    match mode {
        ConsequenceMode::Strict => Vec::new(),
        ConsequenceMode::InnerCoefficients => inner_letters(h, eff),
    }
}

/// Runs the degree-by-degree closure. `stop` gives an optional target
/// dimension per degree.
fn run<F: Field, T: Tracker<F::E>>(
    ctx: &Ctx<F>,
    seeds: Vec<Vec<Vector<F::E>>>,
    n: usize,
    mut tracker: impl FnMut(usize) -> T,
    mut stop: impl FnMut(usize) -> Option<usize>,
    mut visit: impl FnMut(usize, &T, &[Vector<F::E>]) -> Result<bool>,
) -> Result<()> {
    let mut prev: Vec<Vector<F::E>> = Vec::new();
    for (m, gens) in seeds.into_iter().enumerate().skip(1) {
        let raised: Vec<Vector<F::E>> = if m >= 2 {
            let ops = ctx.raise_ops(m - 1);
            prev.iter().flat_map(|v| ops.iter().map(move |op| ctx.raise(op, v, m - 1))).collect()
        } else {
            Vec::new()
        };
        let mut t = tracker(m);
        let accepted = close(ctx, &mut t, m, gens.into_iter().chain(raised), stop(m));
        if !visit(m, &t, &accepted)? || m == n {
            return Ok(());
        }
        prev = accepted;
    }
    Ok(())
}

/// Span of the degree-n multilinear consequences of `generators`, as a
/// subspace of the monomial-coefficient space of [`crate::genpoly::enumerate_basis`].
pub fn consequences_span(
    generators: &[Expr],
    h: &ActingHom,
    n: usize,
    mode: ConsequenceMode,
    budget: &Budget,
) -> Result<Subspace> {
    if n == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    let eff = h.effective_image();
    let rows = check_size(&eff, n, budget)?;
    let prepared = prepare(generators, h, &eff)?;
    let ctx = Ctx::new(Exact, &eff)?;
    let seeds = seeds_by_degree(&ctx, &prepared, &letters_for(mode, h, &eff), n)?;
    let s = eff.alphabet_size();
    let mut result = Subspace::zero(rows);
    run(
        &ctx,
        seeds,
        n,
        |m| Subspace::zero(monomial_count(m, s).expect("checked") as usize),
        |_| None,
        |m, t, _| {
            if m == n {
                result = t.clone();
            }
            Ok(true)
        },
    )?;
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    pub monomials: usize,
    pub codimension: usize,
    pub kernel_dim: usize,
    /// Lower bound for the dimension of the consequence span.
    pub span_dim: usize,
    pub generated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationCheck {
    pub holds: bool,
    pub mode: ConsequenceMode,
    pub degrees: Vec<DegreeCheck>,
    pub failing_degree: Option<usize>,
    /// Generator components (by index) that are not identities of A.
    pub non_identities: Vec<usize>,
}

/// Exact rank of the evaluation matrix together with exact images v·E of
/// the given monomial vectors and a random functional E·r modulo `p`.
struct DegreeData {
    rank: usize,
    images_zero: Vec<bool>,
    functional: Vec<u64>,
}

fn degree_data(
    h: &ActingHom,
    eff: &EffectiveAction,
    n: usize,
    vectors: &[&SparseVec],
    p: u64,
    seed: u64,
) -> Result<DegreeData> {
    let model = IntModel::new(h.a(), &eff.alphabet)?;
    let cols = columns_for(h, n);
    let ncols = cols.count(h.a().dim(), n) as usize * h.a().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r: Vec<u64> = (0..ncols).map(|_| rng.gen_range(0..p)).collect();
    let s = eff.alphabet_size();
    let nrows = monomial_count(n, s).expect("checked") as usize;
    let mut functional = vec![0u64; nrows];
    let mut wanted: HashMap<usize, Vec<(usize, Rat)>> = HashMap::new();
    for (g, v) in vectors.iter().enumerate() {
        for (i, x) in v.entries() {
            wanted.entry(*i).or_default().push((g, x.clone()));
        }
    }
    let mut images: Vec<HashMap<u32, Rat>> = vec![HashMap::new(); vectors.len()];
    let mut kept = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for_each_row(&model, &cols, n, |idx, row| {
        let scale = model.row_scale(&monomial_at(idx, n, s).coeffs);
        let mut acc: u64 = 0;
        for (c, x) in &row {
            let xm = x.rem_euclid(p as i128) as u64;
            acc = (acc + xm * r[*c as usize] % p) % p;
        }
        functional[idx] = acc * mod_inv(mod_big(&scale, p), p) % p;
        if let Some(list) = wanted.get(&idx) {
            for (g, coef) in list {
                let f = coef / Rat::from_integer(scale.clone());
                for (c, x) in &row {
                    let e = images[*g].entry(*c).or_insert_with(Rat::zero);
                    *e += &f * Rat::from_integer(BigInt::from(*x));
                }
            }
        }
        if !row.is_empty() {
            let pr = make_primitive(row);
            if seen.insert(pr.clone()) {
                kept.push(pr);
            }
        }
        Ok(())
    })?;
    let images_zero = images.iter().map(|m| m.values().all(|x| x.is_zero())).collect();
    Ok(DegreeData { rank: exact_rank(kept.into_iter()), images_zero, functional })
}

/// Whether the multilinear consequences of `generators` exhaust the
/// multilinear identities of A in every degree 1..=n.
///
/// The identity kernel dimension is exact. The consequence span is tracked
/// modulo a large prime, so its dimension is a lower bound; equality with
/// the kernel dimension is therefore a certificate. A shortfall is re-checked
/// with a second prime before the answer is reported as false.
pub fn verify_generating_set(
    generators: &[Expr],
    h: &ActingHom,
    n: usize,
    mode: ConsequenceMode,
    budget: &Budget,
) -> Result<GenerationCheck> {
    if n == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    let eff = h.effective_image();
    check_size(&eff, n, budget)?;
    let prepared = prepare(generators, h, &eff)?;
    let letters = letters_for(mode, h, &eff);
    let s = eff.alphabet_size();

    // exact data per degree: kernel dimensions and generator soundness
    let mut data = Vec::new();
    let mut non_identities = Vec::new();
    for m in 1..=n {
        let here: Vec<(usize, &SparseVec)> =
            prepared.iter().enumerate().filter(|(_, g)| g.degree == m).map(|(i, g)| (i, &g.coords)).collect();
        let vecs: Vec<&SparseVec> = here.iter().map(|e| e.1).collect();
        let d = degree_data(h, &eff, m, &vecs, DEFAULT_PRIME, 0x5eed + m as u64)?;
        for ((i, _), ok) in here.iter().zip(&d.images_zero) {
            if !ok {
                non_identities.push(*i);
            }
        }
        data.push(d);
    }
    let kernel: Vec<usize> =
        (1..=n).map(|m| monomial_count(m, s).expect("checked") as usize - data[m - 1].rank).collect();
    if !non_identities.is_empty() {
        let degrees = (1..=n)
            .map(|m| DegreeCheck {
                degree: m,
                monomials: monomial_count(m, s).expect("checked") as usize,
                codimension: data[m - 1].rank,
                kernel_dim: kernel[m - 1],
                span_dim: 0,
                generated: false,
            })
            .collect();
        return Ok(GenerationCheck { holds: false, mode, degrees, failing_degree: None, non_identities });
    }

    let mut best: Vec<usize> = vec![0; n];
    for p in [DEFAULT_PRIME, SECOND_PRIME] {
        let ctx = Ctx::new(Modp(p), &eff)?;
        let seeds = seeds_by_degree(&ctx, &prepared, &letters, n)?;
        let mut spans = vec![0usize; n];
        let mut unsound = None;
        run(
            &ctx,
            seeds,
            n,
            |_| ModEchelon::new(p),
            |m| Some(kernel[m - 1]),
            |m, t, accepted| {
                spans[m - 1] = t.rank();
                if p == DEFAULT_PRIME {
                    let y = &data[m - 1].functional;
                    for v in accepted {
                        let dot = v.iter().fold(0u64, |acc, (i, x)| (acc + x * y[*i as usize] % p) % p);
                        if dot != 0 {
                            unsound = Some(m);
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            },
        )?;
        if let Some(m) = unsound {
            return Err(Error::Internal(format!("consequence outside the identity kernel in degree {m}")));
        }
        for m in 0..n {
            best[m] = best[m].max(spans[m]);
        }
        if best.iter().zip(&kernel).all(|(a, b)| a == b) {
            break;
        }
    }
    let degrees: Vec<DegreeCheck> = (1..=n)
        .map(|m| DegreeCheck {
            degree: m,
            monomials: monomial_count(m, s).expect("checked") as usize,
            codimension: data[m - 1].rank,
            kernel_dim: kernel[m - 1],
            span_dim: best[m - 1],
            generated: best[m - 1] == kernel[m - 1],
        })
        .collect();
    let failing_degree = degrees.iter().find(|d| !d.generated).map(|d| d.degree);
    Ok(GenerationCheck { holds: failing_degree.is_none(), mode, degrees, failing_degree, non_identities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genpoly::parse;
    use crate::waction::{ordinary_action, preset};

    fn gens(list: &[&str]) -> Vec<Expr> {
        list.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn span_dimension_matches_kernel() {
        let h = preset("ut2D").unwrap();
        let g = gens(&["[x1,x2] - [x1,x2,w1]"]);
        let span = consequences_span(&g, &h, 3, ConsequenceMode::InnerCoefficients, &Budget::default()).unwrap();
        assert_eq!(span.dim(), 96 - 14);
    }

    #[test]
    fn empty_list_spans_nothing() {
        let h = preset("ut2D").unwrap();
        let span = consequences_span(&[], &h, 2, ConsequenceMode::Strict, &Budget::default()).unwrap();
        assert_eq!(span.dim(), 0);
    }

    #[test]
    fn lemma_consequence() {
        let h = ordinary_action(crate::algebra::builtin("grassmann_unital:4").unwrap()).unwrap();
        let g = gens(&["[x1,x2,x3]"]);
        let span = consequences_span(&g, &h, 4, ConsequenceMode::Strict, &Budget::default()).unwrap();
        let eff = h.effective_image();
        let target = parse("[x1,x2][x3,x4] + [x1,x4][x3,x2]").unwrap().expand();
        let v = monomial_coordinates(&target, 4, &h, &eff).unwrap();
        assert!(span.contains_sparse(&v));
    }

    #[test]
    fn verification() {
        let b = Budget::default();
        let h = preset("ut2D").unwrap();
        let r = verify_generating_set(&gens(&["[x1,x2] - [x1,x2,w1]"]), &h, 3, ConsequenceMode::InnerCoefficients, &b)
            .unwrap();
        assert!(r.holds, "{r:?}");
        let r =
            verify_generating_set(&gens(&["[x1,x2][x3,x4]"]), &h, 2, ConsequenceMode::InnerCoefficients, &b).unwrap();
        assert!(!r.holds);
        let f = preset("ut2F").unwrap();
        let r = verify_generating_set(&gens(&["[x1,x2][x3,x4]"]), &f, 4, ConsequenceMode::Strict, &b).unwrap();
        assert!(r.holds, "{r:?}");
        let r = verify_generating_set(&gens(&["[x1,x2]"]), &f, 2, ConsequenceMode::Strict, &b).unwrap();
        assert_eq!(r.non_identities, vec![0]);
    }
}
