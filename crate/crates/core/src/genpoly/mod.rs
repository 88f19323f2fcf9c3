//! Generalized polynomials in variables x_i with coefficients from W.

mod basis;
mod parse;

pub use basis::{enumerate_basis, monomial_at, monomial_count, monomial_index, GenMonomial};
pub use parse::parse;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{format_combination, StructureAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Rat, SparseVec};
use crate::waction::{ActingHom, EffectiveAction};

/// Coefficient symbol: `wN` is the N-th W basis element, `eN` refers to a W
/// basis label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coeff {
    W(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(u32),
    Coeff(Coeff),
    Scaled(Rat, Box<Expr>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    /// Left-normed: [a, b, c] = [[a, b], c].
    Commutator(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X(u32),
    C(Coeff),
}

impl Letter {
    pub fn is_var(&self) -> bool {
        matches!(self, Letter::X(_))
    }
}

pub type Word = Vec<Letter>;

/// Commutator-free form: a linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordPoly {
    terms: BTreeMap<Word, Rat>,
}

impl WordPoly {
    pub fn zero() -> Self {
        WordPoly::default()
    }

    pub fn word(w: Word) -> Self {
        let mut p = WordPoly::zero();
        p.add_term(w, Rat::one());
        p
    }

    pub fn add_term(&mut self, w: Word, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &WordPoly) -> WordPoly {
        let mut r = self.clone();
        for (w, c) in &other.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> WordPoly {
        let mut r = WordPoly::zero();
        for (w, x) in &self.terms {
            r.add_term(w.clone(), x * c);
        }
        r
    }

    pub fn mul(&self, other: &WordPoly) -> WordPoly {
        let mut r = WordPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                r.add_term(w, x * y);
            }
        }
        r
    }

    /// Variables occurring, in increasing order.
    pub fn variables(&self) -> Vec<u32> {
        let s: BTreeSet<u32> = self
            .terms
            .keys()
            .flat_map(|w| w.iter().filter_map(|l| if let Letter::X(i) = l { Some(*i) } else { None }))
            .collect();
        s.into_iter().collect()
    }

    /// Every word contains each of its variables exactly once and all words
    /// share the same variables.
    pub fn is_multilinear(&self) -> bool {
        let vars = self.variables();
        self.terms.keys().all(|w| {
            let mut seen: Vec<u32> =
                w.iter().filter_map(|l| if let Letter::X(i) = l { Some(*i) } else { None }).collect();
            seen.sort_unstable();
            seen == vars
        })
    }

    /// Back to an expression (sum of scaled products).
    pub fn to_expr(&self) -> Expr {
        let mut terms: Vec<Expr> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let mut fs: Vec<Expr> = w
                    .iter()
                    .map(|l| match l {
                        Letter::X(i) => Expr::Var(*i),
                        Letter::C(c) => Expr::Coeff(c.clone()),
                    })
                    .collect();
                let body = if fs.len() == 1 { fs.pop().unwrap() } else { Expr::Product(fs) };
                if c.is_one() {
                    body
                } else {
                    Expr::Scaled(c.clone(), Box::new(body))
                }
            })
            .collect();
        match terms.len() {
            0 => Expr::Scaled(Rat::zero(), Box::new(Expr::Var(1))),
            1 => terms.pop().unwrap(),
            _ => Expr::Sum(terms),
        }
    }
}

impl Expr {
    /// Expands commutators and products into a linear combination of words.
    pub fn expand(&self) -> WordPoly {
        match self {
            Expr::Var(i) => WordPoly::word(vec![Letter::X(*i)]),
            Expr::Coeff(c) => WordPoly::word(vec![Letter::C(c.clone())]),
            Expr::Scaled(c, e) => e.expand().scale(c),
            Expr::Sum(ts) => ts.iter().fold(WordPoly::zero(), |acc, t| acc.add(&t.expand())),
            Expr::Product(fs) => fs.iter().fold(WordPoly::word(vec![]), |acc, f| acc.mul(&f.expand())),
            Expr::Commutator(items) => {
                let mut acc = items[0].expand();
                for it in &items[1..] {
                    let b = it.expand();
                    acc = acc.mul(&b).add(&b.mul(&acc).scale(&-Rat::one()));
                }
                acc
            }
        }
    }
}

/// Commutator-free expression equivalent to `f`.
pub fn expand_commutators(f: &Expr) -> Expr {
    f.expand().to_expr()
}

/// Standard characteristic-zero linearization: split into multihomogeneous
/// components and fully linearize each. Repeated variables are replaced by
/// fresh variables numbered above the largest one in use.
pub fn multilinearize(f: &Expr) -> Vec<WordPoly> {
    multilinearize_words(&f.expand())
}

pub fn multilinearize_words(p: &WordPoly) -> Vec<WordPoly> {
    let degrees = |w: &Word| -> BTreeMap<u32, usize> {
        let mut d = BTreeMap::new();
        for l in w {
            if let Letter::X(i) = l {
                *d.entry(*i).or_insert(0) += 1;
            }
        }
        d
    };
    let mut comps: BTreeMap<Vec<(u32, usize)>, WordPoly> = BTreeMap::new();
    for (w, c) in p.terms() {
        let key: Vec<(u32, usize)> = degrees(w).into_iter().collect();
        comps.entry(key).or_default().add_term(w.clone(), c.clone());
    }
    let top = p.variables().last().copied().unwrap_or(0);
    let mut out = Vec::new();
    for (key, comp) in comps {
        if comp.is_zero() {
            continue;
        }
        if key.iter().all(|&(_, d)| d == 1) {
            out.push(comp);
            continue;
        }
        // fresh names for each copy of a repeated variable
        let mut next = top + 1;
        let mut copies: HashMap<u32, Vec<u32>> = HashMap::new();
        for &(v, d) in &key {
            if d == 1 {
                copies.insert(v, vec![v]);
            } else {
                copies.insert(v, (0..d as u32).map(|t| next + t).collect());
                next += d as u32;
            }
        }
        let mut lin = WordPoly::zero();
        for (w, c) in comp.terms() {
            // sum over all ways of assigning the copies to the occurrences
            let mut partial: Vec<(Word, HashMap<u32, Vec<u32>>)> = vec![(Vec::new(), copies.clone())];
            for l in w {
                let mut next_partial = Vec::new();
                for (prefix, avail) in partial {
                    match l {
                        Letter::X(v) => {
                            let opts = &avail[v];
                            for (k, &nv) in opts.iter().enumerate() {
                                let mut a = avail.clone();
                                a.get_mut(v).unwrap().remove(k);
                                let mut pw = prefix.clone();
                                pw.push(Letter::X(nv));
                                next_partial.push((pw, a));
                            }
                        }
                        Letter::C(_) => {
                            let mut pw = prefix;
                            pw.push(l.clone());
                            next_partial.push((pw, avail));
                        }
                    }
                }
                partial = next_partial;
            }
            for (nw, _) in partial {
                lin.add_term(nw, c.clone());
            }
        }
        if !lin.is_zero() {
            out.push(lin);
        }
    }
    out
}

/// Coefficient letter resolved against an action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolved {
    Index(usize),
    /// Beyond the listed basis of W; acts as zero.
    Tail,
}

pub fn resolve_coeff(c: &Coeff, h: &ActingHom) -> Result<Resolved> {
    let w = h.w();
    let idx = match c {
        Coeff::W(i) if *i < w.dim() => Some(*i),
        Coeff::W(_) => None,
        Coeff::Label(l) => w.label_index(l),
    };
    match idx {
        Some(i) => Ok(Resolved::Index(i)),
        None if h.kernel_tail() => Ok(Resolved::Tail),
        None => Err(Error::UnknownCoefficient(c.to_string())),
    }
}

/// Checks that every coefficient letter resolves against `h`.
pub fn check_coefficients(f: &WordPoly, h: &ActingHom) -> Result<()> {
    for w in f.words() {
        for l in w {
            if let Letter::C(c) = l {
                resolve_coeff(c, h)?;
            }
        }
    }
    Ok(())
}

/// Value of one word; variables are looked up by index.
fn eval_word(w: &Word, h: &ActingHom, value: &dyn Fn(u32) -> Result<SparseVec>) -> Result<SparseVec> {
    let a = h.a();
    let mut pending: Vec<usize> = Vec::new();
    let mut cur: Option<SparseVec> = None;
    for l in w {
        match l {
            Letter::C(c) => {
                let i = match resolve_coeff(c, h)? {
                    Resolved::Index(i) => i,
                    Resolved::Tail => return Ok(SparseVec::new()),
                };
                match &mut cur {
                    None => pending.push(i),
                    Some(v) => *v = h.rho(i).apply_sparse(v),
                }
            }
            Letter::X(x) => {
                let v = value(*x)?;
                cur = Some(match cur {
                    None => pending.iter().rev().fold(v, |acc, &i| h.lambda(i).apply_sparse(&acc)),
                    Some(prev) => a.mul_sparse(&prev, &v),
                });
            }
        }
        if cur.as_ref().is_some_and(|v| v.is_zero()) {
            return Ok(SparseVec::new());
        }
    }
    cur.ok_or_else(|| Error::Invalid("monomial without a variable".into()))
}

pub fn evaluate_words(f: &WordPoly, h: &ActingHom, value: &dyn Fn(u32) -> Result<SparseVec>) -> Result<SparseVec> {
    let mut acc = SparseVec::new();
    for (w, c) in f.terms() {
        let v = eval_word(w, h, value)?;
        if !v.is_zero() {
            acc = acc.axpy(c, &v);
        }
    }
    Ok(acc)
}

/// f evaluated at the assignment x_i ↦ assignment[i] (coordinates in A).
pub fn evaluate(f: &Expr, h: &ActingHom, assignment: &HashMap<u32, SparseVec>) -> Result<SparseVec> {
    let p = f.expand();
    check_coefficients(&p, h)?;
    evaluate_words(&p, h, &|x| assignment.get(&x).cloned().ok_or(Error::UnassignedVariable(x)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    /// Failing component (as text) and the basis tuple, if any.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub component: String,
    pub assignment: Vec<(String, String)>,
    pub value: String,
}

/// Whether f vanishes on A under the action, via its multilinear components
/// evaluated on all tuples of basis elements.
pub fn is_identity(f: &Expr, h: &ActingHom) -> Result<IdentityCheck> {
    let p = f.expand();
    check_coefficients(&p, h)?;
    for comp in multilinearize_words(&p) {
        if let Some(w) = multilinear_counterexample(&comp, h)? {
            return Ok(IdentityCheck { holds: false, witness: Some(w) });
        }
    }
    Ok(IdentityCheck { holds: true, witness: None })
}

fn multilinear_counterexample(comp: &WordPoly, h: &ActingHom) -> Result<Option<Witness>> {
    let a: &StructureAlgebra = h.a();
    let vars = comp.variables();
    let n = a.dim();
    if n == 0 {
        return Ok(None);
    }
    let m = vars.len();
    let total = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    let mut digits = vec![0usize; m];
    let mut count: u128 = 0;
    while count < total {
        let pos: HashMap<u32, usize> = vars.iter().enumerate().map(|(k, &v)| (v, digits[k])).collect();
        let v = evaluate_words(comp, h, &|x| Ok(SparseVec::from_entries(vec![(pos[&x], Rat::one())])))?;
        if !v.is_zero() {
            return Ok(Some(Witness {
                component: comp.to_expr().to_string(),
                assignment: vars.iter().zip(&digits).map(|(x, &d)| (format!("x{x}"), a.labels()[d].clone())).collect(),
                value: format_combination(&v, a.labels()),
            }));
        }
        count += 1;
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < n {
                break;
            }
            *d = 0;
        }
    }
    Ok(None)
}

/// Coordinates of a multilinear polynomial in x1..xn over the monomial basis
/// of degree n for the effective alphabet: adjacent coefficients are
/// multiplied in Φ(W) and re-expanded in the alphabet.
pub fn monomial_coordinates(f: &WordPoly, n: usize, h: &ActingHom, eff: &EffectiveAction) -> Result<SparseVec> {
    let s = eff.alphabet_size();
    let mut out: BTreeMap<usize, Rat> = BTreeMap::new();
    for (w, c) in f.terms() {
        let mut perm = Vec::with_capacity(n);
        let mut slots: Vec<SparseVec> = Vec::with_capacity(n + 1);
        let mut group: Option<SparseVec> = None;
        let mut dead = false;
        for l in w {
            match l {
                Letter::C(cf) => {
                    let i = match resolve_coeff(cf, h)? {
                        Resolved::Index(i) => i,
                        Resolved::Tail => {
                            dead = true;
                            break;
                        }
                    };
                    let x = eff.alphabet_coords[i].clone();
                    group = Some(match group {
                        None => x,
                        Some(g) => alphabet_mul(eff, &g, &x),
                    });
                }
                Letter::X(v) => {
                    perm.push(*v);
                    slots.push(group.take().unwrap_or_else(|| SparseVec::from_entries(vec![(0, Rat::one())])));
                }
            }
        }
        if dead {
            continue;
        }
        slots.push(group.take().unwrap_or_else(|| SparseVec::from_entries(vec![(0, Rat::one())])));
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != (1..=n as u32).collect::<Vec<_>>() {
            return Err(Error::Invalid(format!("not multilinear in x1..x{n}")));
        }
        // expand the product of slot combinations
        let mut partial: Vec<(Vec<usize>, Rat)> = vec![(Vec::new(), c.clone())];
        for sl in &slots {
            let mut next = Vec::new();
            for (idx, x) in &partial {
                for (k, y) in sl.entries() {
                    let mut i2 = idx.clone();
                    i2.push(*k);
                    next.push((i2, x * y));
                }
            }
            partial = next;
        }
        for (coeffs, x) in partial {
            let m = GenMonomial { perm: perm.clone(), coeffs };
            let e = out.entry(monomial_index(&m, s)).or_insert_with(Rat::zero);
            *e += x;
        }
    }
    Ok(SparseVec::from_entries(out.into_iter().collect()))
}

fn alphabet_mul(eff: &EffectiveAction, a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::new();
    for (i, x) in a.entries() {
        for (j, y) in b.entries() {
            acc = acc.axpy(&(x * y), &eff.alphabet_products[*i][*j]);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{builtin, unit_vec};
    use crate::waction::preset;

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn commutator_expansion() {
        assert_eq!(expand_commutators(&e("[x1,x2]")), e("x1*x2 - x2*x1").expand().to_expr());
        assert_eq!(e("[x1,x2,x3]").expand(), e("x1x2x3 - x2x1x3 - x3x1x2 + x3x2x1").expand());
        assert_eq!(e("[w1,x1]").expand(), e("w1*x1 - x1*w1").expand());
    }

    #[test]
    fn linearization() {
        let l = multilinearize(&e("x1*x1"));
        assert_eq!(l, vec![e("x2*x3 + x3*x2").expand()]);
        let c = multilinearize(&e("[x1,x2]"));
        assert_eq!(c, vec![e("[x1,x2]").expand()]);
        let cube = multilinearize(&e("x1x1x1"));
        assert_eq!(cube.len(), 1);
        assert_eq!(cube[0].len(), 6);
        assert!(cube[0].is_multilinear());
        assert_eq!(multilinearize(&e("x1 + x1*x2")).len(), 2);
    }

    #[test]
    fn evaluation_examples() {
        let ut = preset("ut2F").unwrap();
        let asg: HashMap<u32, SparseVec> = [(1, unit_vec(0)), (2, unit_vec(2))].into();
        assert_eq!(evaluate(&e("[x1,x2]"), &ut, &asg).unwrap(), unit_vec(2));
        let d = preset("ut2D").unwrap();
        let asg: HashMap<u32, SparseVec> = [(1, unit_vec(2))].into();
        assert!(evaluate(&e("w1x1"), &d, &asg).unwrap().is_zero());
        assert_eq!(evaluate(&e("x1w1"), &d, &asg).unwrap(), unit_vec(2));
        let g = preset("grassmann_Ek(1,3)").unwrap();
        let a = builtin("grassmann_unital:3").unwrap();
        let asg: HashMap<u32, SparseVec> = [(1, unit_vec(a.label_index("e2").unwrap()))].into();
        assert!(evaluate(&e("e1*x1*e1"), &g, &asg).unwrap().is_zero());
        assert!(evaluate(&e("e3*x1"), &g, &asg).unwrap().is_zero());
        let g12 = a.label_index("g{1,2}").unwrap();
        assert_eq!(evaluate(&e("e1*x1"), &g, &asg).unwrap(), unit_vec(g12));
        assert_eq!(evaluate(&e("x2"), &g, &asg), Err(Error::UnassignedVariable(2)));
        assert!(matches!(evaluate(&e("w5*x1"), &d, &asg), Err(Error::UnknownCoefficient(_))));
    }

    #[test]
    fn identities() {
        assert!(is_identity(&e("[x1,x2][x3,x4]"), &preset("ut2F").unwrap()).unwrap().holds);
        let r = is_identity(&e("[x1,x2]"), &preset("ut2D").unwrap()).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.assignment, vec![("x1".into(), "e11".into()), ("x2".into(), "e12".into())]);
        assert!(is_identity(&e("[x1,x2]-[x1,x2,w1]"), &preset("ut2D").unwrap()).unwrap().holds);
        assert!(is_identity(&e("[x1,x2]-[x1,x2,e22]"), &preset("ut2full").unwrap()).unwrap().holds);
        assert!(!is_identity(&e("x1*x1"), &preset("ut2F").unwrap()).unwrap().holds);
        assert!(is_identity(&e("[x1,x2,x3]"), &preset("grassmann_Ek(1,3)").unwrap()).unwrap().holds);
        assert!(is_identity(&e("[e1,x1,x2]"), &preset("grassmann_Ek(1,3)").unwrap()).unwrap().holds);
        assert!(is_identity(&e("[x1,x1]"), &preset("ut2F").unwrap()).unwrap().holds);
    }

    #[test]
    fn coordinates_merge_coefficients() {
        let h = preset("ut2D").unwrap();
        let eff = h.effective_image();
        // w1*w1 = w1 in D, so w1 w1 x1 and w1 x1 share a coordinate
        let a = monomial_coordinates(&e("w1*w1*x1").expand(), 1, &h, &eff).unwrap();
        let b = monomial_coordinates(&e("w1*x1").expand(), 1, &h, &eff).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, SparseVec::from_entries(vec![(2, Rat::one())]));
        let one = monomial_coordinates(&e("w0*x1*w0").expand(), 1, &h, &eff).unwrap();
        assert_eq!(one, SparseVec::from_entries(vec![(0, Rat::one())]));
    }
}
