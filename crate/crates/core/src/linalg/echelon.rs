//! Sparse incremental row echelon engines over the integers and modulo a
//! prime. Rows are `(column, value)` pairs with strictly increasing columns.
//!
//! The integer engine is fraction-free: a row is reduced against a stored
//! pivot row by cross-multiplication and then divided by its content. It is
//! generic so that the fast `i128` path can fall back to `BigInt` on overflow.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arithmetic overflow in a fixed-width engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub trait EchelonInt: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    /// Nonnegative gcd.
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
    fn is_one(&self) -> bool;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    /// Residue in [0, p).
    fn mod_p(&self, p: u64) -> u64;
}

impl EchelonInt for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), other.unsigned_abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        // gcd of two values in i128 range fits unless both are i128::MIN
        a.min(i128::MAX as u128) as i128
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128().filter(|x| *x != i128::MIN)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn mod_p(&self, p: u64) -> u64 {
        self.rem_euclid(p as i128) as u64
    }
}

impl EchelonInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn mod_p(&self, p: u64) -> u64 {
        self.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
    }
}

pub type IntRow<T> = Vec<(u32, T)>;

/// Divides by the content and makes the leading entry positive.
pub fn make_primitive<T: EchelonInt>(mut row: IntRow<T>) -> IntRow<T> {
    let mut g = T::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let flip = row.first().is_some_and(|(_, v)| v.is_negative());
    if g.is_zero() {
        return row;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
    if flip {
        for (_, v) in row.iter_mut() {
            *v = v.neg().expect("negating a reduced value");
        }
    }
    row
}

/// Returns a·x − b·y on sparse rows.
fn combine<T: EchelonInt>(a: &T, x: &[(u32, T)], b: &T, y: &[(u32, T)]) -> Result<IntRow<T>, Overflow> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push((x[i].0, a.mul(&x[i].1).ok_or(Overflow)?));
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            let v = b.mul(&y[j].1).ok_or(Overflow)?;
            out.push((y[j].0, v.neg().ok_or(Overflow)?));
            j += 1;
        } else {
            let l = a.mul(&x[i].1).ok_or(Overflow)?;
            let r = b.mul(&y[j].1).ok_or(Overflow)?;
            let v = l.sub(&r).ok_or(Overflow)?;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// Incremental fraction-free semi-echelon basis of integer rows.
#[derive(Clone, Debug, Default)]
pub struct IntEchelon<T> {
    rows: Vec<IntRow<T>>,
    pivots: HashMap<u32, usize>,
}

impl<T: EchelonInt> IntEchelon<T> {
    pub fn new() -> Self {
        IntEchelon { rows: Vec::new(), pivots: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn rows(&self) -> &[IntRow<T>] {
        &self.rows
    }

    /// Reduces `row` against the stored pivots; the result is primitive.
    pub fn reduce(&self, row: IntRow<T>) -> Result<IntRow<T>, Overflow> {
        let mut r = make_primitive(row);
        let mut start = 0usize;
        loop {
            let hit = r[start..].iter().position(|(c, _)| self.pivots.contains_key(c)).map(|k| k + start);
            let Some(k) = hit else { break };
            let (col, a) = (r[k].0, r[k].1.clone());
            let p = &self.rows[self.pivots[&col]];
            let b = &p[0].1;
            let g = a.gcd(b);
            let (bb, aa) = (b.div_exact(&g), a.div_exact(&g));
            r = make_primitive(combine(&bb, &r, &aa, p)?);
            // columns before `col` are untouched by the pivot row
            start = r.partition_point(|(c, _)| *c <= col);
        }
        Ok(r)
    }

    /// Inserts a row; returns whether it was independent of the stored rows.
    pub fn insert(&mut self, row: IntRow<T>) -> Result<bool, Overflow> {
        let r = self.reduce(row)?;
        if r.is_empty() {
            return Ok(false);
        }
        // keep the stored row keyed by its leading column
        let lead = r[0].0;
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(r);
        Ok(true)
    }
}

/// Rank of integer rows; tries `i128` and restarts with `BigInt` on overflow.
pub fn integer_rank(rows: impl Iterator<Item = IntRow<BigInt>>) -> usize {
    let rows: Vec<IntRow<BigInt>> = rows.collect();
    let mut small: IntEchelon<i128> = IntEchelon::new();
    let fast = rows.iter().try_for_each(|r| {
        let conv: Option<IntRow<i128>> = r.iter().map(|(c, v)| i128::from_big(v).map(|x| (*c, x))).collect();
        small.insert(conv.ok_or(Overflow)?).map(|_| ())
    });
    if fast.is_ok() {
        return small.rank();
    }
    let mut big: IntEchelon<BigInt> = IntEchelon::new();
    for r in rows {
        big.insert(r).expect("BigInt arithmetic cannot overflow");
    }
    big.rank()
}

/// Default prime for modular elimination (largest prime below 2^32).
pub const DEFAULT_PRIME: u64 = 4_294_967_291;

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Semi-echelon basis modulo a prime below 2^32; rows stored monic.
/// Ranks computed here are lower bounds for ranks over the rationals.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    p: u64,
    rows: Vec<Vec<(u32, u64)>>,
    pivots: HashMap<u32, usize>,
}

impl ModEchelon {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 32));
        ModEchelon { p, rows: Vec::new(), pivots: HashMap::new() }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn inv(&self, a: u64) -> u64 {
        mod_pow(a, self.p - 2, self.p)
    }

    pub fn insert(&mut self, row: Vec<(u32, u64)>) -> bool {
        let p = self.p;
        let mut r: Vec<(u32, u64)> = row.into_iter().filter(|e| e.1 % p != 0).map(|(c, v)| (c, v % p)).collect();
        let mut start = 0usize;
        loop {
            let hit = r[start..].iter().position(|(c, _)| self.pivots.contains_key(c)).map(|k| k + start);
            let Some(k) = hit else { break };
            let (col, a) = r[k];
            let piv = &self.rows[self.pivots[&col]];
            let neg = p - a;
            let mut out = Vec::with_capacity(r.len() + piv.len());
            let (mut i, mut j) = (0, 0);
            while i < r.len() || j < piv.len() {
                if j == piv.len() || (i < r.len() && r[i].0 < piv[j].0) {
                    out.push(r[i]);
                    i += 1;
                } else if i == r.len() || piv[j].0 < r[i].0 {
                    out.push((piv[j].0, neg * piv[j].1 % p));
                    j += 1;
                } else {
                    let v = (r[i].1 + neg * piv[j].1 % p) % p;
                    if v != 0 {
                        out.push((r[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            r = out;
            start = r.partition_point(|(c, _)| *c <= col);
        }
        if r.is_empty() {
            return false;
        }
        let inv = self.inv(r[0].1);
        for e in r.iter_mut() {
            e.1 = e.1 * inv % p;
        }
        self.pivots.insert(r[0].0, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn insert_int<T: EchelonInt>(&mut self, row: &[(u32, T)]) -> bool {
        let p = self.p;
        self.insert(row.iter().map(|(c, v)| (*c, v.mod_p(p))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> IntRow<i128> {
        v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i as u32, *x as i128)).collect()
    }

    #[test]
    fn integer_engine_rank() {
        let mut e: IntEchelon<i128> = IntEchelon::new();
        assert!(e.insert(row(&[2, 4, 0])).unwrap());
        assert!(!e.insert(row(&[1, 2, 0])).unwrap());
        assert!(e.insert(row(&[3, 1, 5])).unwrap());
        assert!(!e.insert(row(&[5, 5, 5])).unwrap());
        assert!(!e.insert(row(&[0, 0, 0])).unwrap());
        assert_eq!(e.rank(), 2);
        assert!(e.reduce(row(&[1, 2, 0])).unwrap().is_empty());
    }

    #[test]
    fn overflow_falls_back() {
        let huge = BigInt::from(i128::MAX) * BigInt::from(4);
        let rows =
            vec![vec![(0u32, huge.clone()), (1, BigInt::from(1))], vec![(0u32, BigInt::from(1)), (1, BigInt::from(3))]];
        assert_eq!(integer_rank(rows.into_iter()), 2);
    }

    #[test]
    fn modular_engine() {
        let mut m = ModEchelon::new(DEFAULT_PRIME);
        assert!(m.insert(vec![(0, 2), (1, 4)]));
        assert!(!m.insert(vec![(0, 1), (1, 2)]));
        assert!(m.insert_int(&[(1u32, -3i128), (2, 7)]));
        assert_eq!(m.rank(), 2);
        // 7 is invertible modulo p but the rows are multiples of p over Z
        let mut small = ModEchelon::new(7);
        assert!(!small.insert(vec![(0, 7)]));
    }
}
