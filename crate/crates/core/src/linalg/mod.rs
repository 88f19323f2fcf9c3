//! Exact rational linear algebra.
//!
//! Dense matrices are used for small constraint systems; evaluation matrices
//! use the sparse integer engines in [`echelon`]. Pivoting is always "first
//! nonzero in column order" so results are reproducible.

mod dense;
pub mod echelon;
mod sparse;
mod subspace;

pub use dense::RatMatrix;
pub use sparse::{SparseMatrix, SparseVec};
pub use subspace::Subspace;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Matrices with at most this many entries are handled densely by
/// [`rank`] and [`left_kernel_basis`]; larger inputs go through the
/// sparse row engine.
pub const DENSE_THRESHOLD: usize = 4096;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses "p", "-p" or "p/q".
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators of `v` (1 for an empty slice).
pub fn common_denominator<'a>(v: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    v.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales `v` to a primitive integer vector with positive leading entry.
pub fn primitive_integer_row(v: &[Rat]) -> Vec<BigInt> {
    let d = common_denominator(v);
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    let g = out.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        let lead_neg = out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        for x in out.iter_mut() {
            *x = &*x / &g;
            if lead_neg {
                *x = -&*x;
            }
        }
    }
    out
}

pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

pub fn left_kernel_basis(m: &RatMatrix) -> Subspace {
    m.left_kernel_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["0", "3", "-7", "1/2", "-5/3"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("4/2").unwrap(), rat(2));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn primitive_rows() {
        let v = vec![ratio(-1, 2), ratio(1, 3), rat(0)];
        let p = primitive_integer_row(&v);
        assert_eq!(p, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
    }
}
