use std::fmt;

use serde::Serialize;

/// w_{i_0} x_{σ(1)} w_{i_1} ⋯ x_{σ(n)} w_{i_n}; index 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GenMonomial {
    /// σ(1), …, σ(n) as variable indices 1..=n.
    pub perm: Vec<u32>,
    /// i_0, …, i_n.
    pub coeffs: Vec<usize>,
}

impl GenMonomial {
    pub fn degree(&self) -> usize {
        self.perm.len()
    }
}

impl fmt::Display for GenMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                parts.push(format!("w{c}"));
            }
            if let Some(x) = self.perm.get(k) {
                parts.push(format!("x{x}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// n!·s^{n+1}, or None on overflow.
pub fn monomial_count(n: usize, s: usize) -> Option<u128> {
    let mut fact: u128 = 1;
    for k in 2..=n as u128 {
        fact = fact.checked_mul(k)?;
    }
    fact.checked_mul((s as u128).checked_pow(n as u32 + 1)?)
}

/// Position in the order of [`enumerate_basis`]: permutations
/// lexicographically, then coefficient tuples as base-s numerals.
pub fn monomial_index(m: &GenMonomial, s: usize) -> usize {
    let n = m.perm.len();
    let mut rank = 0usize;
    let mut fact: Vec<usize> = vec![1; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k;
    }
    for i in 0..n {
        let smaller = m.perm[i + 1..].iter().filter(|&&v| v < m.perm[i]).count();
        rank += smaller * fact[n - 1 - i];
    }
    let c = m.coeffs.iter().fold(0usize, |acc, &i| acc * s + i);
    rank * s.pow(n as u32 + 1) + c
}

/// Inverse of [`monomial_index`].
pub fn monomial_at(index: usize, n: usize, s: usize) -> GenMonomial {
    let per = s.pow(n as u32 + 1);
    let (mut rank, mut c) = (index / per, index % per);
    let mut coeffs = vec![0; n + 1];
    for k in (0..=n).rev() {
        coeffs[k] = c % s;
        c /= s;
    }
    let mut fact: Vec<usize> = vec![1; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k;
    }
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    let mut perm = Vec::with_capacity(n);
    for i in 0..n {
        let f = fact[n - 1 - i];
        perm.push(pool.remove(rank / f));
        rank %= f;
    }
    GenMonomial { perm, coeffs }
}

fn next_permutation(p: &mut [u32]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All multilinear monomials of degree n over an alphabet of size s.
pub fn enumerate_basis(n: usize, s: usize) -> impl Iterator<Item = GenMonomial> {
    let mut perms = Vec::new();
    let mut p: Vec<u32> = (1..=n as u32).collect();
    loop {
        perms.push(p.clone());
        if !next_permutation(&mut p) {
            break;
        }
    }
    let per = s.pow(n as u32 + 1);
    perms.into_iter().flat_map(move |perm| {
        (0..per).map(move |mut c| {
            let mut coeffs = vec![0; n + 1];
            for k in (0..=n).rev() {
                coeffs[k] = c % s;
                c /= s;
            }
            GenMonomial { perm: perm.clone(), coeffs }
        })
    })
}
