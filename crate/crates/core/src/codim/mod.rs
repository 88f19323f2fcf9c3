//! Generalized codimensions: evaluation matrices, identity kernels,
//! consequence spans, containment of varieties and growth.

mod consequences;
mod eval;

pub use consequences::{consequences_span, verify_generating_set, ConsequenceMode, GenerationCheck};

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genpoly::{monomial_at, monomial_count};
use crate::linalg::echelon::{make_primitive, IntEchelon, IntRow};
use crate::linalg::{format_rat, Rat, SparseMatrix, SparseVec, Subspace};
use crate::multiplier::Multiplier;
use crate::structure::pi_exponent;
use crate::waction::{preset, ActingHom};

use eval::{columns_for, for_each_row, is_zero_row, to_rat_row, Columns, IntModel};

/// Default cap on evaluation-matrix rows.
pub const DEFAULT_MAX_ROWS: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_rows: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_rows: DEFAULT_MAX_ROWS }
    }
}

impl Budget {
    /// Default budget, overridden by `GENPI_MAX_ROWS` when set to a positive
    /// integer.
    pub fn from_env() -> Self {
        match std::env::var("GENPI_MAX_ROWS").ok().and_then(|v| v.trim().parse::<u128>().ok()) {
            Some(r) if r > 0 => Budget { max_rows: r },
            _ => Budget::default(),
        }
    }

    fn check(&self, rows: u128, cols: u128) -> Result<()> {
        if rows > self.max_rows {
            return Err(Error::BudgetExceeded { rows, cols, limit: self.max_rows });
        }
        Ok(())
    }
}

/// Rows and columns of the degree-n evaluation matrix.
pub fn matrix_shape(h: &ActingHom, n: usize) -> (u128, u128) {
    let s = h.effective_image().alphabet_size();
    let dim = h.a().dim();
    let rows = monomial_count(n, s).unwrap_or(u128::MAX);
    let cols = columns_for(h, n).count(dim, n).saturating_mul(dim as u128);
    (rows, cols)
}

/// Materialized evaluation matrix; row r is the monomial of index r in the
/// order of [`crate::genpoly::enumerate_basis`] over the effective alphabet.
#[derive(Clone, Debug)]
pub struct EvaluationMatrix {
    pub degree: usize,
    pub alphabet_size: usize,
    pub nrows: usize,
    pub ncols: usize,
    /// Integer rows; the exact row is row / scale.
    rows: Vec<IntRow<i128>>,
    scales: Vec<BigInt>,
}

impl EvaluationMatrix {
    pub fn row(&self, r: usize) -> SparseVec {
        to_rat_row(&self.rows[r], &self.scales[r])
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let rows = (0..self.nrows).map(|r| self.row(r)).collect();
        SparseMatrix::from_rows(self.ncols, rows).expect("columns in range")
    }

    pub fn rank(&self) -> usize {
        exact_rank(self.rows.iter().cloned())
    }
}

fn row_scales(model: &IntModel, n: usize) -> Vec<BigInt> {
    let s = model.letters();
    let per = s.pow(n as u32 + 1);
    let blocks = crate::genpoly::monomial_count(n, s).unwrap_or(0) as usize / per.max(1);
    let mut one_block = Vec::with_capacity(per);
    for c in 0..per {
        let mut coeffs = vec![0; n + 1];
        let mut x = c;
        for k in (0..=n).rev() {
            coeffs[k] = x % s;
            x /= s;
        }
        one_block.push(model.row_scale(&coeffs));
    }
    (0..blocks).flat_map(|_| one_block.iter().cloned()).collect()
}

pub fn evaluation_matrix(h: &ActingHom, n: usize, budget: &Budget) -> Result<EvaluationMatrix> {
    let eff = h.effective_image();
    evaluation_matrix_with(h, &eff.alphabet, columns_for(h, n), n, budget)
}

fn evaluation_matrix_with(
    h: &ActingHom,
    letters: &[Multiplier],
    cols: Columns,
    n: usize,
    budget: &Budget,
) -> Result<EvaluationMatrix> {
    if n == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    let dim = h.a().dim();
    let nrows = monomial_count(n, letters.len()).unwrap_or(u128::MAX);
    let ncols = cols.count(dim, n).saturating_mul(dim as u128);
    budget.check(nrows, ncols)?;
    if ncols > u32::MAX as u128 {
        return Err(Error::BudgetExceeded { rows: nrows, cols: ncols, limit: budget.max_rows });
    }
    let model = IntModel::new(h.a(), letters)?;
    let mut rows = Vec::with_capacity(nrows as usize);
    for_each_row(&model, &cols, n, |_, r| {
        rows.push(r);
        Ok(())
    })?;
    Ok(EvaluationMatrix {
        degree: n,
        alphabet_size: letters.len(),
        nrows: nrows as usize,
        ncols: ncols as usize,
        rows,
        scales: row_scales(&model, n),
    })
}

/// Exact rank of integer rows: duplicates and zero rows are skipped, `i128`
/// elimination falls back to big integers on overflow.
fn exact_rank(rows: impl Iterator<Item = IntRow<i128>>) -> usize {
    let mut seen: HashSet<IntRow<i128>> = HashSet::new();
    let mut small: IntEchelon<i128> = IntEchelon::new();
    let mut kept: Vec<IntRow<i128>> = Vec::new();
    let mut overflowed = false;
    for r in rows {
        if is_zero_row(&r) {
            continue;
        }
        let r = make_primitive(r);
        if !seen.insert(r.clone()) {
            continue;
        }
        if !overflowed && small.insert(r.clone()).is_err() {
            overflowed = true;
        }
        kept.push(r);
    }
    if !overflowed {
        return small.rank();
    }
    let mut big: IntEchelon<BigInt> = IntEchelon::new();
    for r in kept {
        big.insert(r.into_iter().map(|(c, x)| (c, BigInt::from(x))).collect()).expect("big integers do not overflow");
    }
    big.rank()
}

/// Streams the evaluation matrix into exact elimination without storing it.
fn streamed_rank(h: &ActingHom, letters: &[Multiplier], cols: Columns, n: usize, budget: &Budget) -> Result<usize> {
    if n == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    let dim = h.a().dim();
    let nrows = monomial_count(n, letters.len()).unwrap_or(u128::MAX);
    let ncols = cols.count(dim, n).saturating_mul(dim as u128);
    budget.check(nrows, ncols)?;
    let model = IntModel::new(h.a(), letters)?;
    let mut collected = Vec::new();
    let mut seen: HashSet<IntRow<i128>> = HashSet::new();
    for_each_row(&model, &cols, n, |_, r| {
        if !is_zero_row(&r) {
            let r = make_primitive(r);
            if seen.insert(r.clone()) {
                collected.push(r);
            }
        }
        Ok(())
    })?;
    drop(seen);
    Ok(exact_rank(collected.into_iter()))
}

/// c_n^W(A): rank of the degree-n evaluation matrix.
pub fn codimension(h: &ActingHom, n: usize, budget: &Budget) -> Result<usize> {
    let eff = h.effective_image();
    streamed_rank(h, &eff.alphabet, columns_for(h, n), n, budget)
}

/// Multilinear identities of degree n as coefficient vectors over the
/// monomial basis (left kernel of the evaluation matrix).
pub fn identity_kernel_basis(h: &ActingHom, n: usize, budget: &Budget) -> Result<Subspace> {
    let m = evaluation_matrix(h, n, budget)?;
    Ok(m.to_sparse().left_kernel_basis())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentReport {
    pub holds: bool,
    /// (degree, rank of E_A, rank of [E_A | E_B]) per degree checked.
    pub ranks: Vec<(usize, usize, usize)>,
    pub failing_degree: Option<usize>,
}

/// Whether Id^W(A) ⊆ Id^W(B) in every multilinear degree ≤ n. Rows are
/// indexed by monomials over the shared W basis, whose first element must act
/// as the identity on both algebras.
pub fn variety_contains(ha: &ActingHom, hb: &ActingHom, n: usize, budget: &Budget) -> Result<ContainmentReport> {
    if ha.w() != hb.w() {
        return Err(Error::BasisMismatch(format!(
            "different W presentations: {:?} vs {:?}",
            ha.w().labels(),
            hb.w().labels()
        )));
    }
    for h in [ha, hb] {
        if h.pairs().first() != Some(&Multiplier::identity(h.a().dim())) {
            return Err(Error::BasisMismatch("w0 must act as the identity".into()));
        }
    }
    let mut ranks = Vec::new();
    for d in 1..=n {
        let ea = evaluation_matrix_with(ha, ha.pairs(), columns_for(ha, d), d, budget)?;
        let eb = evaluation_matrix_with(hb, hb.pairs(), columns_for(hb, d), d, budget)?;
        let ra = ea.rank();
        let off = ea.ncols as u32;
        let joint = ea.rows.iter().zip(&eb.rows).enumerate().map(|(r, (x, y))| {
            // bring both halves to a common row scale
            let (sa, sb) = (&ea.scales[r], &eb.scales[r]);
            let fa: i128 = i128::try_from(sb).unwrap_or(1);
            let fb: i128 = i128::try_from(sa).unwrap_or(1);
            let mut row: IntRow<i128> = x.iter().map(|(c, v)| (*c, v * fa)).collect();
            row.extend(y.iter().map(|(c, v)| (c + off, v * fb)));
            row
        });
        let rab = exact_rank(joint);
        ranks.push((d, ra, rab));
        if rab != ra {
            return Ok(ContainmentReport { holds: false, ranks, failing_degree: Some(d) });
        }
    }
    Ok(ContainmentReport { holds: true, ranks, failing_degree: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizedCodim {
    pub k: usize,
    pub n: usize,
    pub value: usize,
    /// (truncation M, codimension) for every level computed.
    pub levels: Vec<(usize, usize)>,
}

/// Codimension of E^{(k)} at degree n, increasing the truncation M from
/// 2n + k until two consecutive values agree.
pub fn grassmann_codim_stabilized(k: usize, n: usize, budget: &Budget) -> Result<StabilizedCodim> {
    if k == 0 || n == 0 {
        return Err(Error::Invalid("k and n must be positive".into()));
    }
    let mut levels: Vec<(usize, usize)> = Vec::new();
    let mut m = 2 * n + k;
    loop {
        if m > 16 {
            return Err(Error::BudgetExceeded { rows: 0, cols: 1 << m, limit: budget.max_rows });
        }
        let h = preset(&format!("grassmann_Ek({k},{m})"))?;
        let c = codimension(&h, n, budget)?;
        if let Some(&(_, prev)) = levels.last() {
            if prev == c {
                levels.push((m, c));
                return Ok(StabilizedCodim { k, n, value: c, levels });
            }
        }
        levels.push((m, c));
        m += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub degrees: Vec<usize>,
    /// None where the degree exceeded the budget.
    pub values: Vec<Option<usize>>,
    pub ratios: Vec<Option<f64>>,
    pub roots: Vec<Option<f64>>,
    /// exp(A) from the block structure, when A is split.
    pub exponent: Option<usize>,
}

pub fn growth_report(h: &ActingHom, n_max: usize, budget: &Budget) -> Result<GrowthReport> {
    let mut degrees = Vec::new();
    let mut values = Vec::new();
    for n in 1..=n_max {
        degrees.push(n);
        match codimension(h, n, budget) {
            Ok(c) => values.push(Some(c)),
            Err(Error::BudgetExceeded { .. }) => values.push(None),
            Err(e) => return Err(e),
        }
    }
    let ratios = (0..values.len())
        .map(|i| match (i.checked_sub(1).and_then(|j| values[j]), values[i]) {
            (Some(a), Some(b)) if a > 0 => Some(b as f64 / a as f64),
            _ => None,
        })
        .collect();
    let roots = values.iter().zip(&degrees).map(|(v, &n)| v.map(|c| (c as f64).powf(1.0 / n as f64))).collect();
    let exponent = pi_exponent(h.a()).ok();
    Ok(GrowthReport { degrees, values, ratios, roots, exponent })
}

/// Text form of a degree-n vector over the monomial basis; letters are
/// named after the W basis element they come from and the identity letter
/// is omitted. The output parses back with [`crate::genpoly::parse`].
pub fn format_identity(v: &SparseVec, n: usize, h: &ActingHom) -> String {
    let eff = h.effective_image();
    let s = eff.alphabet_size();
    let mut out = String::new();
    for (k, (idx, c)) in v.entries().iter().enumerate() {
        let m = monomial_at(*idx, n, s);
        let mut parts = Vec::new();
        for (j, &l) in m.coeffs.iter().enumerate() {
            if l != 0 {
                parts.push(format!("w{}", eff.alphabet_source[l].expect("non-identity letters come from W")));
            }
            if let Some(x) = m.perm.get(j) {
                parts.push(format!("x{x}"));
            }
        }
        let neg = c < &Rat::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        match (k == 0, neg) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        if !abs.is_one() {
            out.push_str(&format_rat(&abs));
            out.push('*');
        }
        out.push_str(&parts.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
