use std::fmt;
use std::str::FromStr;

use num_traits::One;

use super::{make_action, ActingHom, ActionFamily};
use crate::algebra::{builtin, unit_vec, AlgElement, StructureAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Rat, SparseVec};
use crate::multiplier::Multiplier;

/// W = span(B) ⊆ A acting by left and right multiplication.
pub fn action_from_subalgebra(a: &StructureAlgebra, basis: &[AlgElement], labels: Vec<String>) -> Result<ActingHom> {
    let vecs = basis
        .iter()
        .map(|b| {
            if b.parent() != a.id() {
                return Err(Error::ParentMismatch);
            }
            Ok(SparseVec::from_dense(b.coords()))
        })
        .collect::<Result<Vec<_>>>()?;
    action_from_vectors(a, &vecs, labels, false)
}

pub(crate) fn action_from_vectors(
    a: &StructureAlgebra,
    basis: &[SparseVec],
    labels: Vec<String>,
    kernel_tail: bool,
) -> Result<ActingHom> {
    if labels.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), found: labels.len() });
    }
    let w = a.subalgebra(basis, labels)?;
    let pairs = basis.iter().map(|b| Multiplier::inner(a, b)).collect();
    make_action(w, a.clone(), pairs, kernel_tail)
}

/// The field acting by scalars.
pub fn ordinary_action(a: StructureAlgebra) -> Result<ActingHom> {
    let f = StructureAlgebra::new(vec!["1".into()], vec![(0, 0, 0, Rat::one())], Some(vec![Rat::one()]))?;
    let n = a.dim();
    make_action(f, a, vec![Multiplier::identity(n)], false)
}

/// A acting on itself by multiplication.
pub fn full_action(a: StructureAlgebra) -> Result<ActingHom> {
    let basis: Vec<SparseVec> = (0..a.dim()).map(unit_vec).collect();
    action_from_vectors(&a, &basis, a.labels().to_vec(), false)
}

/// Named actions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Ut2F,
    Ut2D,
    Ut2C,
    Ut2Full,
    GrassmannEk { k: usize, m: usize },
    GrassmannFull(usize),
    Ordinary(String),
    Full(String),
}

impl FromStr for Preset {
    type Err = Error;

    /// Besides the fixed names, accepts `ordinary:<algebra>` and
    /// `full:<algebra>` for any builtin algebra.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnsupportedName(s.to_string());
        let args = |rest: &str| -> Result<Vec<usize>> {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .or_else(|| rest.strip_prefix(':'))
                .ok_or_else(bad)?;
            inner.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        match s {
            "ut2F" => return Ok(Preset::Ut2F),
            "ut2D" => return Ok(Preset::Ut2D),
            "ut2C" => return Ok(Preset::Ut2C),
            "ut2full" => return Ok(Preset::Ut2Full),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("grassmann_Ek") {
            return match args(rest)?.as_slice() {
                [k, m] if k <= m && *m <= 16 => Ok(Preset::GrassmannEk { k: *k, m: *m }),
                _ => Err(bad()),
            };
        }
        if let Some(rest) = s.strip_prefix("grassmann_full") {
            return match args(rest)?.as_slice() {
                [m] if *m <= 16 => Ok(Preset::GrassmannFull(*m)),
                _ => Err(bad()),
            };
        }
        if let Some(rest) = s.strip_prefix("ordinary:") {
            rest.parse::<crate::algebra::Builtin>()?;
            return Ok(Preset::Ordinary(rest.to_string()));
        }
        if let Some(rest) = s.strip_prefix("full:") {
            rest.parse::<crate::algebra::Builtin>()?;
            return Ok(Preset::Full(rest.to_string()));
        }
        Err(bad())
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Ut2F => write!(f, "ut2F"),
            Preset::Ut2D => write!(f, "ut2D"),
            Preset::Ut2C => write!(f, "ut2C"),
            Preset::Ut2Full => write!(f, "ut2full"),
            Preset::GrassmannEk { k, m } => write!(f, "grassmann_Ek({k},{m})"),
            Preset::GrassmannFull(m) => write!(f, "grassmann_full({m})"),
            Preset::Ordinary(a) => write!(f, "ordinary:{a}"),
            Preset::Full(a) => write!(f, "full:{a}"),
        }
    }
}

impl Preset {
    pub fn build(&self) -> Result<ActingHom> {
        let ut2 = || builtin("ut:2");
        // ut(2) basis: e11, e22, e12
        let one = SparseVec::from_dense(&[Rat::one(), Rat::one(), Rat::from_integer(0.into())]);
        let labels = |ls: &[&str]| ls.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match self {
            Preset::Ut2F => action_from_vectors(&ut2()?, &[one], labels(&["1"]), false),
            Preset::Ut2D => action_from_vectors(&ut2()?, &[one, unit_vec(1)], labels(&["1", "e22"]), false),
            Preset::Ut2C => action_from_vectors(&ut2()?, &[one, unit_vec(2)], labels(&["1", "e12"]), false),
            Preset::Ut2Full => {
                action_from_vectors(&ut2()?, &[one, unit_vec(1), unit_vec(2)], labels(&["1", "e22", "e12"]), false)
            }
            Preset::GrassmannEk { k, m } => grassmann_action(*k, *m, true),
            Preset::GrassmannFull(m) => grassmann_action(*m, *m, false),
            Preset::Ordinary(a) => ordinary_action(builtin(a)?),
            Preset::Full(a) => full_action(builtin(a)?),
        }
    }
}

/// E_k ⊆ E_m acting by multiplication; generators beyond e_k act as zero.
fn grassmann_action(k: usize, m: usize, kernel_tail: bool) -> Result<ActingHom> {
    let a = builtin(&format!("grassmann_unital:{m}"))?;
    let w = builtin(&format!("grassmann_unital:{k}"))?;
    let basis = w
        .labels()
        .iter()
        .map(|l| a.label_index(l).map(unit_vec).ok_or_else(|| Error::Internal(format!("missing word {l}"))))
        .collect::<Result<Vec<_>>>()?;
    let h = action_from_vectors(&a, &basis, w.labels().to_vec(), kernel_tail)?;
    Ok(h.with_family(ActionFamily::Grassmann { k, m }))
}

/// Builds a named action; see [`Preset`] for accepted names.
pub fn preset(name: &str) -> Result<ActingHom> {
    name.parse::<Preset>()?.build()
}
