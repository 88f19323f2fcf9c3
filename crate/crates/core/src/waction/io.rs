use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::presets::action_from_vectors;
use super::{make_action, ActingHom};
use crate::algebra::io::{rat_to_value, value_to_rat};
use crate::algebra::{AlgebraFile, AlgebraRef, LinOp, StructureAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, SparseVec};
use crate::multiplier::Multiplier;

/// One operator pair; matrices are row lists, column j is the image of e_j.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PairFile {
    #[serde(rename = "R")]
    pub r: Vec<Vec<Value>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<Value>>,
}

/// JSON form of an action. `algebra` and `W` are builtin names, paths, or
/// inline algebra objects.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ActionFile {
    pub algebra: Value,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Value>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairFile>>,
    #[serde(default)]
    pub kernel_tail: bool,
}

fn resolve_algebra(v: &Value, base: Option<&Path>) -> Result<StructureAlgebra> {
    match v {
        Value::String(s) => match (AlgebraRef::parse(s), base) {
            (AlgebraRef::Path(p), Some(dir)) if p.is_relative() && !p.is_file() => {
                AlgebraRef::Path(dir.join(p)).resolve()
            }
            (r, _) => r.resolve(),
        },
        Value::Object(_) => {
            let f: AlgebraFile =
                serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(format!("algebra object: {e}")))?;
            f.to_algebra()
        }
        _ => Err(Error::Invalid("algebra must be a name, a path or an object".into())),
    }
}

fn matrix(rows: &[Vec<Value>], n: usize) -> Result<LinOp> {
    let rows =
        rows.iter().map(|r| r.iter().map(value_to_rat).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    if rows.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rows.len() });
    }
    LinOp::from_matrix(&RatMatrix::from_rows(n, rows)?)
}

fn matrix_value(op: &LinOp) -> Vec<Vec<Value>> {
    let m = op.to_matrix();
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| rat_to_value(m.get(i, j))).collect()).collect()
}

impl ActionFile {
    /// Pairs-mode description of a validated action.
    pub fn from_action(h: &ActingHom) -> Self {
        ActionFile {
            algebra: serde_json::to_value(AlgebraFile::from_algebra(h.a())).expect("serializable"),
            w: Some(serde_json::to_value(AlgebraFile::from_algebra(h.w())).expect("serializable")),
            mode: "pairs".into(),
            basis: None,
            labels: None,
            pairs: Some(h.pairs().iter().map(|p| PairFile { r: matrix_value(&p.r), l: matrix_value(&p.l) }).collect()),
            kernel_tail: h.kernel_tail(),
        }
    }

    /// `base` is used to resolve relative algebra paths.
    pub fn to_action(&self, base: Option<&Path>) -> Result<ActingHom> {
        let a = resolve_algebra(&self.algebra, base)?;
        match self.mode.as_str() {
            "subalgebra" => {
                let basis = self.basis.as_ref().ok_or_else(|| Error::Invalid("subalgebra mode needs basis".into()))?;
                let vecs = basis
                    .iter()
                    .map(|row| {
                        if row.len() != a.dim() {
                            return Err(Error::DimensionMismatch { expected: a.dim(), found: row.len() });
                        }
                        let v = row.iter().map(value_to_rat).collect::<Result<Vec<_>>>()?;
                        Ok(SparseVec::from_dense(&v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let labels = match &self.labels {
                    Some(l) => l.clone(),
                    None => vecs.iter().map(|v| a.format_vector(v)).collect(),
                };
                let h = action_from_vectors(&a, &vecs, labels, self.kernel_tail)?;
                if let Some(wv) = &self.w {
                    let w = resolve_algebra(wv, base)?;
                    if w.constants() != h.w().constants() || w.dim() != h.w().dim() {
                        return Err(Error::BasisMismatch("declared W does not match the subalgebra".into()));
                    }
                }
                Ok(h)
            }
            "pairs" => {
                let w =
                    resolve_algebra(self.w.as_ref().ok_or_else(|| Error::Invalid("pairs mode needs W".into()))?, base)?;
                let pairs = self
                    .pairs
                    .as_ref()
                    .ok_or_else(|| Error::Invalid("pairs mode needs pairs".into()))?
                    .iter()
                    .map(|p| Multiplier::new(matrix(&p.r, a.dim())?, matrix(&p.l, a.dim())?))
                    .collect::<Result<Vec<_>>>()?;
                make_action(w, a, pairs, self.kernel_tail)
            }
            m => Err(Error::Invalid(format!("unknown mode {m:?}"))),
        }
    }

    pub fn parse(json: &str, base: Option<&Path>) -> Result<ActingHom> {
        let f: ActionFile = serde_json::from_str(json).map_err(|e| Error::Invalid(format!("action JSON: {e}")))?;
        f.to_action(base)
    }
}
