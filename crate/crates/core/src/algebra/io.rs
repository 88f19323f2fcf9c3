use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{builtin, StructureAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{format_rat, parse_rat, Rat};

/// JSON form of an algebra: only nonzero constants are listed, as exact
/// rational strings ("p/q"); integers are also accepted on input.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraFile {
    pub dim: usize,
    pub labels: Vec<String>,
    #[serde(default)]
    pub unit: Option<Vec<Value>>,
    pub sc: Vec<(usize, usize, usize, Value)>,
}

pub(crate) fn value_to_rat(v: &Value) -> Result<Rat> {
    let parsed = match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => n.as_i64().map(crate::linalg::rat),
        _ => None,
    };
    parsed.ok_or_else(|| Error::Invalid(format!("not an exact rational: {v}")))
}

pub(crate) fn rat_to_value(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

impl AlgebraFile {
    pub fn from_algebra(a: &StructureAlgebra) -> Self {
        AlgebraFile {
            dim: a.dim(),
            labels: a.labels().to_vec(),
            unit: a.unit().map(|u| u.to_dense(a.dim()).iter().map(rat_to_value).collect()),
            sc: a.constants().iter().map(|(i, j, k, c)| (*i, *j, *k, rat_to_value(c))).collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<StructureAlgebra> {
        if self.labels.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: self.labels.len() });
        }
        let sc = self.sc.iter().map(|(i, j, k, v)| Ok((*i, *j, *k, value_to_rat(v)?))).collect::<Result<Vec<_>>>()?;
        let unit = match &self.unit {
            Some(u) => Some(u.iter().map(value_to_rat).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        StructureAlgebra::new(self.labels.clone(), sc, unit)
    }

    pub fn parse(json: &str) -> Result<StructureAlgebra> {
        let f: AlgebraFile = serde_json::from_str(json).map_err(|e| Error::Invalid(format!("algebra JSON: {e}")))?;
        f.to_algebra()
    }
}

/// Reference to an algebra by builtin name, JSON file path, or inline JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraRef {
    Name(String),
    Path(std::path::PathBuf),
}

impl AlgebraRef {
    pub fn parse(s: &str) -> AlgebraRef {
        if s.ends_with(".json") || std::path::Path::new(s).is_file() {
            AlgebraRef::Path(s.into())
        } else {
            AlgebraRef::Name(s.to_string())
        }
    }

    pub fn resolve(&self) -> Result<StructureAlgebra> {
        match self {
            AlgebraRef::Name(n) => builtin(n),
            AlgebraRef::Path(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))?;
                AlgebraFile::parse(&text)
            }
        }
    }
}
