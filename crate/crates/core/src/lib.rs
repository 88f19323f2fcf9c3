pub mod algebra;
pub mod codim;
pub mod error;
pub mod genpoly;
pub mod linalg;
pub mod multiplier;
pub mod structure;
pub mod waction;

pub use error::{Error, Result};

/// Outcome of a property check, with a human-readable witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict { holds: true, witness: None }
    }

    pub fn fails(witness: impl Into<String>) -> Self {
        Verdict { holds: false, witness: Some(witness.into()) }
    }
}
