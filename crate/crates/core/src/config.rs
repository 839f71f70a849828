//! Config documents and process-level limits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{PsiSpec, SequenceSpec};

/// Environment variable overriding [`DEFAULT_CELL_CAP`].
pub const CELL_CAP_ENV: &str = "DIOPHLAB_CELL_CAP";

/// Default limit on the number of cells a single set construction may visit.
pub const DEFAULT_CELL_CAP: u64 = 100_000_000;

/// The cell cap in effect: `DIOPHLAB_CELL_CAP` if set and parseable, else the default.
pub fn cell_cap() -> u64 {
    std::env::var(CELL_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|v| *v >= 1.0)
        .map(|v| v as u64)
        .unwrap_or(DEFAULT_CELL_CAP)
}

/// `{"seq": {...}, "psi": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub seq: SequenceSpec,
    pub psi: PsiSpec,
}

impl Model {
    pub fn from_json(text: &str) -> Result<Self> {
        let model: Model = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        self.seq.validate()?;
        self.psi.validate()
    }

    /// Largest index at which both the sequence and `ψ` are defined.
    pub fn len(&self) -> Option<usize> {
        match (self.seq.len(), self.psi.len()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn check_index(&self, n: u64) -> Result<()> {
        match self.len() {
            Some(len) if n as usize > len || n == 0 => Err(Error::IndexOutOfRange { index: n, len }),
            _ => Ok(()),
        }
    }
}
