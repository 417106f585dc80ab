//! Closed-form addition and multiplication counts.
//!
//! These are analytical tallies, not instrumented counts of this crate's
//! arithmetic. Each algorithm total already includes its linear solve.

use serde::Serialize;

use crate::error::{Error, Result};

/// Cost of one natural logarithm and one exponential, in additions and
/// multiplications.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CostModel {
    pub a_ln: u64,
    pub m_ln: u64,
    pub a_exp: u64,
    pub m_exp: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpCount {
    pub additions: u64,
    pub multiplications: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModeledAlgorithm {
    Guo,
    Roonizi,
    Fas,
}

impl ModeledAlgorithm {
    pub const ALL: [ModeledAlgorithm; 3] = [
        ModeledAlgorithm::Guo,
        ModeledAlgorithm::Roonizi,
        ModeledAlgorithm::Fas,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModeledAlgorithm::Guo => "guo",
            ModeledAlgorithm::Roonizi => "roonizi",
            ModeledAlgorithm::Fas => "fas",
        }
    }
}

/// Operation count for fitting `n` observations.
pub fn op_counts(algorithm: ModeledAlgorithm, n: u64, model: &CostModel) -> Result<OpCount> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let count = match algorithm {
        ModeledAlgorithm::Guo => OpCount {
            additions: n * (model.a_ln + 8) + 3,
            multiplications: n * (model.m_ln + 11) + 17,
        },
        // n (n + 19) is always even, so 0.5 n^2 + 9.5 n is an integer.
        ModeledAlgorithm::Roonizi => OpCount {
            additions: n * n + 8 * n + n * model.a_exp - 5,
            multiplications: n * (n + 19) / 2 + n * model.m_exp + 9,
        },
        ModeledAlgorithm::Fas => OpCount {
            additions: n * (model.a_ln + 8) - 3,
            multiplications: n * (model.m_ln + 10) + 12,
        },
    };
    Ok(count)
}

/// Cost of Gauss elimination on an `n x n` system.
pub fn gauss_elimination_cost(n: u64) -> Result<OpCount> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    Ok(OpCount {
        additions: (2 * n * n * n + 3 * n * n - 5 * n) / 6,
        multiplications: (n * n * n + 3 * n * n - n) / 3,
    })
}
