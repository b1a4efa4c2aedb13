use serde::Serialize;

use crate::rational::{serde_q, Q};
use crate::setalg::{BlockSequence, FiniteIndexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Set(FiniteIndexSet),
    Blocks(BlockSequence),
}

/// Result of a search. `value` is the witness's value when one is found and
/// otherwise the best value seen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub witness: Option<Witness>,
    #[serde(with = "serde_q")]
    pub value: Q,
    /// Candidates whose full value was computed, counted in canonical order.
    pub sets_examined: u64,
    /// 0-based position of the witness in the enumeration order.
    pub canonical_rank: Option<u64>,
    /// Every candidate was examined and none met the bound.
    pub exhaustive: bool,
    /// The gap bound is below the one the theorems guarantee.
    pub exploratory: bool,
    /// Candidates passed through a cheap screen (staged search only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sets_screened: Option<u64>,
    /// Insertions applied (perturbation search only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moves_applied: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }

    pub fn witness_set(&self) -> Option<&FiniteIndexSet> {
        match &self.witness {
            Some(Witness::Set(s)) => Some(s),
            _ => None,
        }
    }

    pub fn witness_blocks(&self) -> Option<&BlockSequence> {
        match &self.witness {
            Some(Witness::Blocks(b)) => Some(b),
            _ => None,
        }
    }
}
