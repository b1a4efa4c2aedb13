use serde::{Deserialize, Serialize};

use super::FiniteIndexSet;
use crate::error::{Error, Result};

/// Pairwise disjoint non-empty blocks α_1, …, α_L: a finite truncation of an
/// IP ring, inducing β ↦ α_β = ⋃_{i∈β} α_i.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<FiniteIndexSet>", into = "Vec<FiniteIndexSet>")]
pub struct BlockSequence {
    blocks: Vec<FiniteIndexSet>,
}

impl BlockSequence {
    pub fn new(blocks: Vec<FiniteIndexSet>) -> Result<Self> {
        if let Some(i) = blocks.iter().position(FiniteIndexSet::is_empty) {
            return Err(Error::Domain(format!("block {} is empty", i + 1)));
        }
        let mut seen = std::collections::HashSet::new();
        for (i, b) in blocks.iter().enumerate() {
            for x in b.iter() {
                if !seen.insert(x) {
                    return Err(Error::Domain(format!(
                        "element {x} of block {} already used by an earlier block",
                        i + 1
                    )));
                }
            }
        }
        Ok(BlockSequence { blocks })
    }

    /// `({1}, {2}, …, {len})`.
    pub fn identity(len: u32) -> Self {
        BlockSequence {
            blocks: (1..=len).map(FiniteIndexSet::singleton).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[FiniteIndexSet] {
        &self.blocks
    }

    /// The block α_i, 1-based.
    pub fn block(&self, i: usize) -> &FiniteIndexSet {
        &self.blocks[i - 1]
    }

    pub fn support(&self) -> FiniteIndexSet {
        FiniteIndexSet::from_unsorted(self.blocks.iter().flat_map(|b| b.iter()))
    }

    /// α_β = ⋃_{i∈β} α_i.
    pub fn union(&self, beta: &FiniteIndexSet) -> Result<FiniteIndexSet> {
        if let Some(m) = beta.max_elem() {
            if m as usize > self.len() {
                return Err(Error::OutOfRange(format!(
                    "index {m} beyond the {} blocks of the truncation",
                    self.len()
                )));
            }
        }
        Ok(FiniteIndexSet::from_unsorted(
            beta.iter().flat_map(|i| self.blocks[i as usize - 1].iter()),
        ))
    }

    /// Every β ⊆ [1..L] with β ∈ S_l maps to a k-syndetic set.
    pub fn maps_syndetic(&self, l: u32, k: u32) -> bool {
        self.first_syndetic_failure(l, k).is_none()
    }

    /// The first β (depth-first, ascending) in S_l whose image is not k-syndetic.
    pub fn first_syndetic_failure(&self, l: u32, k: u32) -> Option<FiniteIndexSet> {
        let mut path = Vec::new();
        (1..=self.len()).find_map(|start| {
            self.dfs_union(start, l as usize, k, &FiniteIndexSet::empty(), &mut path)
        })
    }

    fn dfs_union(
        &self,
        i: usize,
        l: usize,
        k: u32,
        acc: &FiniteIndexSet,
        path: &mut Vec<u32>,
    ) -> Option<FiniteIndexSet> {
        let u = acc.union(&self.blocks[i - 1]);
        path.push(i as u32);
        let found = if !u.is_syndetic(k) {
            Some(FiniteIndexSet::from_unsorted(path.iter().copied()))
        } else {
            (i + 1..=(i + l).min(self.len())).find_map(|j| self.dfs_union(j, l, k, &u, path))
        };
        path.pop();
        found
    }

    /// The three well-formedness conditions for parameters (k, l):
    /// (1) min α_i ≡ max α_i (mod k); (2) min α_{i+l+1} > max α_i + k;
    /// (3) β ↦ α_β maps S_l into S_k.
    pub fn is_well_formed(&self, k: u32, l: u32) -> bool {
        self.well_formed_violation(k, l).is_none()
    }

    pub fn well_formed_violation(&self, k: u32, l: u32) -> Option<String> {
        for (i, b) in self.blocks.iter().enumerate() {
            let (lo, hi) = (b.min_elem().unwrap(), b.max_elem().unwrap());
            if (hi - lo) % k != 0 {
                return Some(format!(
                    "block {}: min {lo} and max {hi} differ mod {k}",
                    i + 1
                ));
            }
        }
        let step = l as usize + 1;
        for i in 0..self.len().saturating_sub(step) {
            let prev = self.blocks[i].max_elem().unwrap();
            let next = self.blocks[i + step].min_elem().unwrap();
            if next <= prev + k {
                return Some(format!(
                    "min of block {} is {next}, not above max of block {} plus {k}",
                    i + step + 1,
                    i + 1
                ));
            }
        }
        self.first_syndetic_failure(l, k)
            .map(|beta| format!("{beta:?} maps to a set that is not {k}-syndetic"))
    }
}

impl TryFrom<Vec<FiniteIndexSet>> for BlockSequence {
    type Error = Error;
    fn try_from(v: Vec<FiniteIndexSet>) -> Result<Self> {
        BlockSequence::new(v)
    }
}

impl From<BlockSequence> for Vec<FiniteIndexSet> {
    fn from(b: BlockSequence) -> Self {
        b.blocks
    }
}
