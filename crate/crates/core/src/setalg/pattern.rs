use serde::Serialize;

use super::{BlockSequence, FiniteIndexSet};
use crate::error::{Error, Result};

/// A window configuration: slot i is what block `i + offset` must look like
/// inside [n+1 .. n+M]. Slots beyond the list are empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pattern {
    length: u32,
    k: u32,
    slots: Vec<FiniteIndexSet>,
}

impl Pattern {
    pub fn new(length: u32, k: u32, slots: Vec<FiniteIndexSet>) -> Result<Self> {
        if length == 0 || k == 0 {
            return Err(Error::Parameter(
                "pattern length and k must be positive".into(),
            ));
        }
        for (i, s) in slots.iter().enumerate() {
            if s.max_elem().is_some_and(|m| m > length) {
                return Err(Error::Domain(format!(
                    "slot {} leaves the window [1..{length}]",
                    i + 1
                )));
            }
            if !s.is_syndetic(k) {
                return Err(Error::Domain(format!("slot {} is not {k}-syndetic", i + 1)));
            }
            if slots[..i].iter().any(|t| !t.is_disjoint(s)) {
                return Err(Error::Domain(format!(
                    "slot {} overlaps an earlier slot",
                    i + 1
                )));
            }
        }
        Ok(Pattern { length, k, slots })
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn slots(&self) -> &[FiniteIndexSet] {
        &self.slots
    }

    pub fn slot(&self, i: usize) -> FiniteIndexSet {
        self.slots.get(i).cloned().unwrap_or_default()
    }

    /// A non-empty slot that cannot be continued on one side inside the
    /// window pins down the minimum or maximum of its block, so the pattern
    /// occurs at most once for that block.
    pub fn forces_endpoint(&self) -> bool {
        self.slots
            .iter()
            .any(|s| match (s.min_elem(), s.max_elem()) {
                (Some(lo), Some(hi)) => lo > self.k || hi + self.k < self.length + 1,
                _ => false,
            })
    }
}

/// `(α − n) ∩ [1..m]`.
pub fn window(block: &FiniteIndexSet, n: u64, m: u32) -> FiniteIndexSet {
    FiniteIndexSet::from_unsorted(
        block
            .iter()
            .filter(|&x| (x as u64) > n && (x as u64) <= n + m as u64)
            .map(|x| (x as u64 - n) as u32),
    )
}

/// Positions n ≡ 0 (mod k) at which slot j equals the window of block
/// `j + slot_offset` (0-based) and every other block misses the window.
pub fn pattern_occurrences(b: &BlockSequence, p: &Pattern, slot_offset: usize) -> Vec<u64> {
    let top = b.support().max_elem().unwrap_or(0) as u64;
    let step = p.k() as u64;
    let mut out = Vec::new();
    let mut n = 0u64;
    while n <= top {
        let hit = b.blocks().iter().enumerate().all(|(i, blk)| {
            let want = i
                .checked_sub(slot_offset)
                .map(|j| p.slot(j))
                .unwrap_or_default();
            window(blk, n, p.length()) == want
        });
        if hit {
            out.push(n);
        }
        n += step;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set;

    #[test]
    fn occurrences() {
        let b = BlockSequence::new(vec![set![2, 4], set![8, 10]]).unwrap();
        let p = Pattern::new(4, 2, vec![set![2, 4], set![]]).unwrap();
        assert_eq!(pattern_occurrences(&b, &p, 0), vec![0]);
        let b = BlockSequence::new(vec![set![2, 4]]).unwrap();
        let p = Pattern::new(3, 2, vec![set![1]]).unwrap();
        assert!(pattern_occurrences(&b, &p, 0).is_empty());
    }

    #[test]
    fn validation() {
        assert!(Pattern::new(4, 2, vec![set![1, 5]]).is_err());
        assert!(Pattern::new(4, 1, vec![set![1, 3]]).is_err());
        assert!(Pattern::new(4, 2, vec![set![1, 3], set![3]]).is_err());
    }

    #[test]
    fn endpoint_forcing() {
        assert!(Pattern::new(3, 2, vec![set![1]]).unwrap().forces_endpoint());
        assert!(!Pattern::new(6, 2, vec![set![2, 4, 6]])
            .unwrap()
            .forces_endpoint());
        assert!(Pattern::new(6, 2, vec![set![4, 6]])
            .unwrap()
            .forces_endpoint());
    }
}
