//! Finite index sets, syndetic sets, block sequences and window patterns.

mod blocks;
mod enumerate;
mod generic;
mod index_set;
mod pattern;

pub use blocks::BlockSequence;
pub use enumerate::{count_syndetic, enumerate_syndetic, syndetic_masks, syndetic_masks_with_max};
pub use generic::{
    chained_progressions, count_patterns, generate_generic_blocks, generic_blocks_with_len,
    pattern_positions, GenericBlocks, GenericityCertificate, PatternCount, PatternKey,
};
pub use index_set::FiniteIndexSet;
pub use pattern::{pattern_occurrences, window, Pattern};

use crate::error::Result;

pub fn gaps(alpha: &FiniteIndexSet) -> Result<Vec<u32>> {
    alpha.gaps()
}

pub fn is_syndetic(alpha: &FiniteIndexSet, k: u32) -> bool {
    alpha.is_syndetic(k)
}

pub fn diameter(alpha: &FiniteIndexSet) -> Result<u32> {
    alpha.diameter()
}

pub fn blocks_union(b: &BlockSequence, beta: &FiniteIndexSet) -> Result<FiniteIndexSet> {
    b.union(beta)
}

pub fn maps_syndetic(b: &BlockSequence, l: u32, k: u32) -> bool {
    b.maps_syndetic(l, k)
}

pub fn is_well_formed(b: &BlockSequence, k: u32, l: u32) -> bool {
    b.is_well_formed(k, l)
}
