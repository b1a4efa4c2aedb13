use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::pattern::{window, Pattern};
use super::{BlockSequence, FiniteIndexSet};
use crate::error::{Error, Result};

/// One window pattern seen in a generated sequence, keyed by absolute block
/// index of its first non-empty slot.
#[derive(Clone, Debug, Serialize)]
pub struct PatternCount {
    pub first_block: usize,
    pub slots: Vec<FiniteIndexSet>,
    pub count: usize,
    pub forces_endpoint: bool,
}

/// Direct count of every window pattern of a block sequence.
#[derive(Clone, Debug, Serialize)]
pub struct GenericityCertificate {
    pub window: u32,
    pub required: usize,
    pub patterns: Vec<PatternCount>,
    /// Fewest occurrences among patterns that do not force a block endpoint.
    pub min_interior_count: usize,
}

impl GenericityCertificate {
    pub fn holds(&self) -> bool {
        self.min_interior_count >= self.required
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericBlocks {
    pub blocks: BlockSequence,
    pub certificate: GenericityCertificate,
}

/// A window pattern keyed by the (1-based) block of its first non-empty slot.
pub type PatternKey = (usize, Vec<FiniteIndexSet>);

/// Every position n ≡ 0 (mod k) grouped by the length-`m` window pattern
/// seen there. Windows meeting no block are skipped.
pub fn pattern_positions(b: &BlockSequence, k: u32, m: u32) -> BTreeMap<PatternKey, Vec<u64>> {
    let top = b.support().max_elem().unwrap_or(0) as u64;
    let mut out: BTreeMap<PatternKey, Vec<u64>> = BTreeMap::new();
    let mut n = 0u64;
    while n <= top {
        let wins: Vec<FiniteIndexSet> = b.blocks().iter().map(|blk| window(blk, n, m)).collect();
        if let Some(first) = wins.iter().position(|w| !w.is_empty()) {
            let last = wins.iter().rposition(|w| !w.is_empty()).unwrap();
            out.entry((first + 1, wins[first..=last].to_vec()))
                .or_default()
                .push(n);
        }
        n += k as u64;
    }
    out
}

/// Counts every pattern of length `m` at every position n ≡ 0 (mod k).
pub fn count_patterns(b: &BlockSequence, k: u32, m: u32, required: usize) -> GenericityCertificate {
    let patterns: Vec<PatternCount> = pattern_positions(b, k, m)
        .into_iter()
        .map(|((first_block, slots), pos)| {
            let count = pos.len();
            let forces_endpoint = Pattern::new(m, k, slots.clone())
                .map(|p| p.forces_endpoint())
                .unwrap_or(true);
            PatternCount {
                first_block,
                slots,
                count,
                forces_endpoint,
            }
        })
        .collect();
    let min_interior_count = patterns
        .iter()
        .filter(|p| !p.forces_endpoint)
        .map(|p| p.count)
        .min()
        .unwrap_or(usize::MAX);
    GenericityCertificate {
        window: m,
        required,
        patterns,
        min_interior_count,
    }
}

/// Interleaved step-k progressions: block i lives in residue ((i−1) mod k)+1
/// on the span ((i−1)T, (i+l)T − H] with H = m + k(n+1) and T = 2H, so that
/// each phase between consecutive span endpoints has length H and holds at
/// least n positions of every pattern it contains. Uses l + k + 1 blocks.
pub fn generate_generic_blocks(k: u32, l: u32, m: u32, n: u32) -> Result<GenericBlocks> {
    generic_blocks_with_len(k, l, m, n, (l + k + 1) as usize)
}

pub fn generic_blocks_with_len(
    k: u32,
    l: u32,
    m: u32,
    n: u32,
    len: usize,
) -> Result<GenericBlocks> {
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    if l >= k {
        return Err(Error::Parameter(format!(
            "need l < k, got l = {l}, k = {k}"
        )));
    }
    if m == 0 || m % k != 0 {
        return Err(Error::Parameter(format!(
            "window {m} must be a positive multiple of k = {k}"
        )));
    }
    if len == 0 {
        return Err(Error::Parameter("need at least one block".into()));
    }
    let h = m as u64 + k as u64 * (n as u64 + 1);
    let t = 2 * h;
    let top = (len as u64 + l as u64) * t;
    if top > u32::MAX as u64 {
        return Err(Error::Parameter(
            "generated blocks exceed the index range".into(),
        ));
    }
    let blocks = (1..=len as u64)
        .map(|i| {
            let r = (i - 1) % k as u64 + 1;
            let lo = (i - 1) * t;
            let hi = (i + l as u64) * t - h;
            FiniteIndexSet::from_unsorted((lo + r..=hi).step_by(k as usize).map(|x| x as u32))
        })
        .collect();
    let blocks = BlockSequence::new(blocks)?;
    let certificate = count_patterns(&blocks, k, m, n as usize);
    debug_assert!(blocks.is_well_formed(k, l));
    debug_assert!(certificate.holds());
    Ok(GenericBlocks {
        blocks,
        certificate,
    })
}

/// Random well-formed sequences of step-k progressions for 0 ≤ l ≤ k: block i
/// sits in residue ((i−1) mod k)+1, starts s_i increase by at least k+1, and
/// each block ends inside [s_{i+l} − k, s_{i+l+1} − k − 1], so consecutive
/// blocks up to l apart chain within distance k while blocks l+1 apart stay
/// separated. For l = k the end is forced to s_{i+k} − k.
pub fn chained_progressions<R: Rng>(
    k: u32,
    l: u32,
    len: usize,
    max_gap: u32,
    rng: &mut R,
) -> Result<BlockSequence> {
    if k == 0 || l > k {
        return Err(Error::Parameter(format!(
            "need 0 ≤ l ≤ k and k ≥ 1, got l = {l}, k = {k}"
        )));
    }
    let (k64, l) = (k as u64, l as usize);
    let residue = |i: usize| (i as u64 - 1) % k64 + 1;
    let align_up = |x: u64, r: u64| x + (r + k64 - x % k64) % k64;
    let mut starts = vec![0u64; len + 1];
    for i in 1..=len {
        let floor = if i == 1 { 1 } else { starts[i - 1] + k64 + 1 };
        starts[i] = align_up(floor + rng.gen_range(0..=max_gap as u64), residue(i));
    }
    let mut blocks = Vec::with_capacity(len);
    for i in 1..=len {
        let r = residue(i);
        let s = starts[i];
        let end = if i + l <= len {
            let lo = align_up(starts[i + l].saturating_sub(k64).max(s), r);
            let hi = if i + l < len {
                starts[i + l + 1] - k64 - 1
            } else {
                lo + k64 * (1 + max_gap as u64)
            };
            let hi = if i + k as usize <= len {
                hi.min(starts[i + k as usize] - k64)
            } else {
                hi
            };
            let choices = (hi.saturating_sub(lo)) / k64;
            lo + k64 * rng.gen_range(0..=choices)
        } else {
            align_up(starts[len].saturating_sub(k64).max(s), r)
                + k64 * rng.gen_range(0..=1 + max_gap as u64)
        };
        if end > u32::MAX as u64 {
            return Err(Error::Parameter(
                "generated blocks exceed the index range".into(),
            ));
        }
        blocks.push(FiniteIndexSet::from_unsorted(
            (s..=end).step_by(k as usize).map(|x| x as u32),
        ));
    }
    BlockSequence::new(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generic_blocks_are_well_formed_and_certified() {
        for (k, l, m, n) in [
            (2, 0, 6, 1),
            (1, 0, 3, 2),
            (2, 1, 6, 3),
            (3, 1, 9, 2),
            (4, 2, 12, 1),
        ] {
            let g = generate_generic_blocks(k, l, m, n).unwrap();
            assert!(g.blocks.is_well_formed(k, l), "k={k} l={l}");
            assert!(g.certificate.holds(), "k={k} l={l}");
            assert!(g.blocks.maps_syndetic(l, k));
        }
    }

    #[test]
    fn unit_step_blocks_are_intervals() {
        let g = generate_generic_blocks(1, 0, 3, 2).unwrap();
        for b in g.blocks.blocks() {
            let e = b.elements();
            assert_eq!(e.len() as u32, e[e.len() - 1] - e[0] + 1);
        }
    }

    #[test]
    fn rejects_l_at_least_k() {
        assert!(matches!(
            generate_generic_blocks(2, 2, 6, 1),
            Err(Error::Parameter(_))
        ));
        assert!(generate_generic_blocks(2, 0, 5, 1).is_err());
    }

    #[test]
    fn chained_progressions_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=4 {
            for l in 0..=k {
                for _ in 0..10 {
                    let b = chained_progressions(k, l, 8, 5, &mut rng).unwrap();
                    assert!(b.is_well_formed(k, l), "k={k} l={l} {b:?}");
                }
            }
        }
    }
}
