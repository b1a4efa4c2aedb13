use serde::Serialize;

use crate::error::{Error, Result};
use crate::setalg::{enumerate_syndetic, BlockSequence, FiniteIndexSet};

/// Most β checked when verifying a returned sequence.
const MAX_VERIFY_BLOCKS: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct DivisibleReport {
    pub blocks: Option<BlockSequence>,
    /// Offset added to the first k starting points.
    pub shift: Option<u32>,
    /// Counts of n_i mod m over the truncation.
    pub residue_histogram: Vec<u64>,
    pub betas_verified: u64,
}

/// Blocks α_j = {s_j, s_j + k, …, s_{j+k} − k}: each residue class mod k is
/// cut into consecutive runs, so unions along k-syndetic β stay k-syndetic.
/// Block j is the shortest run from s_j whose sum vanishes mod m and whose
/// successor start s_{j+k} exceeds s_{j+k−1}. Every block sum is then 0 mod m,
/// hence so is every n_{α_β}. Starts are shifted until the greedy fits inside
/// the truncation.
pub fn find_divisible_blocks(n: &[u64], k: u32, m: u64, target: usize) -> Result<DivisibleReport> {
    if k == 0 || m == 0 || target == 0 {
        return Err(Error::Parameter(
            "k, m and the target length must be positive".into(),
        ));
    }
    let mut residue_histogram = vec![0u64; m.min(1 << 16) as usize];
    for &x in n {
        if let Some(c) = residue_histogram.get_mut((x % m) as usize) {
            *c += 1;
        }
    }
    let top = n.len() as u64;
    let mut found = None;
    for shift in 0..top {
        if shift + k as u64 > top {
            break;
        }
        if let Some(b) = greedy(n, k as u64, m, target, shift) {
            found = Some((shift as u32, b));
            break;
        }
    }
    let Some((shift, blocks)) = found else {
        return Ok(DivisibleReport {
            blocks: None,
            shift: None,
            residue_histogram,
            betas_verified: 0,
        });
    };
    let blocks = BlockSequence::new(blocks)?;
    let betas_verified = verify(n, k, m, &blocks)?;
    Ok(DivisibleReport {
        blocks: Some(blocks),
        shift: Some(shift),
        residue_histogram,
        betas_verified,
    })
}

fn greedy(n: &[u64], k: u64, m: u64, target: usize, shift: u64) -> Option<Vec<FiniteIndexSet>> {
    let top = n.len() as u64;
    // starts[j] for j = 0.., 1-based indices into n
    let mut starts: Vec<u64> = (1..=k).map(|r| r + shift).collect();
    let mut blocks = Vec::with_capacity(target);
    for j in 0..target {
        let s = starts[j];
        let prev = starts[j + k as usize - 1];
        let mut sum = 0u64;
        let mut x = s;
        loop {
            if x > top {
                return None;
            }
            sum = (sum + n[x as usize - 1] % m) % m;
            if sum == 0 && x + k > prev {
                break;
            }
            x += k;
        }
        blocks.push(FiniteIndexSet::from_unsorted(
            (s..=x).step_by(k as usize).map(|v| v as u32),
        ));
        starts.push(x + k);
    }
    Some(blocks)
}

fn verify(n: &[u64], k: u32, m: u64, b: &BlockSequence) -> Result<u64> {
    let len = b.len().min(MAX_VERIFY_BLOCKS) as u32;
    let mut checked = 0;
    for beta in enumerate_syndetic(len, k) {
        let a = b.union(&beta)?;
        let s = a
            .iter()
            .fold(0u64, |acc, i| (acc + n[i as usize - 1] % m) % m);
        if s != 0 || !a.is_syndetic(k) {
            return Err(Error::Inconsistent(format!(
                "β = {beta:?} breaks divisibility or syndeticity"
            )));
        }
        checked += 1;
    }
    Ok(checked)
}
