use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{serde_q, serde_qvec, Q};
use crate::setalg::{count_syndetic, enumerate_syndetic, BlockSequence, FiniteIndexSet};
use crate::toruspoly::counterexample_poly;

/// Most β enumerated over the truncation.
const MAX_BETAS: u128 = 1 << 22;

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub k: u32,
    pub d: u32,
    pub l: u32,
    /// l ≥ k − d + 2, where every f(α_β) is expected to stay at 1/2.
    pub sharp_regime: bool,
    /// f(α_i) for i = 1..len.
    #[serde(with = "serde_qvec")]
    pub block_values: Vec<Q>,
    /// f(α_i) = 1/2 for every i ≥ max(l, 1).
    pub all_half_from_l: bool,
    pub betas_checked: u64,
    #[serde(with = "serde_q")]
    pub min_norm: Q,
    #[serde(with = "serde_q")]
    pub max_norm: Q,
    pub argmin: FiniteIndexSet,
    /// First β in canonical order with f(α_β) = 0.
    pub zero_beta: Option<FiniteIndexSet>,
    /// Largest |α_i ∩ [x, x + k]| over blocks and x.
    pub max_local_size: usize,
    /// max_local_size ≤ d.
    pub covering_holds: bool,
}

/// Evaluates the ±1/2 counterexample polynomial on the blocks of `b` and on
/// every α_β with β ∈ S_l inside the block range.
pub fn verify_counterexample(
    k: u32,
    d: u32,
    l: u32,
    b: &BlockSequence,
) -> Result<CounterexampleReport> {
    let f = counterexample_poly(k, d)?;
    if let Some(beta) = b.first_syndetic_failure(l, k) {
        return Err(Error::Domain(format!(
            "blocks do not map S_{l} into S_{k}: β = {beta:?} gives a set with a gap above {k}"
        )));
    }
    let len = b.len() as u32;
    let value = |s: &FiniteIndexSet| f.evaluate(s).coords()[0].clone();
    let half = Q::new(1.into(), 2.into());

    let block_values: Vec<Q> = b.blocks().iter().map(value).collect();
    let from = l.max(1) as usize;
    let all_half_from_l = block_values.iter().skip(from - 1).all(|v| *v == half);

    if count_syndetic(len, l) > MAX_BETAS {
        return Err(Error::Parameter(format!(
            "{len} blocks give too many β to enumerate"
        )));
    }
    let mut betas_checked = 0u64;
    let mut min_norm: Option<(Q, FiniteIndexSet)> = None;
    let mut max_norm = Q::from_integer(0.into());
    let mut zero_beta = None;
    for beta in enumerate_syndetic(len, l) {
        let v = f.evaluate(&b.union(&beta)?).norm();
        betas_checked += 1;
        if v.numer() == &0.into() && zero_beta.is_none() {
            zero_beta = Some(beta.clone());
        }
        if v > max_norm {
            max_norm = v.clone();
        }
        if min_norm.as_ref().map_or(true, |(m, _)| v < *m) {
            min_norm = Some((v, beta));
        }
    }
    let (min_norm, argmin) = min_norm.expect("at least one block");

    let max_local_size = b
        .blocks()
        .iter()
        .map(|blk| {
            let e = blk.elements();
            (0..e.len())
                .map(|i| e[i..].iter().take_while(|&&x| x <= e[i] + k).count())
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);

    Ok(CounterexampleReport {
        k,
        d,
        l,
        sharp_regime: l + d >= k + 2,
        block_values,
        all_half_from_l,
        betas_checked,
        min_norm,
        max_norm,
        argmin,
        zero_beta,
        max_local_size,
        covering_holds: max_local_size <= d as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::setalg::chained_progressions;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sharp_regime_stays_at_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let b = chained_progressions(3, 3, 8, 4, &mut rng).unwrap();
            let r = verify_counterexample(3, 2, 3, &b).unwrap();
            assert!(r.sharp_regime && r.all_half_from_l && r.covering_holds);
            assert_eq!(r.max_norm, q(1, 2));
        }
    }

    #[test]
    fn below_threshold_reaches_zero() {
        let b = BlockSequence::new(vec![crate::set![1, 2, 3], crate::set![5, 6]]).unwrap();
        let r = verify_counterexample(3, 2, 0, &b).unwrap();
        assert!(!r.sharp_regime);
        assert_eq!(r.zero_beta, Some(crate::set![1]));
        assert_eq!(r.min_norm, q(0, 1));
        let b = BlockSequence::identity(6);
        let r = verify_counterexample(3, 2, 3, &b).unwrap();
        assert_eq!(r.zero_beta, Some(crate::set![1, 2, 3]));
    }

    #[test]
    fn rejects_non_morphisms() {
        let b = BlockSequence::new(vec![crate::set![1], crate::set![9]]).unwrap();
        assert!(matches!(
            verify_counterexample(3, 2, 3, &b),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            verify_counterexample(2, 3, 1, &b),
            Err(Error::Parameter(_))
        ));
    }
}
