use super::brute::{candidate_masks, subset_sums, validate, SearchRequest};
use super::nil_gap_bound;
use super::outcome::{SearchOutcome, Witness};
use crate::error::Result;
use crate::nilmanifold::{dist_to_identity, orbit_value_big, UnitriangularElement};
use crate::rational::{TorusPoint, Q};
use crate::setalg::FiniteIndexSet;

#[derive(Clone, Debug)]
pub struct StagedConfig {
    /// Abelian-good candidates kept for the combination stage.
    pub pool: usize,
    /// Most pool members joined in one combination.
    pub max_parts: usize,
}

impl Default for StagedConfig {
    fn default() -> Self {
        StagedConfig {
            pool: 16,
            max_parts: 3,
        }
    }
}

/// Two-stage search. Stage 1 screens every candidate in canonical order by
/// the norm of the abelian image n_α·π(g), which bounds the full distance
/// from below, and fully evaluates only those within ε. Stage 2 tries
/// disjoint unions of the best stage-1 candidates that stay k-syndetic.
/// Only full evaluations count towards `sets_examined`.
pub fn staged_nil_search(
    g: &UnitriangularElement,
    req: &SearchRequest<'_>,
    cfg: &StagedConfig,
) -> Result<SearchOutcome> {
    validate(req)?;
    let masks = candidate_masks(req.horizon, req.k);
    let d = g.size() as u32 - 1;
    let exploratory = req.k < nil_gap_bound(d);
    let pi = g.project_abelian();
    let full = |n: &num_bigint::BigInt| dist_to_identity(&orbit_value_big(g, n), 2);

    let mut screened = 0u64;
    let mut examined = 0u64;
    let mut best: Option<Q> = None;
    let mut pool: Vec<(Q, u64)> = Vec::new();
    for (rank, &mask) in masks.iter().enumerate() {
        screened += 1;
        let n = subset_sums(req.n, mask);
        if abelian_norm(&pi, &n) > req.eps {
            continue;
        }
        examined += 1;
        let v = full(&n);
        if v <= req.eps {
            let mut o = outcome(Some((mask, v)), best, screened, examined, exploratory);
            o.canonical_rank = Some(rank as u64);
            return Ok(o);
        }
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v.clone());
        }
        if pool.len() < cfg.pool {
            pool.push((v, mask));
        }
    }

    // Stage 2: unions of 2..=max_parts pool sets, in lexicographic index order.
    let masks_only: Vec<u64> = pool.iter().map(|&(_, m)| m).collect();
    let mut stack: Vec<usize> = Vec::new();
    let mut found = None;
    combine(&masks_only, cfg.max_parts, 0, 0, &mut stack, &mut |union| {
        if !FiniteIndexSet::from_mask(union).is_syndetic(req.k) {
            return false;
        }
        screened += 1;
        examined += 1;
        let v = full(&subset_sums(req.n, union));
        if v <= req.eps {
            found = Some((union, v));
            return true;
        }
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v);
        }
        false
    });
    let mut o = outcome(found, best, screened, examined, exploratory);
    if !o.found() {
        o.note = Some("pool combinations exhausted; not a proof of absence".into());
    }
    Ok(o)
}

fn abelian_norm(pi: &TorusPoint, n: &num_bigint::BigInt) -> Q {
    let scaled: Vec<Q> = pi
        .coords()
        .iter()
        .map(|x| x * Q::from_integer(n.clone()))
        .collect();
    TorusPoint::new(scaled).norm()
}

fn combine<F: FnMut(u64) -> bool>(
    pool: &[u64],
    max_parts: usize,
    from: usize,
    acc: u64,
    stack: &mut Vec<usize>,
    visit: &mut F,
) -> bool {
    for i in from..pool.len() {
        if acc & pool[i] != 0 {
            continue;
        }
        let u = acc | pool[i];
        stack.push(i);
        if stack.len() >= 2 && visit(u) {
            return true;
        }
        if stack.len() < max_parts && combine(pool, max_parts, i + 1, u, stack, visit) {
            return true;
        }
        stack.pop();
    }
    false
}

fn outcome(
    hit: Option<(u64, Q)>,
    best: Option<Q>,
    screened: u64,
    examined: u64,
    exploratory: bool,
) -> SearchOutcome {
    let (witness, value) = match hit {
        Some((mask, v)) => (Some(Witness::Set(FiniteIndexSet::from_mask(mask))), v),
        None => (None, best.unwrap_or_else(|| Q::from_integer(1.into()))),
    };
    SearchOutcome {
        witness,
        value,
        sets_examined: examined,
        canonical_rank: None,
        exhaustive: false,
        exploratory,
        sets_screened: Some(screened),
        moves_applied: None,
        note: None,
    }
}
