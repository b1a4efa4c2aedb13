use num_bigint::BigInt;

use super::nil_gap_bound;
use super::outcome::{SearchOutcome, Witness};
use crate::error::{Error, Result};
use crate::nilmanifold::{dist_to_identity, orbit_value_big, UnitriangularElement};
use crate::par::scan_first;
use crate::rational::{torus_norm, Q};
use crate::setalg::{count_syndetic, syndetic_masks, FiniteIndexSet};
use crate::toruspoly::RealPolynomialApprox;

/// Resource cap on enumerated candidates.
pub const MAX_CANDIDATES: u128 = 50_000_000;

/// Shared parameters of the exhaustive engines.
#[derive(Clone, Debug)]
pub struct SearchRequest<'a> {
    pub n: &'a [u64],
    pub k: u32,
    pub eps: Q,
    /// Search among subsets of [1..N].
    pub horizon: u32,
    pub workers: usize,
}

pub(super) fn validate(req: &SearchRequest<'_>) -> Result<()> {
    req.validate()
}

impl SearchRequest<'_> {
    fn validate(&self) -> Result<()> {
        if self.horizon == 0 || self.horizon > 64 {
            return Err(Error::Parameter(format!(
                "N = {} must lie in 1..=64",
                self.horizon
            )));
        }
        if self.horizon as usize > self.n.len() {
            return Err(Error::Parameter(format!(
                "N = {} exceeds the {} sequence terms supplied",
                self.horizon,
                self.n.len()
            )));
        }
        if self.eps < Q::from_integer(0.into()) {
            return Err(Error::Parameter("ε must be non-negative".into()));
        }
        let count = count_syndetic(self.horizon, self.k);
        if count > MAX_CANDIDATES {
            return Err(Error::Parameter(format!(
                "{count} candidates exceed the cap of {MAX_CANDIDATES}"
            )));
        }
        Ok(())
    }
}

/// Candidate masks in canonical order for a request.
pub fn candidate_masks(horizon: u32, k: u32) -> Vec<u64> {
    syndetic_masks(horizon, k)
}

/// n_α for a mask over [1..N].
pub fn subset_sums(n: &[u64], mask: u64) -> BigInt {
    let mut s = BigInt::from(0);
    let mut m = mask;
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        s += n[j];
        m &= m - 1;
    }
    s
}

fn outcome_from_scan(scan: crate::par::Scan<Q>, masks: &[u64], exploratory: bool) -> SearchOutcome {
    match scan.first {
        Some((idx, v)) => SearchOutcome {
            witness: Some(Witness::Set(FiniteIndexSet::from_mask(masks[idx]))),
            value: v,
            sets_examined: scan.examined as u64,
            canonical_rank: Some(idx as u64),
            exhaustive: false,
            exploratory,
            sets_screened: None,
            moves_applied: None,
            note: None,
        },
        None => SearchOutcome {
            witness: None,
            value: scan
                .best
                .map(|(_, v)| v)
                .unwrap_or_else(|| Q::from_integer(1.into())),
            sets_examined: scan.examined as u64,
            canonical_rank: None,
            exhaustive: true,
            exploratory,
            sets_screened: None,
            moves_applied: None,
            note: None,
        },
    }
}

/// First α ∈ S_k ∩ P([N]) in canonical order with ‖p(n_α)‖ ≤ ε.
pub fn brute_force_thm_a(
    p: &RealPolynomialApprox,
    req: &SearchRequest<'_>,
) -> Result<SearchOutcome> {
    req.validate()?;
    let masks = candidate_masks(req.horizon, req.k);
    let scan = scan_first(
        &masks,
        req.workers,
        |&m| torus_norm(&p.eval(&subset_sums(req.n, m))),
        |v| *v <= req.eps,
    );
    Ok(outcome_from_scan(scan, &masks, req.k < p.degree()))
}

/// First α ∈ S_k ∩ P([N]) in canonical order with
/// dist(g^{n_α} Γ, eΓ) ≤ ε (radius-2 metric).
pub fn brute_force_thm_b(
    g: &UnitriangularElement,
    req: &SearchRequest<'_>,
) -> Result<SearchOutcome> {
    req.validate()?;
    let masks = candidate_masks(req.horizon, req.k);
    let scan = scan_first(
        &masks,
        req.workers,
        |&m| dist_to_identity(&orbit_value_big(g, &subset_sums(req.n, m)), 2),
        |v| *v <= req.eps,
    );
    let d = g.size() as u32 - 1;
    Ok(outcome_from_scan(scan, &masks, req.k < nil_gap_bound(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::set;

    fn req(n: &[u64], k: u32, eps: Q, horizon: u32) -> SearchRequest<'_> {
        SearchRequest {
            n,
            k,
            eps,
            horizon,
            workers: 1,
        }
    }

    #[test]
    fn linear_fifths() {
        let p = RealPolynomialApprox::new(vec![q(1, 5)]).unwrap();
        let ones = [1u64; 10];
        let o = brute_force_thm_a(&p, &req(&ones, 1, qi(0), 10)).unwrap();
        assert_eq!(o.witness_set(), Some(&set![1, 2, 3, 4, 5]));
        assert_eq!(o.value, qi(0));
    }

    #[test]
    fn exhaustive_absence() {
        let p = RealPolynomialApprox::new(vec![q(1, 2)]).unwrap();
        let o = brute_force_thm_a(&p, &req(&[1], 1, q(1, 4), 1)).unwrap();
        assert!(o.witness.is_none() && o.exhaustive);
        assert_eq!(o.sets_examined, 1);
        assert_eq!(o.value, q(1, 2));
    }

    #[test]
    fn identity_recurs_immediately() {
        let g = UnitriangularElement::identity(3);
        let o = brute_force_thm_b(&g, &req(&[7, 3, 2], 3, qi(0), 3)).unwrap();
        assert_eq!(o.witness_set(), Some(&set![1]));
        assert_eq!(o.canonical_rank, Some(0));
    }

    #[test]
    fn rejects_oversized_requests() {
        let p = RealPolynomialApprox::new(vec![q(1, 2)]).unwrap();
        assert!(brute_force_thm_a(&p, &req(&[1, 1], 1, qi(0), 3)).is_err());
        assert!(brute_force_thm_a(&p, &req(&[1, 1], 1, qi(-1), 2)).is_err());
    }
}
