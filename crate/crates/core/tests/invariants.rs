use std::collections::BTreeMap;

use nilbohr::nilmanifold::{dist_to_identity, UnitriangularElement};
use nilbohr::rational::{q, qi, torus_norm};
use nilbohr::search::{
    brute_force_thm_a, brute_force_thm_b, find_divisible_blocks, sg_enumerate,
    verify_counterexample, SearchRequest,
};
use nilbohr::setalg::{chained_progressions, count_syndetic, syndetic_masks, FiniteIndexSet};
use nilbohr::toruspoly::{coefficients_from_values, RealPolynomialApprox, TorusPolynomial};
use nilbohr::{TorusPoint, Q};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gaps_ok(mask: u64, k: u32) -> bool {
    let e: Vec<u32> = (0..64).filter(|j| mask >> j & 1 == 1).collect();
    e.windows(2).all(|w| w[1] - w[0] <= k)
}

/// Every mask of [1..n], filtered and sorted by (max, element list).
fn oracle_masks(n: u32, k: u32) -> Vec<u64> {
    let mut v: Vec<(u32, Vec<u32>, u64)> = (1u64..1 << n)
        .filter(|&m| gaps_ok(m, k))
        .map(|m| {
            let e: Vec<u32> = (0..n).filter(|j| m >> j & 1 == 1).map(|j| j + 1).collect();
            (*e.last().unwrap(), e, m)
        })
        .collect();
    v.sort();
    v.into_iter().map(|(_, _, m)| m).collect()
}

fn rational() -> impl Strategy<Value = Q> {
    (0i64..64, 1i64..=64).prop_map(|(a, b)| q(a, b))
}

fn torus_poly(m: usize, d: u32, window: u32) -> impl Strategy<Value = TorusPolynomial> {
    let sets: Vec<FiniteIndexSet> = FiniteIndexSet::interval(1, window)
        .subsets()
        .filter(|s| s.len() as u32 <= d)
        .collect();
    prop::collection::vec(prop::collection::vec(rational(), m), sets.len()).prop_map(move |cs| {
        TorusPolynomial::from_coeffs(
            m,
            d,
            sets.iter()
                .cloned()
                .zip(cs.into_iter().map(TorusPoint::new)),
        )
        .unwrap()
    })
}

#[test]
fn canonical_order_matches_sorted_filter() {
    for n in 1..=10 {
        for k in 0..=3 {
            let got = syndetic_masks(n, k);
            assert_eq!(got, oracle_masks(n, k), "n={n} k={k}");
            assert_eq!(got.len() as u128, count_syndetic(n, k));
        }
    }
}

#[test]
fn consecutive_sums_are_differences_of_partial_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let n: Vec<u64> = (0..30)
            .map(|_| rand::Rng::gen_range(&mut rng, 1..40))
            .collect();
        let partial: Vec<u64> = std::iter::once(0)
            .chain(n.iter().scan(0, |s, x| {
                *s += x;
                Some(*s)
            }))
            .collect();
        let mut diffs: Vec<u64> = partial
            .iter()
            .flat_map(|a| partial.iter().filter(move |b| *b > a).map(move |b| b - a))
            .filter(|&x| x <= 200)
            .collect();
        diffs.sort();
        diffs.dedup();
        assert_eq!(sg_enumerate(&n, 1, 200), diffs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn syndetic_sums_match_mask_scan(n in prop::collection::vec(1u64..20, 1..10), k in 0u32..4, bound in 1u64..80) {
        let len = n.len() as u32;
        let mut want: Vec<u64> = (1u64..1 << len)
            .filter(|&m| gaps_ok(m, k))
            .map(|m| (0..len).filter(|j| m >> j & 1 == 1).map(|j| n[j as usize]).sum())
            .filter(|&s| s <= bound)
            .collect();
        want.sort();
        want.dedup();
        prop_assert_eq!(sg_enumerate(&n, k, bound), want);
    }

    #[test]
    fn inclusion_exclusion_roundtrip(f in torus_poly(2, 3, 5)) {
        let values: BTreeMap<_, _> = f.ground().subsets().map(|s| { let v = f.evaluate(&s); (s, v) }).collect();
        let back = coefficients_from_values(&values, 3, 2).unwrap();
        for s in FiniteIndexSet::interval(1, 5).subsets() {
            prop_assert_eq!(back.coeff(&s), f.coeff(&s));
        }
    }

    #[test]
    fn difference_operator_matches_values(f in torus_poly(1, 3, 5), a in 0u64..32, b in 0u64..32) {
        let alpha = FiniteIndexSet::from_mask(a).difference(&FiniteIndexSet::from_mask(b));
        let beta = FiniteIndexSet::from_mask(b);
        prop_assume!(!beta.is_empty());
        let df = f.discrete_difference(&beta).unwrap();
        let want = &f.evaluate(&alpha.union(&beta)) - &f.evaluate(&alpha);
        prop_assert_eq!(df.evaluate(&alpha), want);
    }

    #[test]
    fn lattice_reduction_is_a_section(
        upper in prop::collection::vec((-40i64..40, 1i64..12), 6),
        shift in prop::collection::vec(-3i64..=3, 6),
    ) {
        let g = UnitriangularElement::from_offsets(4, &upper.iter().map(|&(a, b)| q(a, b)).collect::<Vec<_>>()).unwrap();
        let gamma = UnitriangularElement::from_offsets(4, &shift.iter().map(|&x| qi(x)).collect::<Vec<_>>()).unwrap();
        let r = g.reduce_mod_lattice();
        prop_assert_eq!(r.reduce_mod_lattice(), r.clone());
        prop_assert_eq!(g.mul(&gamma).reduce_mod_lattice(), r);
        prop_assert_eq!(dist_to_identity(&g, 2), dist_to_identity(&g, 4));
    }
}

fn req(n: &[u64], k: u32, eps: Q, horizon: u32, workers: usize) -> SearchRequest<'_> {
    SearchRequest {
        n,
        k,
        eps,
        horizon,
        workers,
    }
}

#[test]
fn brute_force_witnesses_reverify_and_grow_with_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n: Vec<u64> = (1..=12).collect();
    for _ in 0..20 {
        let a = q(
            rand::Rng::gen_range(&mut rng, 1..50),
            rand::Rng::gen_range(&mut rng, 2..50),
        );
        let p = RealPolynomialApprox::new(vec![qi(0), a.clone()]).unwrap();
        let mut prev_found = false;
        for k in 1..=3 {
            let o = brute_force_thm_a(&p, &req(&n, k, q(1, 20), 12, 1)).unwrap();
            match o.witness_set() {
                Some(w) => {
                    let s: i64 = w.iter().map(|i| n[i as usize - 1] as i64).sum();
                    assert!(torus_norm(&(&a * Q::from_integer(BigInt::from(s * s)))) <= q(1, 20));
                    assert!(w.is_syndetic(k));
                }
                None => {
                    assert!(!prev_found, "a larger k lost a witness");
                    assert_eq!(o.sets_examined as u128, count_syndetic(12, k));
                }
            }
            prev_found = o.found();
        }
    }
}

#[test]
fn worker_count_does_not_change_outcomes() {
    let n: Vec<u64> = (1..=14).collect();
    let g = UnitriangularElement::heisenberg(q(3363, 2378), q(1393, 985), qi(0));
    let one = brute_force_thm_b(&g, &req(&n, 3, q(1, 10), 14, 1)).unwrap();
    let four = brute_force_thm_b(&g, &req(&n, 3, q(1, 10), 14, 4)).unwrap();
    assert_eq!(one, four);
    let p = RealPolynomialApprox::new(vec![qi(0), q(408, 577)]).unwrap();
    let one = brute_force_thm_a(&p, &req(&n, 2, q(1, 1000), 14, 1)).unwrap();
    let four = brute_force_thm_a(&p, &req(&n, 2, q(1, 1000), 14, 4)).unwrap();
    assert_eq!(one, four);
}

#[test]
fn divisible_blocks_hold_on_random_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let n: Vec<u64> = (0..200)
            .map(|_| rand::Rng::gen_range(&mut rng, 1..1000))
            .collect();
        let k = rand::Rng::gen_range(&mut rng, 1..=3);
        let m = rand::Rng::gen_range(&mut rng, 1..=7);
        let r = find_divisible_blocks(&n, k, m, 6).unwrap();
        let b = r.blocks.expect("200 terms are plenty");
        assert!(b.maps_syndetic(k, k));
        for blk in b.blocks() {
            assert_eq!(blk.iter().map(|i| n[i as usize - 1]).sum::<u64>() % m, 0);
        }
    }
}

#[test]
fn counterexample_is_exact_on_chained_progressions() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10 {
        let b = chained_progressions(3, 3, 9, 3, &mut rng).unwrap();
        let r = verify_counterexample(3, 2, 3, &b).unwrap();
        assert!(r.all_half_from_l);
        assert!(r.block_values.iter().all(|v| *v == q(1, 2)));
    }
}
