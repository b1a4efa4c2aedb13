use super::FiniteIndexSet;

/// Bitmasks (bit j ↔ element j+1) of the non-empty k-syndetic subsets of
/// [1..n] whose maximum is `max`, in lexicographic order of element lists.
pub fn syndetic_masks_with_max(max: u32, k: u32) -> Vec<u64> {
    assert!(
        (1..=64).contains(&max),
        "maximum element must lie in 1..=64"
    );
    let mut out = Vec::new();
    for start in 1..=max {
        extend_to(start, 1u64 << (start - 1), max, k, &mut out);
    }
    out
}

fn extend_to(cur: u32, mask: u64, max: u32, k: u32, out: &mut Vec<u64>) {
    if cur == max {
        out.push(mask);
        return;
    }
    if k == 0 {
        return;
    }
    for next in cur + 1..=(cur + k).min(max) {
        extend_to(next, mask | 1 << (next - 1), max, k, out);
    }
}

/// All non-empty k-syndetic subsets of [1..n] as bitmasks, in canonical order:
/// increasing maximum element, then lexicographic on the element list.
pub fn syndetic_masks(n: u32, k: u32) -> Vec<u64> {
    (1..=n)
        .flat_map(|m| syndetic_masks_with_max(m, k))
        .collect()
}

/// Streams the canonical enumeration as index sets.
pub fn enumerate_syndetic(n: u32, k: u32) -> impl Iterator<Item = FiniteIndexSet> {
    (1..=n).flat_map(move |m| {
        syndetic_masks_with_max(m, k)
            .into_iter()
            .map(FiniteIndexSet::from_mask)
    })
}

/// Number of non-empty k-syndetic subsets of [1..n], without enumerating them.
pub fn count_syndetic(n: u32, k: u32) -> u128 {
    // c[m]: sets with maximum m
    let mut c: Vec<u128> = vec![0; n as usize + 1];
    for m in 1..=n as usize {
        let lo = m.saturating_sub(k as usize).max(1);
        c[m] = 1 + (lo..m).map(|j| c[j]).sum::<u128>();
    }
    c.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set;

    #[test]
    fn small_enumerations() {
        let v: Vec<_> = enumerate_syndetic(3, 1).collect();
        assert_eq!(
            v,
            vec![
                set![1],
                set![1, 2],
                set![2],
                set![1, 2, 3],
                set![2, 3],
                set![3]
            ]
        );
        let v: Vec<_> = enumerate_syndetic(2, 2).collect();
        assert_eq!(v, vec![set![1], set![1, 2], set![2]]);
        let v: Vec<_> = enumerate_syndetic(1, 5).collect();
        assert_eq!(v, vec![set![1]]);
    }

    #[test]
    fn zero_gap_bound_gives_singletons() {
        let v: Vec<_> = enumerate_syndetic(4, 0).collect();
        assert_eq!(v, vec![set![1], set![2], set![3], set![4]]);
        assert_eq!(count_syndetic(4, 0), 4);
    }

    #[test]
    fn counts_match_dp() {
        for n in 1..=12 {
            for k in 0..=4 {
                assert_eq!(syndetic_masks(n, k).len() as u128, count_syndetic(n, k));
            }
        }
    }
}
