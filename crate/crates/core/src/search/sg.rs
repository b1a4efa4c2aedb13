use std::collections::BTreeSet;

/// SG_k(n_i) ∩ [1..bound]: sums n_α over k-syndetic α within the truncation,
/// pruned once a partial sum exceeds the bound (terms are positive).
pub fn sg_enumerate(n: &[u64], k: u32, bound: u64) -> Vec<u64> {
    let mut out = BTreeSet::new();
    for start in 0..n.len() {
        walk(n, k as usize, bound, start, 0, &mut out);
    }
    out.into_iter().collect()
}

fn walk(n: &[u64], k: usize, bound: u64, at: usize, acc: u64, out: &mut BTreeSet<u64>) {
    let s = match acc.checked_add(n[at]) {
        Some(s) if s <= bound => s,
        _ => return,
    };
    out.insert(s);
    for next in at + 1..=(at + k).min(n.len() - 1) {
        walk(n, k, bound, next, s, out);
    }
}
