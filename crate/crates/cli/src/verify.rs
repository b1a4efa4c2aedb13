//! Witness re-verification. Everything here is computed from scratch with
//! plain rational arithmetic and shares no evaluation code with the library.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type R = BigRational;

fn int(x: i64) -> R {
    R::from_integer(BigInt::from(x))
}

/// Distance from x to the nearest integer.
pub fn circle_dist(x: &R) -> R {
    let f = x - x.floor();
    let g = R::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

fn gaps_at_most(e: &[u32], k: u32) -> bool {
    e.windows(2).all(|w| w[1] - w[0] <= k)
}

/// ‖Σ_j c_j x^j‖ with x = n_α, computed by explicit powers.
pub fn poly_witness(coeffs: &[R], n: &[u64], alpha: &[u32], k: u32) -> Option<R> {
    if alpha.is_empty() || !gaps_at_most(alpha, k) {
        return None;
    }
    let x: BigInt = alpha.iter().map(|&i| BigInt::from(n[i as usize - 1])).sum();
    let mut total = R::zero();
    let mut pw = BigInt::one();
    for c in coeffs {
        pw *= &x;
        total += c * R::from_integer(pw.clone());
    }
    Some(circle_dist(&total))
}

type Mat = Vec<Vec<R>>;

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { R::one() } else { R::zero() })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(R::zero(), |acc, t| acc + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

fn mat_pow(g: &Mat, e: &BigInt) -> Mat {
    let mut out = identity(g.len());
    for bit in e.to_str_radix(2).chars() {
        out = mat_mul(&out, &out);
        if bit == '1' {
            out = mat_mul(&out, g);
        }
    }
    out
}

/// Right-multiplies by integer unitriangular matrices, column by column and
/// bottom to top, until every entry above the diagonal lies in [0, 1).
fn reduce(mut h: Mat) -> Mat {
    let n = h.len();
    for j in 1..n {
        for i in (0..j).rev() {
            let t = h[i][j].floor();
            if t.is_zero() {
                continue;
            }
            for r in 0..=i {
                let v = &h[r][j] - &t * &h[r][i];
                h[r][j] = v;
            }
        }
    }
    h
}

/// min over γ with entries in [−2, 2] of max |(ργ − I)_ij|, by plain
/// enumeration of every γ.
fn dist_naive(rho: &Mat) -> R {
    let n = rho.len();
    let pos: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut best: Option<R> = None;
    let total = 5usize.pow(pos.len() as u32);
    for code in 0..total {
        let mut gamma = identity(n);
        let mut c = code;
        for &(i, j) in &pos {
            gamma[i][j] = int((c % 5) as i64 - 2);
            c /= 5;
        }
        let p = mat_mul(rho, &gamma);
        let worst = pos
            .iter()
            .map(|&(i, j)| p[i][j].abs())
            .max()
            .unwrap_or_else(R::zero);
        if best.as_ref().map_or(true, |b| worst < *b) {
            best = Some(worst);
        }
    }
    best.unwrap_or_else(R::zero)
}

/// dist(g^{n_α}Γ, eΓ) for a witness α.
pub fn nil_witness(g: &Mat, n: &[u64], alpha: &[u32], k: u32) -> Option<R> {
    if alpha.is_empty() || !gaps_at_most(alpha, k) || g.len() > 4 {
        return None;
    }
    let x: BigInt = alpha.iter().map(|&i| BigInt::from(n[i as usize - 1])).sum();
    Some(dist_naive(&reduce(mat_pow(g, &x))))
}

/// ½ Σ (−1)^{|γ|} over non-empty γ ⊆ α with diam ≤ k and |γ| ≤ d, mod 1.
/// Since −½ ≡ ½, this is ½ times the number of such γ.
pub fn counterexample_value(alpha: &[u32], k: u32, d: u32) -> R {
    let mut count = 0u64;
    for (i, &a) in alpha.iter().enumerate() {
        let near = alpha[i + 1..].iter().filter(|&&b| b <= a + k).count() as u64;
        // γ = {a} plus s of the `near` later elements
        let mut binom = 1u64;
        for s in 0..=near.min(d as u64 - 1) {
            count += binom;
            binom = binom * (near - s) / (s + 1);
        }
    }
    R::new(BigInt::from(count % 2), BigInt::from(2))
}

/// Every α_β with β k-syndetic over the blocks has n-sum ≡ 0 (mod m) and is
/// itself k-syndetic. Returns the number of β checked.
pub fn divisible_witness(n: &[u64], blocks: &[Vec<u32>], k: u32, m: u64) -> Option<u64> {
    let len = blocks.len().min(20);
    let mut checked = 0;
    for mask in 1u64..1 << len {
        let beta: Vec<u32> = (0..len as u32).filter(|j| mask >> j & 1 == 1).collect();
        if !gaps_at_most(&beta, k) {
            continue;
        }
        let mut union: Vec<u32> = beta
            .iter()
            .flat_map(|&j| blocks[j as usize].iter().copied())
            .collect();
        union.sort_unstable();
        let s: u64 = union.iter().map(|&i| n[i as usize - 1] % m).sum::<u64>() % m;
        if s != 0 || !gaps_at_most(&union, k) {
            return None;
        }
        checked += 1;
    }
    Some(checked)
}

/// Number of non-empty subsets of [1..n] with gaps ≤ k: sets ending at i
/// extend sets ending at i − 1, …, i − k.
pub fn count_syndetic_sets(n: u32, k: u32) -> u128 {
    let mut ending: Vec<u128> = Vec::new();
    for i in 0..n as usize {
        let from = i.saturating_sub(k as usize);
        ending.push(1 + ending[from..i].iter().sum::<u128>());
    }
    ending.iter().sum()
}

/// SG_k ∩ [1..bound] by forward dynamic programming over the last index.
pub fn syndetic_sums(n: &[u64], k: u32, bound: u64) -> Vec<u64> {
    let mut ending: Vec<BTreeSet<u64>> = Vec::with_capacity(n.len());
    for i in 0..n.len() {
        let mut here = BTreeSet::new();
        if n[i] <= bound {
            here.insert(n[i]);
            for j in i.saturating_sub(k as usize)..i {
                for s in &ending[j] {
                    if s + n[i] <= bound {
                        here.insert(s + n[i]);
                    }
                }
            }
        }
        ending.push(here);
    }
    let all: BTreeSet<u64> = ending.into_iter().flatten().collect();
    all.into_iter().collect()
}

/// Value of a periodic stable form: a_∅ plus the base coefficient of the
/// k-translate of every local γ ⊆ α.
pub fn stable_value(
    constant: &[R],
    base: &BTreeMap<Vec<u32>, Vec<R>>,
    k: u32,
    d: u32,
    alpha: &[u32],
) -> Vec<R> {
    let mut out: Vec<R> = constant.to_vec();
    let mut gammas: Vec<Vec<u32>> = Vec::new();
    for (i, &a) in alpha.iter().enumerate() {
        let near: Vec<u32> = alpha[i + 1..]
            .iter()
            .copied()
            .filter(|&b| b <= a + k)
            .collect();
        for mask in 0u32..1 << near.len() {
            if mask.count_ones() + 1 > d {
                continue;
            }
            let mut g = vec![a];
            g.extend(
                (0..near.len())
                    .filter(|j| mask >> j & 1 == 1)
                    .map(|j| near[j]),
            );
            gammas.push(g);
        }
    }
    for g in gammas {
        let t = (g[0] - 1) / k * k;
        let key: Vec<u32> = g.iter().map(|x| x - t).collect();
        if let Some(a) = base.get(&key) {
            for (o, x) in out.iter_mut().zip(a) {
                *o += x;
            }
        }
    }
    out
}

/// Abelian cube test: every (d+1)-face has alternating sum 0 mod 1.
pub fn abelian_cube(values: &[Vec<R>], d: u32) -> bool {
    let r = values.len().trailing_zeros() as usize;
    let f = d as usize + 1;
    if r < f {
        return true;
    }
    // a face: choose f free coordinates, fix the rest
    for free in 0usize..1 << r {
        if free.count_ones() as usize != f {
            continue;
        }
        for fixed in 0usize..1 << r {
            if fixed & free != 0 {
                continue;
            }
            let dim = values[0].len();
            let mut sum = vec![R::zero(); dim];
            for sub in 0usize..1 << r {
                if sub & !free != 0 {
                    continue;
                }
                let v = &values[fixed | sub];
                let neg = sub.count_ones() % 2 == 1;
                for (s, x) in sum.iter_mut().zip(v) {
                    if neg {
                        *s -= x;
                    } else {
                        *s += x;
                    }
                }
            }
            if sum.iter().any(|x| !circle_dist(x).is_zero()) {
                return false;
            }
        }
    }
    true
}
