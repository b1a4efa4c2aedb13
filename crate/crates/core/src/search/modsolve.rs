//! Linear congruences A·c ≡ b (mod Q) by diagonalising over each prime-power
//! factor of Q and recombining with the Chinese remainder theorem.

use num_integer::Integer;

/// A solution with at most rank-many non-zero entries, each in [0, Q), or
/// `None` when b lies outside the column span mod Q.
pub fn solve_mod(a: &[Vec<u64>], b: &[u64], modulus: u64) -> Option<Vec<u64>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut acc = vec![0u64; cols];
    let mut acc_mod = 1u64;
    for (p, e) in factor(modulus) {
        let pe = p.pow(e);
        let part = solve_prime_power(a, b, p, e)?;
        for (x, y) in acc.iter_mut().zip(part) {
            *x = crt(*x, acc_mod, y, pe);
        }
        acc_mod *= pe;
    }
    Some(acc)
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

fn crt(x: u64, m: u64, y: u64, n: u64) -> u64 {
    // x + m·t ≡ y (mod n)
    let t = mulmod((y + n - x % n) % n, inv_mod(m % n, n), n);
    x + m * t
}

fn valuation(mut x: u64, p: u64, e: u32) -> u32 {
    if x == 0 {
        return e;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn solve_prime_power(a: &[Vec<u64>], b: &[u64], p: u64, e: u32) -> Option<Vec<u64>> {
    let q = p.pow(e);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .map(|r| r.iter().map(|x| x % q).collect())
        .collect();
    let mut rhs: Vec<u64> = b.iter().map(|x| x % q).collect();
    // column operations, so that c = V·y
    let mut v: Vec<Vec<u64>> = (0..cols)
        .map(|i| (0..cols).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut pivots: Vec<u32> = Vec::new();
    for s in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in s..rows {
            for j in s..cols {
                let val = valuation(m[i][j], p, e);
                if val < e && best.map_or(true, |(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };
        m.swap(s, pi);
        rhs.swap(s, pi);
        for row in m.iter_mut() {
            row.swap(s, pj);
        }
        for row in v.iter_mut() {
            row.swap(s, pj);
        }
        let pv = p.pow(val);
        let unit_inv = inv_mod(m[s][s] / pv, q);
        for i in s + 1..rows {
            if m[i][s] == 0 {
                continue;
            }
            let f = mulmod(m[i][s] / pv, unit_inv, q);
            for j in s..cols {
                let sub = mulmod(f, m[s][j], q);
                m[i][j] = (m[i][j] + q - sub) % q;
            }
            rhs[i] = (rhs[i] + q - mulmod(f, rhs[s], q)) % q;
        }
        for j in s + 1..cols {
            if m[s][j] == 0 {
                continue;
            }
            let f = mulmod(m[s][j] / pv, unit_inv, q);
            for row in m.iter_mut() {
                let sub = mulmod(f, row[s], q);
                row[j] = (row[j] + q - sub) % q;
            }
            for row in v.iter_mut() {
                let sub = mulmod(f, row[s], q);
                row[j] = (row[j] + q - sub) % q;
            }
        }
        pivots.push(val);
    }
    let mut y = vec![0u64; cols];
    for (s, &val) in pivots.iter().enumerate() {
        if valuation(rhs[s], p, e) < val {
            return None;
        }
        let pv = p.pow(val);
        let unit_inv = inv_mod(m[s][s] / pv, q);
        y[s] = mulmod(rhs[s] / pv, unit_inv, q);
    }
    if rhs[pivots.len()..].iter().any(|&x| x != 0) {
        return None;
    }
    Some(
        (0..cols)
            .map(|i| (0..cols).fold(0u64, |acc, j| (acc + mulmod(v[i][j], y[j], q)) % q))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(a: &[Vec<u64>], c: &[u64], q: u64) -> Vec<u64> {
        a.iter()
            .map(|r| r.iter().zip(c).fold(0, |acc, (x, y)| (acc + x * y) % q))
            .collect()
    }

    #[test]
    fn zero_divisors() {
        // 2c ≡ 1 (mod 4) has no solution, 2c ≡ 2 does
        assert!(solve_mod(&[vec![2]], &[1], 4).is_none());
        let c = solve_mod(&[vec![2]], &[2], 4).unwrap();
        assert_eq!(apply(&[vec![2]], &c, 4), vec![2]);
    }

    proptest! {
        #[test]
        fn solves_consistent_systems(
            q in 2u64..400,
            a in prop::collection::vec(prop::collection::vec(0u64..400, 4), 3),
            c in prop::collection::vec(0u64..400, 4),
        ) {
            let b = apply(&a, &c, q);
            let sol = solve_mod(&a, &b, q).expect("b is in the image");
            prop_assert_eq!(apply(&a, &sol, q), b);
        }
    }
}
