//! Upper unitriangular rational matrices modulo the integer lattice.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, frac, parse_q, TorusPoint, Q};

/// An n×n upper unitriangular matrix with exact rational entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitriangularElement {
    n: usize,
    entries: Vec<Q>,
}

impl UnitriangularElement {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "matrix size must be positive");
        let mut entries = vec![Q::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Q::one();
        }
        UnitriangularElement { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Domain("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, x) in row.into_iter().enumerate() {
                let ok = match i.cmp(&j) {
                    std::cmp::Ordering::Equal => x.is_one(),
                    std::cmp::Ordering::Greater => x.is_zero(),
                    std::cmp::Ordering::Less => true,
                };
                if !ok {
                    return Err(Error::Domain(format!(
                        "entry ({}, {}) breaks the unitriangular shape",
                        i + 1,
                        j + 1
                    )));
                }
                entries.push(x);
            }
        }
        Ok(UnitriangularElement { n, entries })
    }

    /// Builds from the strictly upper entries listed by offset, then row:
    /// (0,1), (1,2), …, (0,2), (1,3), …
    pub fn from_offsets(n: usize, upper: &[Q]) -> Result<Self> {
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::Domain(format!(
                "{} upper entries given, a {n}×{n} matrix needs {}",
                upper.len(),
                n * (n - 1) / 2
            )));
        }
        let mut g = Self::identity(n);
        for (idx, (i, j)) in Self::upper_positions(n).enumerate() {
            g.set(i, j, upper[idx].clone());
        }
        Ok(g)
    }

    /// [[1, a, c], [0, 1, b], [0, 0, 1]].
    pub fn heisenberg(a: Q, b: Q, c: Q) -> Self {
        Self::from_offsets(3, &[a, b, c]).expect("3×3 has three upper entries")
    }

    /// Strictly upper positions ordered by offset, then row.
    pub fn upper_positions(n: usize) -> impl Iterator<Item = (usize, usize)> {
        (1..n).flat_map(move |o| (0..n - o).map(move |i| (i, i + o)))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, x: Q) {
        self.entries[i * self.n + j] = x;
    }

    pub fn upper_entries(&self) -> Vec<Q> {
        Self::upper_positions(self.n)
            .map(|(i, j)| self.get(i, j).clone())
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        Self::upper_positions(self.n).all(|(i, j)| self.get(i, j).is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::identity(n);
        for (i, j) in Self::upper_positions(n) {
            let mut s = Q::zero();
            for m in i..=j {
                let a = self.get(i, m);
                let b = other.get(m, j);
                if !a.is_zero() && !b.is_zero() {
                    s += a * b;
                }
            }
            out.set(i, j, s);
        }
        out
    }

    /// Inverse by back substitution on g·h = I.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let mut out = Self::identity(n);
        for j in 1..n {
            for i in (0..j).rev() {
                let mut s = Q::zero();
                for m in i + 1..=j {
                    s += self.get(i, m) * out.get(m, j);
                }
                out.set(i, j, -s);
            }
        }
        out
    }

    /// g^e by binary exponentiation; negative e uses the inverse.
    pub fn power(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// g^e for an arbitrary-size exponent.
    pub fn power_big(&self, e: &BigInt) -> Self {
        let base = if e.is_negative() {
            self.inverse()
        } else {
            self.clone()
        };
        let mut acc = Self::identity(self.n);
        let mag = e.magnitude();
        for bit in (0..mag.bits()).rev() {
            acc = acc.mul(&acc);
            if mag.bit(bit) {
                acc = acc.mul(&base);
            }
        }
        acc
    }

    /// g⁻¹ h⁻¹ g h.
    pub fn commutator(&self, h: &Self) -> Self {
        self.inverse().mul(&h.inverse()).mul(self).mul(h)
    }

    /// Membership in G_i of the lower central series: superdiagonal offsets
    /// 1..i−1 vanish (G_0 = G_1 = G).
    pub fn in_level(&self, i: usize) -> bool {
        (1..i.min(self.n)).all(|o| (0..self.n - o).all(|r| self.get(r, r + o).is_zero()))
    }

    /// Largest i ≥ 1 with g ∈ G_i; the identity has level n.
    pub fn filtration_level(&self) -> usize {
        (1..self.n)
            .find(|&o| (0..self.n - o).any(|r| !self.get(r, r + o).is_zero()))
            .unwrap_or(self.n)
    }

    /// The representative g·γ (γ integer unitriangular) with every strictly
    /// upper entry in [0, 1). Offsets ascending, left to right within an
    /// offset; clearing (i, j) right-multiplies by I − ⌊x⌋ e_{ij}, which only
    /// touches column j above row i.
    pub fn reduce_mod_lattice(&self) -> Self {
        let mut g = self.clone();
        let n = self.n;
        for (i, j) in Self::upper_positions(n) {
            let fl = g.get(i, j).floor();
            if fl.is_zero() {
                continue;
            }
            for r in 0..=i {
                let gri = g.get(r, i).clone();
                if !gri.is_zero() {
                    let v = g.get(r, j) - &fl * gri;
                    g.set(r, j, v);
                }
            }
        }
        g
    }

    /// First-superdiagonal entries mod 1: the image in G/ΓG_2.
    pub fn project_abelian(&self) -> TorusPoint {
        TorusPoint::new((0..self.n - 1).map(|i| frac(self.get(i, i + 1))).collect())
    }
}

/// min over integer unitriangular γ with entries in [−R, R] of the max-norm
/// of reduce(g)·γ − I. Exact branch and bound: entries are fixed by offset, so
/// the (i, j) entry of ργ only depends on γ entries already chosen plus γ_ij.
pub fn dist_to_identity(g: &UnitriangularElement, radius: u32) -> Q {
    let rho = g.reduce_mod_lattice();
    let n = rho.n;
    if n == 1 {
        return Q::zero();
    }
    let positions: Vec<(usize, usize)> = UnitriangularElement::upper_positions(n).collect();
    let mut gamma = vec![Q::zero(); n * n];
    let mut best: Option<Q> = None;
    branch(
        &rho,
        &positions,
        0,
        &mut gamma,
        &Q::zero(),
        radius as i64,
        &mut best,
    );
    best.expect("the zero translate is always admissible")
}

fn branch(
    rho: &UnitriangularElement,
    positions: &[(usize, usize)],
    at: usize,
    gamma: &mut Vec<Q>,
    worst: &Q,
    radius: i64,
    best: &mut Option<Q>,
) {
    let n = rho.n;
    if at == positions.len() {
        if best.as_ref().map_or(true, |b| worst < b) {
            *best = Some(worst.clone());
        }
        return;
    }
    let (i, j) = positions[at];
    let mut base = rho.get(i, j).clone();
    for m in i + 1..j {
        let g = &gamma[m * n + j];
        if !g.is_zero() {
            base += rho.get(i, m) * g;
        }
    }
    let mut cands: Vec<(Q, i64)> = (-radius..=radius)
        .map(|t| ((&base + Q::from_integer(t.into())).abs(), t))
        .collect();
    cands.sort();
    for (v, t) in cands {
        if best.as_ref().is_some_and(|b| v >= *b) {
            break;
        }
        gamma[i * n + j] = Q::from_integer(t.into());
        let w = if v > *worst { v } else { worst.clone() };
        branch(rho, positions, at + 1, gamma, &w, radius, best);
    }
    gamma[i * n + j] = Q::zero();
}

/// reduce(g^n).
pub fn orbit_value(g: &UnitriangularElement, n: i64) -> UnitriangularElement {
    g.power(n).reduce_mod_lattice()
}

pub fn orbit_value_big(g: &UnitriangularElement, n: &BigInt) -> UnitriangularElement {
    g.power_big(n).reduce_mod_lattice()
}

impl fmt::Debug for UnitriangularElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.n)
            .map(|r| format!("[{}]", r.iter().map(fmt_q).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl Serialize for UnitriangularElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .entries
            .chunks(self.n)
            .map(|r| r.iter().map(fmt_q).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitriangularElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let parsed: Result<Vec<Vec<Q>>> = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_q(s)).collect())
            .collect();
        parsed
            .and_then(UnitriangularElement::from_rows)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn h(a: Q, b: Q, c: Q) -> UnitriangularElement {
        UnitriangularElement::heisenberg(a, b, c)
    }

    #[test]
    fn levels() {
        assert_eq!(UnitriangularElement::identity(3).filtration_level(), 3);
        assert_eq!(h(qi(1), qi(0), qi(0)).filtration_level(), 1);
        assert_eq!(h(qi(0), qi(0), q(1, 2)).filtration_level(), 2);
        assert!(UnitriangularElement::identity(4).in_level(7));
    }

    #[test]
    fn powers() {
        let g = h(qi(1), qi(1), qi(0));
        assert_eq!(g.power(2), h(qi(2), qi(2), qi(1)));
        assert_eq!(g.power(1), g);
        assert!(g.power(0).is_identity());
        assert!(g.power(-3).mul(&g.power(3)).is_identity());
        assert_eq!(g.power_big(&BigInt::from(-5)), g.power(-5));
    }

    #[test]
    fn reduction_examples() {
        assert!(h(qi(2), qi(0), qi(0)).reduce_mod_lattice().is_identity());
        assert_eq!(
            h(q(1, 2), qi(0), q(5, 4)).reduce_mod_lattice(),
            h(q(1, 2), qi(0), q(1, 4))
        );
    }

    #[test]
    fn distances() {
        assert!(dist_to_identity(&UnitriangularElement::identity(3), 2).is_zero());
        assert_eq!(dist_to_identity(&h(q(9, 10), qi(0), qi(0)), 2), q(1, 10));
    }

    #[test]
    fn orbit_examples() {
        assert!(orbit_value(&h(q(3, 5), qi(0), qi(0)), 5).is_identity());
        let g = h(q(1, 3), q(1, 2), qi(0));
        let o = orbit_value(&g, 6);
        assert_eq!(o, h(qi(0), qi(0), q(1, 2)));
        assert_eq!(dist_to_identity(&o, 2), q(1, 2));
    }

    #[test]
    fn abelian_projection() {
        assert_eq!(
            h(q(1, 3), q(1, 2), qi(7)).project_abelian(),
            TorusPoint::new(vec![q(1, 3), q(1, 2)])
        );
    }

    #[test]
    fn json_shape() {
        let g = h(q(1, 3), qi(0), qi(2));
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(
            s,
            r#"[["1/1","1/3","2/1"],["0/1","1/1","0/1"],["0/1","0/1","1/1"]]"#
        );
        let back: UnitriangularElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<UnitriangularElement>(r#"[["2/1"]]"#).is_err());
    }
}
