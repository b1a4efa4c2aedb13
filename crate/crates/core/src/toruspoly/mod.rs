//! Torus-valued polynomial maps on finite index sets, in coefficient form
//! f(α) = Σ_{γ⊆α} a_γ.

mod lift;
mod stable;

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::TorusPoint;
use crate::setalg::{BlockSequence, FiniteIndexSet};

pub use lift::{lift_integer_polynomial, LiftReport, RealPolynomialApprox};
pub use stable::{
    canonical_block_sequences, check_restriction_invariance,
    check_restriction_invariance_with_blocks, counterexample_poly, is_stable_form,
    is_stable_form_in, InvarianceFailure, InvarianceReport, StabilityReport, StabilityViolation,
    StableForm,
};

/// Coefficient form of a polynomial map F∅ → T^m. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPolynomial {
    m: usize,
    degree: u32,
    coeffs: BTreeMap<FiniteIndexSet, TorusPoint>,
}

impl TorusPolynomial {
    pub fn zero(m: usize, degree: u32) -> Self {
        TorusPolynomial {
            m,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs<I>(m: usize, degree: u32, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FiniteIndexSet, TorusPoint)>,
    {
        let mut f = Self::zero(m, degree);
        for (g, a) in coeffs {
            f.add_to(g, &a)?;
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Largest |γ| over the stored support.
    pub fn effective_degree(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|g| g.len() as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, gamma: &FiniteIndexSet) -> TorusPoint {
        self.coeffs
            .get(gamma)
            .cloned()
            .unwrap_or_else(|| TorusPoint::zero(self.m))
    }

    pub fn support(&self) -> impl Iterator<Item = (&FiniteIndexSet, &TorusPoint)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Union of all γ in the support.
    pub fn ground(&self) -> FiniteIndexSet {
        FiniteIndexSet::from_unsorted(self.coeffs.keys().flat_map(|g| g.iter()))
    }

    pub fn set(&mut self, gamma: FiniteIndexSet, a: TorusPoint) -> Result<()> {
        self.check_entry(&gamma, &a)?;
        if a.is_zero() {
            self.coeffs.remove(&gamma);
        } else {
            self.coeffs.insert(gamma, a);
        }
        Ok(())
    }

    pub fn add_to(&mut self, gamma: FiniteIndexSet, a: &TorusPoint) -> Result<()> {
        self.check_entry(&gamma, a)?;
        let sum = &self.coeff(&gamma) + a;
        self.set(gamma, sum)
    }

    fn check_entry(&self, gamma: &FiniteIndexSet, a: &TorusPoint) -> Result<()> {
        if a.dim() != self.m {
            return Err(Error::Domain(format!(
                "coefficient of dimension {} in a polynomial of dimension {}",
                a.dim(),
                self.m
            )));
        }
        if gamma.len() as u32 > self.degree && !a.is_zero() {
            return Err(Error::Domain(format!(
                "coefficient on {gamma:?} exceeds declared degree {}",
                self.degree
            )));
        }
        Ok(())
    }

    /// f(α) = Σ_{γ⊆α} a_γ.
    pub fn evaluate(&self, alpha: &FiniteIndexSet) -> TorusPoint {
        let mut out = TorusPoint::zero(self.m);
        for (g, a) in &self.coeffs {
            if g.is_subset(alpha) {
                out.add_assign_ref(a);
            }
        }
        out
    }

    /// Δ_β f(α) = f(α ∪ β) − f(α) for α disjoint from β, with coefficients
    /// b_γ = Σ_{∅≠δ⊆β} a_{γ∪δ} on γ disjoint from β.
    pub fn discrete_difference(&self, beta: &FiniteIndexSet) -> Result<TorusPolynomial> {
        if beta.is_empty() {
            return Err(Error::Domain("difference along the empty set".into()));
        }
        let mut out = TorusPolynomial::zero(self.m, self.degree.saturating_sub(1));
        for (g, a) in &self.coeffs {
            if !g.is_disjoint(beta) {
                out.add_to(g.difference(beta), a)?;
            }
        }
        Ok(out)
    }

    /// f̃(β) = f(α_β). The coefficient a_γ moves to the set of blocks that γ
    /// meets.
    pub fn restrict(&self, b: &BlockSequence) -> Result<TorusPolynomial> {
        let owner: BTreeMap<u32, u32> = b
            .blocks()
            .iter()
            .enumerate()
            .flat_map(|(i, blk)| blk.iter().map(move |x| (x, i as u32 + 1)))
            .collect();
        let mut out = TorusPolynomial::zero(self.m, self.degree);
        for (g, a) in &self.coeffs {
            let mut idx = Vec::with_capacity(g.len());
            for x in g.iter() {
                match owner.get(&x) {
                    Some(&i) => idx.push(i),
                    None => {
                        return Err(Error::OutOfRange(format!(
                            "coefficient on {g:?} uses {x}, which no block covers"
                        )))
                    }
                }
            }
            out.add_to(FiniteIndexSet::from_unsorted(idx), a)?;
        }
        Ok(out)
    }
}

/// Values of f on every subset of `ground`, as a bitmask-indexed table.
pub fn value_table(f: &TorusPolynomial, ground: &FiniteIndexSet) -> Vec<TorusPoint> {
    ground.subsets().map(|s| f.evaluate(&s)).collect()
}

/// Möbius inversion on the subset lattice, in place: turns values into
/// coefficients a_γ = Σ_{δ⊆γ} (−1)^{|γ∖δ|} v(δ).
pub fn mobius_in_place(table: &mut [TorusPoint]) {
    let n = table.len().trailing_zeros();
    assert_eq!(table.len(), 1 << n, "table size must be a power of two");
    for bit in 0..n {
        for mask in 0..table.len() {
            if mask >> bit & 1 == 1 {
                let lower = table[mask ^ 1 << bit].clone();
                table[mask].sub_assign_ref(&lower);
            }
        }
    }
}

/// Recovers coefficients of degree ≤ d from values on every subset of the
/// ground set (the union of the keys).
pub fn coefficients_from_values(
    values: &BTreeMap<FiniteIndexSet, TorusPoint>,
    d: u32,
    m: usize,
) -> Result<TorusPolynomial> {
    let ground = FiniteIndexSet::from_unsorted(values.keys().flat_map(|g| g.iter()));
    if ground.len() > 24 {
        return Err(Error::Parameter(format!(
            "ground set of {} elements is too large",
            ground.len()
        )));
    }
    let mut table = Vec::with_capacity(1 << ground.len());
    for s in ground.subsets() {
        let v = values
            .get(&s)
            .ok_or_else(|| Error::IncompleteInput(format!("no value for {s:?}")))?;
        if v.dim() != m {
            return Err(Error::Domain(format!(
                "value at {s:?} has the wrong dimension"
            )));
        }
        table.push(v.clone());
    }
    mobius_in_place(&mut table);
    let mut f = TorusPolynomial::zero(m, d);
    for (s, a) in ground.subsets().zip(table) {
        if s.len() as u32 <= d {
            f.set(s, a)?;
        }
    }
    Ok(f)
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    gamma: FiniteIndexSet,
    a: TorusPoint,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    m: usize,
    d: u32,
    coeffs: Vec<CoeffEntry>,
}

impl Serialize for TorusPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            m: self.m,
            d: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(g, a)| CoeffEntry {
                    gamma: g.clone(),
                    a: a.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        TorusPolynomial::from_coeffs(r.m, r.d, r.coeffs.into_iter().map(|e| (e.gamma, e.a)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::set;

    fn pt(n: i64, d: i64) -> TorusPoint {
        TorusPoint::scalar(q(n, d))
    }

    fn sample() -> TorusPolynomial {
        TorusPolynomial::from_coeffs(1, 2, [(set![1], pt(1, 3)), (set![1, 2], pt(1, 4))]).unwrap()
    }

    #[test]
    fn evaluation() {
        let f = sample();
        assert_eq!(f.evaluate(&set![1, 2]), pt(7, 12));
        assert_eq!(f.evaluate(&set![]), pt(0, 1));
        let mut g = sample();
        g.set(set![], pt(2, 5)).unwrap();
        assert_eq!(g.evaluate(&set![]), pt(2, 5));
    }

    #[test]
    fn difference_matches_subtraction() {
        let f = sample();
        let df = f.discrete_difference(&set![2]).unwrap();
        assert_eq!(df.evaluate(&set![]), pt(0, 1));
        assert_eq!(df.evaluate(&set![1]), pt(1, 4));
        assert!(f.discrete_difference(&set![]).is_err());
        let lin =
            TorusPolynomial::from_coeffs(1, 1, [(set![1], pt(1, 3)), (set![2], pt(1, 5))]).unwrap();
        let d = lin.discrete_difference(&set![2, 7]).unwrap();
        assert_eq!(d.support_len(), 1);
        assert_eq!(d.coeff(&set![]), pt(1, 5));
    }

    #[test]
    fn inclusion_exclusion_example() {
        let vals: BTreeMap<_, _> = [
            (set![], pt(0, 1)),
            (set![1], pt(1, 3)),
            (set![2], pt(1, 2)),
            (set![1, 2], pt(1, 2)),
        ]
        .into_iter()
        .collect();
        let f = coefficients_from_values(&vals, 2, 1).unwrap();
        assert_eq!(f.coeff(&set![1, 2]), pt(2, 3));
        let mut partial = vals.clone();
        partial.remove(&set![2]);
        assert!(matches!(
            coefficients_from_values(&partial, 2, 1),
            Err(Error::IncompleteInput(_))
        ));
    }

    #[test]
    fn constant_values_give_constant_polynomial() {
        let g = set![1, 2, 3];
        let vals: BTreeMap<_, _> = g.subsets().map(|s| (s, pt(3, 7))).collect();
        let f = coefficients_from_values(&vals, 3, 1).unwrap();
        assert_eq!(f.support_len(), 1);
        assert_eq!(f.coeff(&set![]), pt(3, 7));
    }

    #[test]
    fn restriction_to_identity_blocks_is_identity() {
        let f = sample();
        assert_eq!(f.restrict(&BlockSequence::identity(3)).unwrap(), f);
        let b = BlockSequence::new(vec![set![2]]).unwrap();
        assert!(matches!(f.restrict(&b), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn json_roundtrip() {
        let f = sample();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"m":1,"d":2,"coeffs":[{"gamma":[1],"a":["1/3"]},{"gamma":[1,2],"a":["1/4"]}]}"#
        );
        let g: TorusPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
