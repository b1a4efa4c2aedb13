use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::TorusPolynomial;
use crate::error::{Error, Result};
use crate::rational::{q, serde_q, TorusPoint, Q};
use crate::setalg::{enumerate_syndetic, BlockSequence, FiniteIndexSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StabilityViolation {
    Diameter {
        gamma: FiniteIndexSet,
    },
    Periodicity {
        gamma: FiniteIndexSet,
        shifted: FiniteIndexSet,
    },
    OutsideWindow {
        gamma: FiniteIndexSet,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub window: u32,
    pub violations: Vec<StabilityViolation>,
}

/// Stable form on the window [1..W], with W the least multiple of k covering
/// the support.
pub fn is_stable_form(f: &TorusPolynomial, k: u32) -> StabilityReport {
    let top = f.ground().max_elem().unwrap_or(0).max(1);
    let window = top.div_ceil(k) * k;
    is_stable_form_in(f, k, window)
}

/// (i) a_γ = 0 when diam γ > k; (ii) a_{γ+k} = a_γ whenever both sets lie in
/// the window.
pub fn is_stable_form_in(f: &TorusPolynomial, k: u32, window: u32) -> StabilityReport {
    let mut violations = BTreeSet::new();
    for (g, _) in f.support() {
        if g.is_empty() {
            continue;
        }
        if g.max_elem().unwrap() > window {
            violations.insert(StabilityViolation::OutsideWindow { gamma: g.clone() });
            continue;
        }
        if g.diameter().unwrap() > k {
            violations.insert(StabilityViolation::Diameter { gamma: g.clone() });
        }
        let up = g
            .shift(k as i64)
            .filter(|s| s.max_elem().unwrap() <= window);
        let down = g.shift(-(k as i64));
        for (lo, hi) in [(Some(g.clone()), up), (down, Some(g.clone()))] {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if f.coeff(&lo) != f.coeff(&hi) {
                    violations.insert(StabilityViolation::Periodicity {
                        gamma: lo,
                        shifted: hi,
                    });
                }
            }
        }
    }
    StabilityReport {
        stable: violations.is_empty(),
        window,
        violations: violations.into_iter().collect(),
    }
}

/// A stable-form polynomial on all of F∅: a_γ = 0 unless diam γ ≤ k and
/// |γ| ≤ d, and a_{γ+k} = a_γ. Stored through its coefficients with
/// min γ ∈ [1..k].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StableRepr", into = "StableRepr")]
pub struct StableForm {
    m: usize,
    k: u32,
    d: u32,
    constant: TorusPoint,
    base: BTreeMap<FiniteIndexSet, TorusPoint>,
}

#[derive(Serialize, Deserialize)]
struct BaseEntry {
    gamma: FiniteIndexSet,
    a: TorusPoint,
}

#[derive(Serialize, Deserialize)]
struct StableRepr {
    m: usize,
    k: u32,
    d: u32,
    constant: TorusPoint,
    base: Vec<BaseEntry>,
}

impl TryFrom<StableRepr> for StableForm {
    type Error = Error;
    fn try_from(r: StableRepr) -> Result<Self> {
        StableForm::new(
            r.m,
            r.k,
            r.d,
            r.constant,
            r.base.into_iter().map(|e| (e.gamma, e.a)),
        )
    }
}

impl From<StableForm> for StableRepr {
    fn from(s: StableForm) -> Self {
        StableRepr {
            m: s.m,
            k: s.k,
            d: s.d,
            constant: s.constant,
            base: s
                .base
                .into_iter()
                .map(|(gamma, a)| BaseEntry { gamma, a })
                .collect(),
        }
    }
}

impl StableForm {
    pub fn new<I>(m: usize, k: u32, d: u32, constant: TorusPoint, base: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FiniteIndexSet, TorusPoint)>,
    {
        if k == 0 {
            return Err(Error::Parameter("k must be positive".into()));
        }
        if constant.dim() != m {
            return Err(Error::Domain(
                "constant term has the wrong dimension".into(),
            ));
        }
        let mut map = BTreeMap::new();
        for (g, a) in base {
            let (lo, diam) = match (g.min_elem(), g.diameter()) {
                (Some(lo), Ok(diam)) => (lo, diam),
                _ => {
                    return Err(Error::Domain(
                        "base coefficients sit on non-empty sets".into(),
                    ))
                }
            };
            if lo > k || diam > k || g.len() as u32 > d {
                return Err(Error::Domain(format!(
                    "base set {g:?} needs min ≤ {k}, diameter ≤ {k} and size ≤ {d}"
                )));
            }
            if a.dim() != m {
                return Err(Error::Domain(format!(
                    "coefficient on {g:?} has the wrong dimension"
                )));
            }
            if !a.is_zero() {
                map.insert(g, a);
            }
        }
        Ok(StableForm {
            m,
            k,
            d,
            constant,
            base: map,
        })
    }

    /// Reads the base coefficients off a window polynomial that passes
    /// [`is_stable_form_in`].
    pub fn from_window(f: &TorusPolynomial, k: u32, window: u32) -> Result<Self> {
        if window < 2 * k {
            return Err(Error::Parameter(format!(
                "window {window} must be at least 2k"
            )));
        }
        let rep = is_stable_form_in(f, k, window);
        if !rep.stable {
            return Err(Error::Domain(format!(
                "not in stable form: {:?}",
                rep.violations.first()
            )));
        }
        let base = f
            .support()
            .filter(|(g, _)| g.min_elem().is_some_and(|lo| lo <= k))
            .map(|(g, a)| (g.clone(), a.clone()));
        StableForm::new(
            f.dim(),
            k,
            f.degree(),
            f.coeff(&FiniteIndexSet::empty()),
            base,
        )
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn constant(&self) -> &TorusPoint {
        &self.constant
    }

    pub fn base(&self) -> impl Iterator<Item = (&FiniteIndexSet, &TorusPoint)> {
        self.base.iter()
    }

    pub fn with_constant(mut self, c: TorusPoint) -> Self {
        self.constant = c;
        self
    }

    pub fn coeff(&self, g: &FiniteIndexSet) -> TorusPoint {
        let (lo, diam) = match (g.min_elem(), g.diameter()) {
            (Some(lo), Ok(diam)) => (lo, diam),
            _ => return self.constant.clone(),
        };
        if diam > self.k || g.len() as u32 > self.d {
            return TorusPoint::zero(self.m);
        }
        let t = (lo - 1) / self.k * self.k;
        let key = g.shift(-(t as i64)).expect("shift stays positive");
        self.base
            .get(&key)
            .cloned()
            .unwrap_or_else(|| TorusPoint::zero(self.m))
    }

    /// f(α) = a_∅ + Σ over non-empty γ ⊆ α with diam ≤ k, |γ| ≤ d of a_γ.
    pub fn evaluate(&self, alpha: &FiniteIndexSet) -> TorusPoint {
        let mut out = self.constant.clone();
        let e = alpha.elements();
        for (idx, &i) in e.iter().enumerate() {
            let tail: Vec<u32> = e[idx + 1..]
                .iter()
                .copied()
                .take_while(|&x| x <= i + self.k)
                .collect();
            let t = (i - 1) / self.k * self.k;
            for mask in 0u32..1 << tail.len() {
                if mask.count_ones() + 1 > self.d {
                    continue;
                }
                let g = FiniteIndexSet::from_unsorted(
                    std::iter::once(i - t).chain(
                        (0..tail.len())
                            .filter(|j| mask >> j & 1 == 1)
                            .map(|j| tail[j] - t),
                    ),
                );
                if let Some(a) = self.base.get(&g) {
                    out.add_assign_ref(a);
                }
            }
        }
        out
    }

    /// The same map as an explicit coefficient list on subsets of [1..window].
    pub fn to_window(&self, window: u32) -> TorusPolynomial {
        let mut f = TorusPolynomial::zero(self.m, self.d);
        f.set(FiniteIndexSet::empty(), self.constant.clone())
            .expect("constant has the right dimension");
        for i in 1..=window {
            let tail: Vec<u32> = (i + 1..=(i + self.k).min(window)).collect();
            for mask in 0u32..1 << tail.len() {
                if mask.count_ones() + 1 > self.d {
                    continue;
                }
                let g = FiniteIndexSet::from_unsorted(
                    std::iter::once(i).chain(
                        (0..tail.len())
                            .filter(|j| mask >> j & 1 == 1)
                            .map(|j| tail[j]),
                    ),
                );
                let a = self.coeff(&g);
                f.set(g, a).expect("degree bound holds");
            }
        }
        f
    }
}

/// f(α) = ½ Σ (−1)^{|γ|} over non-empty γ ⊆ α with diam γ ≤ k and |γ| ≤ d;
/// every such a_γ equals 1/2 mod 1.
pub fn counterexample_poly(k: u32, d: u32) -> Result<StableForm> {
    if d > k {
        return Err(Error::Parameter(format!(
            "need d ≤ k, got d = {d}, k = {k}"
        )));
    }
    if d == 0 {
        return Err(Error::Parameter("degree must be positive".into()));
    }
    let half = TorusPoint::scalar(q(1, 2));
    let mut base = Vec::new();
    for i in 1..=k {
        let tail: Vec<u32> = (i + 1..=i + k).collect();
        for mask in 0u32..1 << tail.len() {
            if mask.count_ones() < d {
                let g = FiniteIndexSet::from_unsorted(
                    std::iter::once(i).chain(
                        (0..tail.len())
                            .filter(|j| mask >> j & 1 == 1)
                            .map(|j| tail[j]),
                    ),
                );
                base.push((g, half.clone()));
            }
        }
    }
    StableForm::new(1, k, d, TorusPoint::zero(1), base)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceFailure {
    pub blocks: BlockSequence,
    pub beta: FiniteIndexSet,
    pub restricted: TorusPoint,
    pub direct: TorusPoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub holds: bool,
    pub stable_form: bool,
    pub blocks_per_sequence: usize,
    pub sequences_checked: usize,
    pub comparisons: usize,
    #[serde(with = "serde_q")]
    pub worst: Q,
    pub first_failure: Option<InvarianceFailure>,
}

/// Canonical block sequences α_j = {i_j, i_j + k, …, i_{j+k} − k} for all
/// increasing i_1 < … < i_{L+k} with i_j ≡ j (mod k) and every block inside
/// [1..window].
pub fn canonical_block_sequences(k: u32, window: u32, blocks: usize) -> Vec<BlockSequence> {
    fn rec(seq: &mut Vec<u32>, k: u32, window: u32, total: usize, out: &mut Vec<Vec<u32>>) {
        let j = seq.len() as u32 + 1;
        if seq.len() == total {
            out.push(seq.clone());
            return;
        }
        let lo = seq.last().map_or(1, |&x| x + 1);
        let cap = if j > k { window + k } else { window };
        let mut v = lo + ((j % k + k - lo % k) % k);
        while v <= cap {
            seq.push(v);
            rec(seq, k, window, total, out);
            seq.pop();
            v += k;
        }
    }
    let mut raw = Vec::new();
    rec(&mut Vec::new(), k, window, blocks + k as usize, &mut raw);
    raw.into_iter()
        .map(|i| {
            let bl = (0..blocks)
                .map(|j| {
                    FiniteIndexSet::from_unsorted(
                        (i[j]..=i[j + k as usize] - k).step_by(k as usize),
                    )
                })
                .collect();
            BlockSequence::new(bl).expect("canonical blocks are disjoint")
        })
        .collect()
}

/// Checks ‖f(α_β) − f(β)‖ ≤ tol over every canonical block sequence inside
/// the window (k + 1 blocks) and every β ∈ S_k of its index range.
pub fn check_restriction_invariance(
    f: &TorusPolynomial,
    k: u32,
    window: u32,
    tol: &Q,
) -> InvarianceReport {
    check_restriction_invariance_with_blocks(f, k, window, tol, k as usize + 1)
}

pub fn check_restriction_invariance_with_blocks(
    f: &TorusPolynomial,
    k: u32,
    window: u32,
    tol: &Q,
    blocks: usize,
) -> InvarianceReport {
    let stable_form = is_stable_form_in(f, k, window).stable;
    let betas: Vec<FiniteIndexSet> = std::iter::once(FiniteIndexSet::empty())
        .chain(enumerate_syndetic(blocks as u32, k))
        .collect();
    let direct: Vec<TorusPoint> = betas.iter().map(|b| f.evaluate(b)).collect();
    let mut worst = Q::zero();
    let mut first_failure = None;
    let mut comparisons = 0;
    let families = canonical_block_sequences(k, window, blocks);
    for bs in &families {
        for (beta, want) in betas.iter().zip(&direct) {
            let got = f.evaluate(&bs.union(beta).expect("β within the truncation"));
            let gap = (&got - want).norm();
            comparisons += 1;
            if gap > *tol && first_failure.is_none() {
                first_failure = Some(InvarianceFailure {
                    blocks: bs.clone(),
                    beta: beta.clone(),
                    restricted: got,
                    direct: want.clone(),
                });
            }
            if gap > worst {
                worst = gap;
            }
        }
    }
    InvarianceReport {
        holds: first_failure.is_none(),
        stable_form,
        blocks_per_sequence: blocks,
        sequences_checked: families.len(),
        comparisons,
        worst,
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set;

    #[test]
    fn counterexample_values() {
        let f = counterexample_poly(3, 2).unwrap();
        let half = TorusPoint::scalar(q(1, 2));
        assert_eq!(f.evaluate(&set![1]), half);
        assert_eq!(f.evaluate(&set![1, 2]), half);
        assert!(f.evaluate(&set![1, 2, 3]).is_zero());
        assert!(matches!(
            counterexample_poly(2, 3),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn window_form_agrees_with_periodic_evaluation() {
        let f = counterexample_poly(3, 2).unwrap();
        let w = f.to_window(9);
        for s in FiniteIndexSet::interval(1, 9).subsets() {
            assert_eq!(w.evaluate(&s), f.evaluate(&s), "{s:?}");
        }
        assert!(is_stable_form(&w, 3).stable);
        assert_eq!(StableForm::from_window(&w, 3, 9).unwrap(), f);
    }

    #[test]
    fn stability_violations() {
        let mut f = TorusPolynomial::zero(1, 2);
        f.set(set![1, 5], TorusPoint::scalar(q(1, 3))).unwrap();
        let r = is_stable_form(&f, 3);
        assert!(!r.stable);
        assert!(r
            .violations
            .contains(&StabilityViolation::Diameter { gamma: set![1, 5] }));
        let mut c = TorusPolynomial::zero(1, 0);
        c.set(set![], TorusPoint::scalar(q(2, 7))).unwrap();
        assert!(is_stable_form(&c, 3).stable);
    }

    #[test]
    fn canonical_family_shapes() {
        let fam = canonical_block_sequences(2, 6, 2);
        assert!(fam.contains(&BlockSequence::new(vec![set![1, 3], set![2, 4]]).unwrap()));
        assert!(fam.contains(&BlockSequence::identity(2)));
        for b in &fam {
            assert!(b.support().max_elem().unwrap() <= 6);
        }
    }

    #[test]
    fn counterexample_is_restriction_invariant() {
        let f = counterexample_poly(3, 2).unwrap().to_window(12);
        let r = check_restriction_invariance(&f, 3, 12, &Q::zero());
        assert!(r.holds, "{:?}", r.first_failure);
        assert!(r.sequences_checked > 10);
    }

    #[test]
    fn constant_degree_one_fails_unless_zero() {
        let mk = |t: Q| {
            StableForm::new(
                1,
                1,
                1,
                TorusPoint::zero(1),
                [(set![1], TorusPoint::scalar(t))],
            )
            .unwrap()
            .to_window(6)
        };
        assert!(!check_restriction_invariance(&mk(q(1, 3)), 1, 6, &Q::zero()).holds);
        assert!(check_restriction_invariance(&mk(Q::zero()), 1, 6, &Q::zero()).holds);
    }
}
