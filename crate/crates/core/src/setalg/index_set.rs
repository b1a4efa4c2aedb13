use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of positive integers, kept as a strictly increasing list.
/// The empty set is allowed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct FiniteIndexSet(Vec<u32>);

impl FiniteIndexSet {
    pub fn empty() -> Self {
        FiniteIndexSet(Vec::new())
    }

    /// Builds from a strictly increasing list of positive integers.
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::Domain("index sets hold positive integers".into()));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!(
                "elements must be strictly increasing: {elements:?}"
            )));
        }
        Ok(FiniteIndexSet(elements))
    }

    /// Sorts and deduplicates; panics on 0.
    pub fn from_unsorted<I: IntoIterator<Item = u32>>(it: I) -> Self {
        let mut v: Vec<u32> = it.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        assert!(v.first() != Some(&0), "index sets hold positive integers");
        FiniteIndexSet(v)
    }

    pub fn singleton(i: u32) -> Self {
        Self::from_unsorted([i])
    }

    /// `{lo, lo+1, ..., hi}` (empty when lo > hi).
    pub fn interval(lo: u32, hi: u32) -> Self {
        Self::from_unsorted(lo..=hi)
    }

    /// Bit `j` of `mask` stands for the element `j + 1`.
    pub fn from_mask(mask: u64) -> Self {
        FiniteIndexSet(
            (0..64)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| j + 1)
                .collect(),
        )
    }

    /// Inverse of [`from_mask`](Self::from_mask); `None` if an element exceeds 64.
    pub fn to_mask(&self) -> Option<u64> {
        self.0
            .iter()
            .try_fold(0u64, |m, &e| (e <= 64).then(|| m | 1 << (e - 1)))
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_elem(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn max_elem(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    /// Consecutive differences.
    pub fn gaps(&self) -> Result<Vec<u32>> {
        if self.is_empty() {
            return Err(Error::Domain("gaps of the empty set".into()));
        }
        Ok(self.0.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// `max - min`.
    pub fn diameter(&self) -> Result<u32> {
        match (self.min_elem(), self.max_elem()) {
            (Some(a), Some(b)) => Ok(b - a),
            _ => Err(Error::Domain("diameter of the empty set".into())),
        }
    }

    /// Membership in S_k: all gaps at most k. The empty set and singletons
    /// always qualify, so S_0 is exactly the sets of size at most one.
    pub fn is_syndetic(&self, k: u32) -> bool {
        self.0.windows(2).all(|w| w[1] - w[0] <= k)
    }

    pub fn is_subset(&self, other: &FiniteIndexSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &FiniteIndexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &FiniteIndexSet) -> FiniteIndexSet {
        Self::from_unsorted(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &FiniteIndexSet) -> FiniteIndexSet {
        FiniteIndexSet(self.iter().filter(|&x| other.contains(x)).collect())
    }

    pub fn difference(&self, other: &FiniteIndexSet) -> FiniteIndexSet {
        FiniteIndexSet(self.iter().filter(|&x| !other.contains(x)).collect())
    }

    /// Elements lying in `[lo, hi]`.
    pub fn restrict_to(&self, lo: u32, hi: u32) -> FiniteIndexSet {
        FiniteIndexSet(self.iter().filter(|&x| lo <= x && x <= hi).collect())
    }

    /// `{x + t : x ∈ self}`, or `None` if some element would drop below 1.
    pub fn shift(&self, t: i64) -> Option<FiniteIndexSet> {
        let v: Option<Vec<u32>> = self
            .iter()
            .map(|x| {
                let y = x as i64 + t;
                (1..=u32::MAX as i64).contains(&y).then_some(y as u32)
            })
            .collect();
        v.map(FiniteIndexSet)
    }

    /// All subsets, in order of their bitmask over this set's elements.
    pub fn subsets(&self) -> impl Iterator<Item = FiniteIndexSet> + '_ {
        let n = self.len();
        assert!(n < 32, "too many elements to enumerate subsets");
        (0u64..1 << n).map(move |m| {
            FiniteIndexSet(
                (0..n)
                    .filter(|j| m >> j & 1 == 1)
                    .map(|j| self.0[j])
                    .collect(),
            )
        })
    }
}

impl TryFrom<Vec<u32>> for FiniteIndexSet {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        FiniteIndexSet::new(v)
    }
}

impl From<FiniteIndexSet> for Vec<u32> {
    fn from(s: FiniteIndexSet) -> Vec<u32> {
        s.0
    }
}

impl fmt::Debug for FiniteIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Shorthand for literal sets in tests and examples.
#[macro_export]
macro_rules! set {
    () => { $crate::setalg::FiniteIndexSet::empty() };
    ($($x:expr),+ $(,)?) => { $crate::setalg::FiniteIndexSet::from_unsorted([$($x),+]) };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaps_and_diameter() {
        assert_eq!(set![1, 3, 4, 7].gaps().unwrap(), vec![2, 1, 3]);
        assert_eq!(set![5].gaps().unwrap(), Vec::<u32>::new());
        assert_eq!(set![2, 4, 6].gaps().unwrap(), vec![2, 2]);
        assert!(set![].gaps().is_err());
        assert_eq!(set![3, 8].diameter().unwrap(), 5);
        assert_eq!(set![4].diameter().unwrap(), 0);
        assert_eq!(set![1, 2, 9].diameter().unwrap(), 8);
        assert!(set![].diameter().is_err());
    }

    #[test]
    fn syndeticity() {
        assert!(set![2, 4, 6].is_syndetic(2));
        assert!(!set![1, 4].is_syndetic(2));
        assert!(set![7].is_syndetic(1));
        assert!(set![].is_syndetic(0));
        assert!(set![3].is_syndetic(0));
        assert!(!set![3, 4].is_syndetic(0));
    }

    #[test]
    fn validation_and_serde() {
        assert!(FiniteIndexSet::new(vec![2, 2]).is_err());
        assert!(FiniteIndexSet::new(vec![0, 1]).is_err());
        let s: FiniteIndexSet = serde_json::from_str("[1,5,9]").unwrap();
        assert_eq!(s, set![1, 5, 9]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,5,9]");
        assert!(serde_json::from_str::<FiniteIndexSet>("[3,1]").is_err());
    }

    #[test]
    fn masks_roundtrip() {
        let s = set![1, 4, 64];
        assert_eq!(FiniteIndexSet::from_mask(s.to_mask().unwrap()), s);
        assert_eq!(set![65].to_mask(), None);
    }
}
