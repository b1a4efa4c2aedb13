//! Continued-fraction convergents, used to supply rational stand-ins for
//! irrational coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

const PI_TERMS: [i64; 20] = [
    3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2,
];

/// Partial quotients of sqrt(n) for non-square n.
pub fn sqrt_terms(n: u64, count: usize) -> Result<Vec<i64>> {
    let a0 = (n as f64).sqrt() as u64;
    let a0 = (a0.saturating_sub(1)..=a0 + 1)
        .filter(|a| a * a <= n)
        .max()
        .unwrap_or(0);
    if a0 * a0 == n {
        return Err(Error::Parameter(format!("{n} is a perfect square")));
    }
    let (mut m, mut d, mut a) = (0i64, 1i64, a0 as i64);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        out.push(a);
        m = d * a - m;
        d = (n as i64 - m * m) / d;
        a = (a0 as i64 + m) / d;
    }
    Ok(out)
}

/// Partial quotients of e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...].
pub fn e_terms(count: usize) -> Vec<i64> {
    let mut out = vec![2];
    let mut j = 1;
    while out.len() < count {
        out.extend_from_slice(&[1, 2 * j, 1]);
        j += 1;
    }
    out.truncate(count);
    out
}

/// Convergents p_i/q_i of a continued fraction.
pub fn convergents(terms: &[i64]) -> Vec<Q> {
    let (mut p0, mut p1) = (
        BigInt::one(),
        BigInt::from(terms.first().copied().unwrap_or(0)),
    );
    let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(terms.len());
    if terms.is_empty() {
        return out;
    }
    out.push(Q::new(p1.clone(), q1.clone()));
    for &a in &terms[1..] {
        let a = BigInt::from(a);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        out.push(Q::new(p1.clone(), q1.clone()));
    }
    out
}

/// A named irrational constant: `sqrtN`, `e`, `pi`, `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irrational {
    Sqrt(u64),
    E,
    Pi,
    Phi,
}

impl Irrational {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(Irrational::E),
            "pi" => Ok(Irrational::Pi),
            "phi" => Ok(Irrational::Phi),
            _ => {
                let n = s
                    .strip_prefix("sqrt")
                    .and_then(|r| r.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown irrational {s:?}")))?;
                sqrt_terms(n, 1)?;
                Ok(Irrational::Sqrt(n))
            }
        }
    }

    pub fn terms(&self, count: usize) -> Vec<i64> {
        match *self {
            Irrational::Sqrt(n) => sqrt_terms(n, count).expect("validated non-square"),
            Irrational::E => e_terms(count),
            Irrational::Pi => PI_TERMS[..count.min(PI_TERMS.len())].to_vec(),
            Irrational::Phi => vec![1; count],
        }
    }

    /// The `index`-th convergent (0-based).
    pub fn convergent(&self, index: usize) -> Result<Q> {
        if matches!(self, Irrational::Pi) && index >= PI_TERMS.len() {
            return Err(Error::Parameter(format!(
                "only {} convergents of pi are tabulated",
                PI_TERMS.len()
            )));
        }
        Ok(convergents(&self.terms(index + 1))
            .pop()
            .expect("non-empty"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn sqrt2_convergents() {
        let c = convergents(&sqrt_terms(2, 8).unwrap());
        assert_eq!(c[7], q(577, 408));
        assert_eq!(Irrational::Sqrt(2).convergent(8).unwrap(), q(1393, 985));
        assert_eq!(Irrational::Sqrt(2).convergent(9).unwrap(), q(3363, 2378));
    }

    #[test]
    fn known_expansions() {
        assert_eq!(sqrt_terms(7, 5).unwrap(), vec![2, 1, 1, 1, 4]);
        assert_eq!(e_terms(9), vec![2, 1, 2, 1, 1, 4, 1, 1, 6]);
        assert_eq!(Irrational::Pi.convergent(3).unwrap(), q(355, 113));
        assert_eq!(Irrational::Phi.convergent(5).unwrap(), q(13, 8));
        assert!(Irrational::parse("sqrt9").is_err());
    }
}
