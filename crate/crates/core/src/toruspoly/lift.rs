use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{mobius_in_place, TorusPolynomial};
use crate::error::{Error, Result};
use crate::rational::{serde_qvec, TorusPoint, Q};
use crate::setalg::FiniteIndexSet;

/// p(x) = c_1 x + … + c_d x^d with rational c_j standing in for the real
/// coefficients; the constant term is always 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CoeffList", into = "CoeffList")]
pub struct RealPolynomialApprox {
    coeffs: Vec<Q>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct CoeffList(#[serde(with = "serde_qvec")] Vec<Q>);

impl TryFrom<CoeffList> for RealPolynomialApprox {
    type Error = Error;
    fn try_from(c: CoeffList) -> Result<Self> {
        RealPolynomialApprox::new(c.0)
    }
}

impl From<RealPolynomialApprox> for CoeffList {
    fn from(p: RealPolynomialApprox) -> Self {
        CoeffList(p.coeffs)
    }
}

impl RealPolynomialApprox {
    /// `coeffs[j]` is the coefficient of x^(j+1).
    pub fn new(coeffs: Vec<Q>) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::Domain(
                "a polynomial needs at least one coefficient".into(),
            )),
            Some(c) if c.is_zero() => Err(Error::Domain("leading coefficient is zero".into())),
            _ => Ok(RealPolynomialApprox { coeffs }),
        }
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Exact value p(x) (Horner).
    pub fn eval(&self, x: &BigInt) -> Q {
        let x = Q::from_integer(x.clone());
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc + c) * &x;
        }
        acc
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub poly: TorusPolynomial,
    /// Sets γ with |γ| > d whose inclusion–exclusion coefficient is non-zero.
    pub high_order_nonzero: Vec<FiniteIndexSet>,
    pub vanishes_above_degree: bool,
}

/// The torus polynomial F(α) = p(n_α) mod 1 on subsets of [1..window],
/// recovered by inclusion–exclusion, with a check that every coefficient of
/// order above d vanishes.
pub fn lift_integer_polynomial(
    p: &RealPolynomialApprox,
    n: &[u64],
    window: usize,
    d: u32,
) -> Result<LiftReport> {
    if window > n.len() {
        return Err(Error::Parameter(format!(
            "window {window} exceeds the {} available terms",
            n.len()
        )));
    }
    if window > 20 {
        return Err(Error::Parameter(format!(
            "window {window} is too large (max 20)"
        )));
    }
    if p.degree() != d {
        return Err(Error::Parameter(format!(
            "polynomial has degree {}, expected {d}",
            p.degree()
        )));
    }
    let size = 1usize << window;
    let mut sums = vec![BigInt::zero(); size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + n[low];
    }
    let mut table: Vec<TorusPoint> = sums.iter().map(|s| TorusPoint::scalar(p.eval(s))).collect();
    mobius_in_place(&mut table);
    let mut poly = TorusPolynomial::zero(1, d);
    let mut high_order_nonzero = Vec::new();
    for (mask, a) in table.into_iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let gamma = FiniteIndexSet::from_mask(mask as u64);
        if gamma.len() as u32 > d {
            high_order_nonzero.push(gamma);
        } else {
            poly.set(gamma, a)?;
        }
    }
    Ok(LiftReport {
        poly,
        vanishes_above_degree: high_order_nonzero.is_empty(),
        high_order_nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::set;

    #[test]
    fn linear_lift() {
        let p = RealPolynomialApprox::new(vec![q(1, 5)]).unwrap();
        let r = lift_integer_polynomial(&p, &[1; 4], 4, 1).unwrap();
        assert!(r.vanishes_above_degree);
        for i in 1..=4 {
            assert_eq!(r.poly.coeff(&set![i]), TorusPoint::scalar(q(1, 5)));
        }
        assert_eq!(r.poly.support_len(), 4);
    }

    #[test]
    fn quadratic_lift() {
        let p = RealPolynomialApprox::new(vec![qi(0), q(1, 7)]).unwrap();
        let r = lift_integer_polynomial(&p, &[1, 2, 3], 3, 2).unwrap();
        assert_eq!(r.poly.coeff(&set![1, 2]), TorusPoint::scalar(q(4, 7)));
        assert!(r.vanishes_above_degree);
        assert!(r.poly.coeff(&set![1, 2, 3]).is_zero());
    }

    #[test]
    fn bad_inputs() {
        assert!(RealPolynomialApprox::new(vec![q(1, 2), qi(0)]).is_err());
        let p = RealPolynomialApprox::new(vec![q(1, 2)]).unwrap();
        assert!(lift_integer_polynomial(&p, &[1, 2], 3, 1).is_err());
        assert!(lift_integer_polynomial(&p, &[1, 2], 2, 2).is_err());
    }
}
