//! Exact rationals and points of the torus T^m = R^m / Z^m.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or a bare integer `"p"`. A zero denominator is an error.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    match t.split_once('/') {
        Some((p, d)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(t).map_err(|_| bad())?,
        )),
    }
}

/// Always `"p/q"`, including integers (`"3/1"`).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Fractional part in [0, 1).
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// Distance to the nearest integer, in [0, 1/2].
pub fn torus_norm(x: &Q) -> Q {
    let f = frac(x);
    let g = Q::one() - &f;
    if g < f {
        g
    } else {
        f
    }
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_qvec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(fmt_q).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A point of T^m with every coordinate reduced into [0, 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<Q>,
}

impl TorusPoint {
    pub fn zero(m: usize) -> Self {
        TorusPoint {
            coords: vec![Q::zero(); m],
        }
    }

    pub fn new(coords: Vec<Q>) -> Self {
        TorusPoint {
            coords: coords.iter().map(frac).collect(),
        }
    }

    pub fn scalar(x: Q) -> Self {
        Self::new(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Max over coordinates of the distance to the nearest integer.
    pub fn norm(&self) -> Q {
        self.coords
            .iter()
            .map(torus_norm)
            .max()
            .unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, n: i64) -> Self {
        let n = qi(n);
        Self::new(self.coords.iter().map(|c| c * &n).collect())
    }

    pub fn add_assign_ref(&mut self, other: &TorusPoint) {
        assert_eq!(self.dim(), other.dim(), "torus dimension mismatch");
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a = frac(&(&*a + b));
        }
    }

    pub fn sub_assign_ref(&mut self, other: &TorusPoint) {
        assert_eq!(self.dim(), other.dim(), "torus dimension mismatch");
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a = frac(&(&*a - b));
        }
    }
}

impl Add for &TorusPoint {
    type Output = TorusPoint;
    fn add(self, rhs: &TorusPoint) -> TorusPoint {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &TorusPoint {
    type Output = TorusPoint;
    fn sub(self, rhs: &TorusPoint) -> TorusPoint {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Neg for &TorusPoint {
    type Output = TorusPoint;
    fn neg(self) -> TorusPoint {
        TorusPoint::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(fmt_q).collect();
        write!(f, "({})", s.join(", "))
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_qvec::serialize(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(TorusPoint::new(serde_qvec::deserialize(d)?))
    }
}

/// True when `x` is an integer.
pub fn is_integral(x: &Q) -> bool {
    x.is_integer()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
