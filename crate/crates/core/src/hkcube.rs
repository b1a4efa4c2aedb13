//! Host–Kra cubes over parallelepipeds of index sets.
//!
//! Vertices ω ∈ {0,1}^r are stored by bitmask: bit i of the mask is ω_{i+1}.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nilmanifold::UnitriangularElement;
use crate::rational::TorusPoint;
use crate::setalg::FiniteIndexSet;

/// α_ω = α_0 ∪ ⋃_{i∈ω} α_i for disjoint α_0, α_1, …, α_r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetParallelepiped {
    base: FiniteIndexSet,
    sides: Vec<FiniteIndexSet>,
}

pub fn make_parallelepiped(
    base: FiniteIndexSet,
    sides: Vec<FiniteIndexSet>,
) -> Result<SetParallelepiped> {
    if sides.len() > 20 {
        return Err(Error::Parameter(format!(
            "dimension {} is too large",
            sides.len()
        )));
    }
    if let Some(i) = sides.iter().position(FiniteIndexSet::is_empty) {
        return Err(Error::Domain(format!("side {} is empty", i + 1)));
    }
    let all: Vec<&FiniteIndexSet> = std::iter::once(&base).chain(&sides).collect();
    for (i, a) in all.iter().enumerate() {
        if all[..i].iter().any(|b| !b.is_disjoint(a)) {
            return Err(Error::Domain(
                "base and sides must be pairwise disjoint".into(),
            ));
        }
    }
    Ok(SetParallelepiped { base, sides })
}

impl SetParallelepiped {
    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn base(&self) -> &FiniteIndexSet {
        &self.base
    }

    pub fn sides(&self) -> &[FiniteIndexSet] {
        &self.sides
    }

    pub fn vertex(&self, mask: usize) -> FiniteIndexSet {
        FiniteIndexSet::from_unsorted(
            self.base.iter().chain(
                (0..self.dim())
                    .filter(|i| mask >> i & 1 == 1)
                    .flat_map(|i| self.sides[i].iter()),
            ),
        )
    }

    pub fn vertices(&self) -> Vec<FiniteIndexSet> {
        (0..1usize << self.dim()).map(|m| self.vertex(m)).collect()
    }
}

/// Torus values on the vertices of {0,1}^r, tested against the abelian
/// filtration of degree d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusCube {
    d: u32,
    values: Vec<TorusPoint>,
}

impl TorusCube {
    pub fn new(d: u32, values: Vec<TorusPoint>) -> Result<Self> {
        if values.is_empty() || !values.len().is_power_of_two() {
            return Err(Error::Domain(format!(
                "{} values do not fill a cube",
                values.len()
            )));
        }
        let m = values[0].dim();
        if values.iter().any(|v| v.dim() != m) {
            return Err(Error::Domain("cube values differ in dimension".into()));
        }
        Ok(TorusCube { d, values })
    }

    /// The cube ω ↦ f(α_ω) for any evaluation map f.
    pub fn from_parallelepiped<F>(d: u32, p: &SetParallelepiped, f: F) -> Self
    where
        F: Fn(&FiniteIndexSet) -> TorusPoint,
    {
        TorusCube {
            d,
            values: p.vertices().iter().map(f).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn values(&self) -> &[TorusPoint] {
        &self.values
    }
}

/// `Some(b)` fixes a coordinate, `None` leaves it free.
pub type FaceSelector = Vec<Option<bool>>;

fn face_vertices(r: usize, face: &[Option<bool>]) -> impl Iterator<Item = usize> + '_ {
    let fixed: usize = face
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == Some(true))
        .map(|(i, _)| 1 << i)
        .sum();
    let free: Vec<usize> = (0..r).filter(|&i| face[i].is_none()).collect();
    (0..1usize << free.len()).map(move |m| {
        fixed
            | free
                .iter()
                .enumerate()
                .filter(|(b, _)| m >> b & 1 == 1)
                .map(|(_, &i)| 1 << i)
                .sum::<usize>()
    })
}

fn signed_sum<'a>(values: &'a [TorusPoint], verts: impl Iterator<Item = usize>) -> TorusPoint {
    let mut acc = TorusPoint::zero(values[0].dim());
    for w in verts {
        if w.count_ones() % 2 == 0 {
            acc.add_assign_ref(&values[w]);
        } else {
            acc.sub_assign_ref(&values[w]);
        }
    }
    acc
}

/// Σ over the face's vertices of (−1)^{|ω|} value(ω).
pub fn alternating_sum(c: &TorusCube, face: &[Option<bool>]) -> Result<TorusPoint> {
    if face.len() != c.dim() {
        return Err(Error::Domain(format!(
            "selector has {} coordinates, cube has {}",
            face.len(),
            c.dim()
        )));
    }
    Ok(signed_sum(&c.values, face_vertices(c.dim(), face)))
}

/// Every face of dimension `dim`, in a fixed order.
pub fn faces_of_dim(r: usize, dim: usize) -> Vec<FaceSelector> {
    let mut out = Vec::new();
    for free in 0usize..1 << r {
        if free.count_ones() as usize != dim {
            continue;
        }
        let fixed: Vec<usize> = (0..r).filter(|i| free >> i & 1 == 0).collect();
        for bits in 0usize..1 << fixed.len() {
            let mut sel = vec![None; r];
            for (b, &i) in fixed.iter().enumerate() {
                sel[i] = Some(bits >> b & 1 == 1);
            }
            out.push(sel);
        }
    }
    out
}

/// Membership in the abelian Host–Kra cube group of degree d: every face of
/// dimension d+1 has alternating sum 0 (higher faces follow, being sums of
/// these).
pub fn is_hk_cube_abelian(c: &TorusCube) -> bool {
    let r = c.dim();
    let d = c.d as usize;
    if r <= d {
        return true;
    }
    faces_of_dim(r, d + 1)
        .iter()
        .all(|f| signed_sum(&c.values, face_vertices(r, f)).is_zero())
}

/// The unique value at 1^r making every (d+1)-face through 1^r vanish.
/// `partial` lists the other 2^r − 1 vertices by mask.
pub fn complete_corner_abelian(d: u32, partial: &[TorusPoint]) -> Result<TorusPoint> {
    let total = partial.len() + 1;
    if !total.is_power_of_two() || partial.is_empty() {
        return Err(Error::Domain(format!(
            "{} vertices do not form a cube minus a corner",
            partial.len()
        )));
    }
    let r = total.trailing_zeros() as usize;
    let d = d as usize;
    if r < d + 1 {
        return Err(Error::Parameter(format!(
            "corner completion needs r ≥ d+1, got r = {r}, d = {d}"
        )));
    }
    let top = total - 1;
    let m = partial[0].dim();
    let mut values = partial.to_vec();
    values.push(TorusPoint::zero(m));
    let mut forced: Option<TorusPoint> = None;
    for face in faces_of_dim(r, d + 1) {
        let verts: Vec<usize> = face_vertices(r, &face).collect();
        let rest = signed_sum(&values, verts.iter().copied().filter(|&w| w != top));
        if verts.contains(&top) {
            // rest + (−1)^r x = 0
            let x = if r % 2 == 0 { -&rest } else { rest };
            match &forced {
                Some(y) if *y != x => {
                    return Err(Error::Inconsistent(format!(
                        "faces force different corners {y:?} and {x:?}"
                    )))
                }
                None => forced = Some(x),
                _ => {}
            }
        } else if !rest.is_zero() {
            return Err(Error::Inconsistent(format!(
                "face {face:?} away from the corner already fails the cube condition"
            )));
        }
    }
    Ok(forced.expect("some face contains the corner"))
}

/// Vertices sorted by |ω|, ties by the mask value (ω_1 as the lowest bit).
/// Refines inclusion.
pub fn factorization_order(r: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..1usize << r).collect();
    v.sort_by_key(|&w| (w.count_ones(), w));
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct HkFactorization {
    /// (mask, g_ω) in factorization order.
    pub factors: Vec<(usize, UnitriangularElement)>,
    pub membership: bool,
    pub residual_identity: bool,
}

/// Peels g = Π g_{ω_t}^{[ω_t]} in [`factorization_order`]: read g_{ω_t} off
/// the residual at ω_t, then left-divide the residual by g_{ω_t}^{[ω_t]}.
pub fn hk_factorize_unitriangular(cube: &[UnitriangularElement]) -> Result<HkFactorization> {
    if cube.is_empty() || !cube.len().is_power_of_two() {
        return Err(Error::Domain(format!(
            "{} elements do not fill a cube",
            cube.len()
        )));
    }
    let n = cube[0].size();
    if cube.iter().any(|g| g.size() != n) {
        return Err(Error::Domain("cube entries differ in size".into()));
    }
    let r = cube.len().trailing_zeros() as usize;
    let mut residual = cube.to_vec();
    let mut factors = Vec::with_capacity(cube.len());
    let mut membership = true;
    for w in factorization_order(r) {
        let g = residual[w].clone();
        membership &= g.in_level(w.count_ones() as usize);
        let inv = g.inverse();
        for (eta, slot) in residual.iter_mut().enumerate() {
            if eta & w == w {
                *slot = inv.mul(slot);
            }
        }
        factors.push((w, g));
    }
    let residual_identity = residual.iter().all(UnitriangularElement::is_identity);
    Ok(HkFactorization {
        factors,
        membership: membership && residual_identity,
        residual_identity,
    })
}

/// The cube Π g_{ω_t}^{[ω_t]}, product taken in the order given.
pub fn build_cube(
    r: usize,
    factors: &[(usize, UnitriangularElement)],
) -> Vec<UnitriangularElement> {
    let n = factors.first().map_or(1, |(_, g)| g.size());
    (0..1usize << r)
        .map(|eta| {
            factors
                .iter()
                .filter(|(w, _)| eta & w == *w)
                .fold(UnitriangularElement::identity(n), |acc, (_, g)| acc.mul(g))
        })
        .collect()
}
