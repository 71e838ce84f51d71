//! Max-plus arithmetic on the tropical projective torus `R^d / R·1`.
//!
//! Points are kept in the canonical representative whose last coordinate is
//! zero, so two raw vectors that differ by a constant shift compare equal.

use std::fmt;
use std::ops::Index;

use crate::error::{check_dims, Error, Result};

/// Absolute tolerance used for all coordinate-wise equality tests.
pub const EQ_TOL: f64 = 1e-9;

/// A point of `R^d / R·1`, stored with `coords[d - 1] == 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    coords: Vec<f64>,
}

impl TorusPoint {
    /// Canonical representative of `raw`: subtracts the last coordinate from
    /// every coordinate.
    pub fn normalize(raw: &[f64]) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::DimensionTooSmall(raw.len(), 2));
        }
        if let Some(i) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let last = raw[raw.len() - 1];
        let mut coords: Vec<f64> = raw.iter().map(|v| v - last).collect();
        // exact zero even when `last - last` would be -0.0
        *coords.last_mut().unwrap() = 0.0;
        Ok(TorusPoint { coords })
    }

    /// The origin of `R^d / R·1`.
    pub fn zeros(dim: usize) -> Result<Self> {
        Self::normalize(&vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Componentwise sum `self + other` as a raw vector.
    pub fn add_raw(&self, other: &TorusPoint) -> Result<Vec<f64>> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    /// Equality of torus points up to `tol` per coordinate.
    pub fn approx_eq(&self, other: &TorusPoint, tol: f64) -> bool {
        self.dim() == other.dim()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl Index<usize> for TorusPoint {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Tropical linear combination `(a ⊙ v) ⊞ (b ⊙ w)`, i.e. the componentwise
/// maximum of `a + v` and `b + w`, normalized.
pub fn trop_combine(a: f64, v: &TorusPoint, b: f64, w: &TorusPoint) -> Result<TorusPoint> {
    check_dims(v.dim(), w.dim())?;
    let raw: Vec<f64> = v
        .coords
        .iter()
        .zip(&w.coords)
        .map(|(vi, wi)| (a + vi).max(b + wi))
        .collect();
    TorusPoint::normalize(&raw)
}

/// Tropical distance on raw vectors: `max_i(v_i - w_i) - min_i(v_i - w_i)`.
///
/// Invariant under adding constants to either argument, so it needs no
/// normalization.
pub fn trop_distance_raw(v: &[f64], w: &[f64]) -> Result<f64> {
    check_dims(v.len(), w.len())?;
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for (a, b) in v.iter().zip(w) {
        let diff = a - b;
        hi = hi.max(diff);
        lo = lo.min(diff);
    }
    Ok(if v.is_empty() { 0.0 } else { hi - lo })
}

/// The generalized Hilbert projective metric between two torus points.
pub fn trop_distance(v: &TorusPoint, w: &TorusPoint) -> Result<f64> {
    trop_distance_raw(&v.coords, &w.coords)
}

/// `k` samples of the tropical segment from `v` to `w`.
///
/// The scalar difference `t = a - b` sweeps linearly from `R` down to `-R`
/// with `R = d(v, w) + 1`; at both ends one generator dominates every
/// coordinate, so the first sample is `v` and the last is `w`.
pub fn trop_segment(v: &TorusPoint, w: &TorusPoint, k: usize) -> Result<Vec<TorusPoint>> {
    check_dims(v.dim(), w.dim())?;
    if k < 2 {
        return Err(Error::invalid("segment needs at least 2 samples"));
    }
    let radius = trop_distance(v, w)? + 1.0;
    let mut out = Vec::with_capacity(k);
    out.push(v.clone());
    for s in 1..k - 1 {
        let t = radius - 2.0 * radius * s as f64 / (k - 1) as f64;
        out.push(trop_combine(t, v, 0.0, w)?);
    }
    out.push(w.clone());
    Ok(out)
}

/// The tropical convex hull of a finite set of vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalPolytope {
    vertices: Vec<TorusPoint>,
}

impl TropicalPolytope {
    pub fn new(vertices: Vec<TorusPoint>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::invalid("polytope needs at least one vertex"))?;
        let dim = first.dim();
        for v in &vertices {
            check_dims(dim, v.dim())?;
        }
        Ok(TropicalPolytope { vertices })
    }

    pub fn vertices(&self) -> &[TorusPoint] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Tropical projection on a raw vector: `max_i(λ_i + v^i)` with
    /// `λ_i = min_j(x_j - v^i_j)`. The result is componentwise `<= x` and
    /// touches `x` in at least one coordinate.
    pub(crate) fn project_raw(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![f64::NEG_INFINITY; x.len()];
        for v in &self.vertices {
            let lambda = x
                .iter()
                .zip(v.coords())
                .map(|(xj, vj)| xj - vj)
                .fold(f64::INFINITY, f64::min);
            for (o, vj) in out.iter_mut().zip(v.coords()) {
                *o = o.max(lambda + vj);
            }
        }
        out
    }

    /// Nearest point of the polytope in the tropical metric.
    pub fn project(&self, x: &TorusPoint) -> Result<TorusPoint> {
        check_dims(self.dim(), x.dim())?;
        TorusPoint::normalize(&self.project_raw(x.coords()))
    }

    /// Membership with a caller-chosen per-coordinate tolerance.
    pub fn contains_within(&self, x: &TorusPoint, tol: f64) -> Result<bool> {
        check_dims(self.dim(), x.dim())?;
        let p = self.project_raw(x.coords());
        Ok(p.iter().zip(x.coords()).all(|(a, b)| (a - b).abs() <= tol))
    }

    /// `x ∈ tconv(V)`, decided by comparing `x` with its projection.
    pub fn contains(&self, x: &TorusPoint) -> Result<bool> {
        self.contains_within(x, EQ_TOL)
    }
}
