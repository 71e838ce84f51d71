//! Tropical hyperplanes `H_ω`, their open sectors and the distance to them.
//!
//! Coordinate indices are zero-based throughout the library; text formats
//! that face users print them one-based.

use crate::error::Result;
use crate::torus::{TorusPoint, EQ_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct TropicalHyperplane {
    omega: TorusPoint,
}

/// Where a point sits relative to a tropical hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectorResult {
    /// Coordinate `i` of `x + ω` strictly dominates all others.
    InSector(usize),
    /// The maximum of `x + ω` is attained (within tolerance) at two or more
    /// coordinates, listed in increasing order.
    OnHyperplane(Vec<usize>),
}

impl TropicalHyperplane {
    pub fn new(omega: TorusPoint) -> Self {
        TropicalHyperplane { omega }
    }

    pub fn normal(&self) -> &TorusPoint {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn sector_of(&self, x: &TorusPoint, tol: f64) -> Result<SectorResult> {
        let s = x.add_raw(&self.omega)?;
        let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let ties: Vec<usize> = (0..s.len()).filter(|&j| s[j] >= max - tol).collect();
        Ok(if ties.len() == 1 {
            SectorResult::InSector(ties[0])
        } else {
            SectorResult::OnHyperplane(ties)
        })
    }

    /// Sector with the default tolerance.
    pub fn sector(&self, x: &TorusPoint) -> Result<SectorResult> {
        self.sector_of(x, EQ_TOL)
    }

    /// `d_tr(x, H_ω) = max(x + ω) - second max(x + ω)`.
    pub fn distance(&self, x: &TorusPoint) -> Result<f64> {
        Ok(max_minus_second_max(&x.add_raw(&self.omega)?))
    }
}

/// Gap between the largest entry and the runner-up. A duplicated maximum
/// counts as its own runner-up, giving zero.
pub fn max_minus_second_max(s: &[f64]) -> f64 {
    let (mut first, mut second) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &v in s {
        if v > first {
            second = first;
            first = v;
        } else if v > second {
            second = v;
        }
    }
    if second == f64::NEG_INFINITY {
        return 0.0;
    }
    first - second
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(raw: &[f64]) -> TorusPoint {
        TorusPoint::normalize(raw).unwrap()
    }

    #[test]
    fn sectors_of_worked_examples() {
        let h0 = TropicalHyperplane::new(p(&[0.0, 0.0, 0.0]));
        assert_eq!(h0.sector(&p(&[1.0, 0.0, 0.0])).unwrap(), SectorResult::InSector(0));

        let h = TropicalHyperplane::new(p(&[1.0, 2.0, 0.0]));
        assert_eq!(h.sector(&p(&[1.0, 1.0, 0.0])).unwrap(), SectorResult::InSector(1));
        assert_eq!(
            h.sector(&p(&[1.0, 0.0, 0.0])).unwrap(),
            SectorResult::OnHyperplane(vec![0, 1])
        );
    }

    #[test]
    fn distance_worked_example() {
        let h = TropicalHyperplane::new(p(&[1.0, 2.0, 0.0]));
        assert_eq!(h.distance(&p(&[1.0, 1.0, 0.0])).unwrap(), 1.0);
        assert_eq!(h.distance(&p(&[1.0, 0.0, 0.0])).unwrap(), 0.0);
        assert!(h.distance(&p(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn second_max_handles_duplicates() {
        assert_eq!(max_minus_second_max(&[3.0, 3.0, 1.0]), 0.0);
        assert_eq!(max_minus_second_max(&[1.0, 3.0, 2.0]), 1.0);
        assert_eq!(max_minus_second_max(&[-4.0, -9.0]), 5.0);
    }
}
