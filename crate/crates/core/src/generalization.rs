//! VC-type generalization bound, Radon partitions of `d + 1` points and
//! exhaustive separability checks for small point sets.

use crate::error::{check_dims, Error, Result};
use crate::lp::{self, LinearProgram, LpSolution};
use crate::torus::{TorusPoint, TropicalPolytope};

/// Margin a separating LP must reach to count as strict separation.
pub const STRICT_TOL: f64 = 1e-6;

/// Tolerance for hull membership of a Radon witness.
pub const WITNESS_TOL: f64 = 1e-6;

/// Largest dimension [`shatter_check`] will enumerate.
pub const MAX_SHATTER_DIM: usize = 8;

/// `sqrt((d (ln(2n/d) + 1) - ln(η/4)) / n)`.
pub fn vc_bound(n: usize, d: usize, eta: f64) -> Result<f64> {
    if d == 0 || n < d {
        return Err(Error::invalid(format!("need n >= d >= 1, got n = {n}, d = {d}")));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::invalid("eta must lie in (0, 1)"));
    }
    let (n, d) = (n as f64, d as f64);
    Ok(((d * ((2.0 * n / d).ln() + 1.0) - (eta / 4.0).ln()) / n).sqrt())
}

/// `train_hit - vc_bound(n, d, η)`, clipped below at zero.
pub fn hit_rate_lower_bound(train_hit: f64, n: usize, d: usize, eta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&train_hit) {
        return Err(Error::invalid("hit rate must lie in [0, 1]"));
    }
    Ok((train_hit - vc_bound(n, d, eta)?).max(0.0))
}

/// A bipartition of the input points whose tropical hulls share `witness`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadonWitness {
    pub part_a: Vec<usize>,
    pub part_b: Vec<usize>,
    pub witness: TorusPoint,
}

/// Finds a Radon partition of `d + 1` points in dimension `d`.
///
/// For each bipartition (the first point always in part A) the vertices of
/// each side are tested against the other hull, then alternating projections
/// onto the two hulls are run from every vertex. Projections only decrease
/// coordinates, so the iteration settles on a common point whenever the hulls
/// meet. Every returned witness has been re-checked against both hulls.
pub fn radon_witness(points: &[TorusPoint]) -> Result<RadonWitness> {
    let d = points.first().map_or(0, TorusPoint::dim);
    if d < 2 || points.len() != d + 1 {
        return Err(Error::invalid(format!("need d + 1 points of dimension d >= 2, got {} of dimension {d}", points.len())));
    }
    for p in points {
        check_dims(d, p.dim())?;
    }
    let m = points.len();
    let split = |mask: usize| -> (Vec<usize>, Vec<usize>) {
        (0..m).partition(|&i| i == 0 || mask & (1 << (i - 1)) == 0)
    };
    let hull = |idx: &[usize]| TropicalPolytope::new(idx.iter().map(|&i| points[i].clone()).collect());

    // cheap pass: a vertex of one side inside the other hull
    for mask in 1..(1usize << (m - 1)) {
        let (a, b) = split(mask);
        let (ha, hb) = (hull(&a)?, hull(&b)?);
        let mut shared = None;
        for &v in a.iter().chain(&b) {
            if ha.contains_within(&points[v], WITNESS_TOL)? && hb.contains_within(&points[v], WITNESS_TOL)? {
                shared = Some(v);
                break;
            }
        }
        if let Some(v) = shared {
            return Ok(RadonWitness { part_a: a, part_b: b, witness: points[v].clone() });
        }
    }
    for mask in 1..(1usize << (m - 1)) {
        let (a, b) = split(mask);
        let (ha, hb) = (hull(&a)?, hull(&b)?);
        let mut found = None;
        for &start in a.iter().chain(&b) {
            found = alternate_projections(&ha, &hb, &points[start])?;
            if found.is_some() {
                break;
            }
        }
        if let Some(witness) = found {
            return Ok(RadonWitness { part_a: a, part_b: b, witness });
        }
    }
    Err(Error::SearchFailed("no bipartition with intersecting hulls found".into()))
}

fn alternate_projections(
    ha: &TropicalPolytope,
    hb: &TropicalPolytope,
    start: &TorusPoint,
) -> Result<Option<TorusPoint>> {
    const MAX_ROUNDS: usize = 2000;
    let mut x = start.coords().to_vec();
    for _ in 0..MAX_ROUNDS {
        let next = ha.project_raw(&hb.project_raw(&x));
        let moved = crate::torus::trop_distance_raw(&next, &x)?;
        x = next;
        let shift = x[x.len() - 1];
        x.iter_mut().for_each(|v| *v -= shift);
        if moved <= 1e-12 {
            break;
        }
    }
    let candidate = TorusPoint::normalize(&x)?;
    let ok = ha.contains_within(&candidate, WITNESS_TOL)? && hb.contains_within(&candidate, WITNESS_TOL)?;
    Ok(ok.then_some(candidate))
}

/// True iff some split of the coordinates into two nonempty sets `(S, T)`
/// admits `ω` placing every `true` point strictly in a sector of `S` and
/// every `false` point strictly in a sector of `T`.
///
/// Each split and each choice of sector per point is one LP (margin capped
/// at 1); strict separation means an optimum of at least [`STRICT_TOL`].
pub fn shatter_check(points: &[TorusPoint], labels: &[bool]) -> Result<bool> {
    check_dims(points.len(), labels.len())?;
    let d = points.first().map_or(0, TorusPoint::dim);
    if d < 2 {
        return Err(Error::invalid("need points of dimension at least 2"));
    }
    if d > MAX_SHATTER_DIM {
        return Err(Error::invalid(format!("exhaustive check is capped at d = {MAX_SHATTER_DIM}")));
    }
    if points.len() > d + 1 {
        return Err(Error::invalid(format!("at most d + 1 = {} points", d + 1)));
    }
    for p in points {
        check_dims(d, p.dim())?;
    }
    for mask in 1..(1usize << d) - 1 {
        let in_s = |c: usize| mask & (1 << c) != 0;
        let s: Vec<usize> = (0..d).filter(|&c| in_s(c)).collect();
        let t: Vec<usize> = (0..d).filter(|&c| !in_s(c)).collect();
        let own = |lbl: bool| if lbl { &s } else { &t };
        let mut choice = vec![0usize; points.len()];
        loop {
            if split_lp_separates(points, labels, &s, &t, &choice)? {
                return Ok(true);
            }
            // odometer over per-point sector choices
            let mut k = 0;
            while k < points.len() {
                choice[k] += 1;
                if choice[k] < own(labels[k]).len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == points.len() {
                break;
            }
        }
    }
    Ok(false)
}

fn split_lp_separates(
    points: &[TorusPoint],
    labels: &[bool],
    s: &[usize],
    t: &[usize],
    choice: &[usize],
) -> Result<bool> {
    let d = points[0].dim();
    let omega_col = |c: usize| if c + 1 < d { Some(c + 1) } else { None };
    let mut objective = vec![0.0; d];
    objective[0] = 1.0;
    let mut lp = LinearProgram::new(objective)?;
    let mut row = vec![0.0; d];
    row[0] = 1.0;
    lp.add_constraint(&row, 1.0)?;
    for ((x, &lbl), &ch) in points.iter().zip(labels).zip(choice) {
        let (own, other) = if lbl { (s, t) } else { (t, s) };
        let i = own[ch];
        for &j in other {
            row.iter_mut().for_each(|v| *v = 0.0);
            row[0] = 1.0;
            if let Some(cj) = omega_col(j) {
                row[cj] += 1.0;
            }
            if let Some(ci) = omega_col(i) {
                row[ci] -= 1.0;
            }
            lp.add_constraint(&row, x[i] - x[j])?;
        }
    }
    match lp::solve(&lp)? {
        LpSolution::Optimal { value, .. } => Ok(value >= STRICT_TOL),
        LpSolution::Infeasible => Ok(false),
        LpSolution::Unbounded => Err(Error::Numerical("capped separation LP reported unbounded".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(raw: &[f64]) -> TorusPoint {
        TorusPoint::normalize(raw).unwrap()
    }

    #[test]
    fn bound_closed_form() {
        let v = vc_bound(1000, 10, 0.1).unwrap();
        assert!((v - 0.2582).abs() < 5e-5, "{v}");
        assert!(vc_bound(10, 11, 0.1).is_err());
        assert!(vc_bound(10, 0, 0.1).is_err());
        assert!(vc_bound(10, 2, 1.0).is_err());
    }

    #[test]
    fn bound_decreases_in_n_and_eta() {
        let ns = [1_000, 10_000, 100_000, 1_000_000];
        let vals: Vec<f64> = ns.iter().map(|&n| vc_bound(n, 10, 0.1).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vc_bound(1000, 10, 0.2).unwrap() < vc_bound(1000, 10, 0.1).unwrap());
        assert!(vc_bound(1000, 20, 0.1).unwrap() > vc_bound(1000, 10, 0.1).unwrap());
    }

    #[test]
    fn lower_bound_clips_at_zero() {
        let b = vc_bound(500, 7, 0.1).unwrap();
        assert_eq!(hit_rate_lower_bound(b, 500, 7, 0.1).unwrap(), 0.0);
        assert_eq!(hit_rate_lower_bound(0.1, 500, 7, 0.1).unwrap(), 0.0);
        let big = hit_rate_lower_bound(1.0, 10_000, 3, 0.1).unwrap();
        assert!((big - (1.0 - vc_bound(10_000, 3, 0.1).unwrap())).abs() < 1e-15);
        assert!(hit_rate_lower_bound(1.5, 100, 3, 0.1).is_err());
    }

    #[test]
    fn duplicated_pairs_give_trivial_witness() {
        let a = p(&[1.0, 2.0, 0.0]);
        let b = p(&[-3.0, 0.5, 0.0]);
        let w = radon_witness(&[a.clone(), b.clone(), a.clone(), b.clone()]).unwrap();
        assert!(w.witness == a || w.witness == b);
        assert!(!w.part_a.is_empty() && !w.part_b.is_empty());
    }

    #[test]
    fn crossing_segments() {
        // two tropical segments through the origin region
        let pts = [p(&[4.0, 0.0, 0.0]), p(&[-4.0, 0.0, 0.0]), p(&[0.0, 4.0, 0.0]), p(&[0.0, -4.0, 0.0])];
        let w = radon_witness(&pts).unwrap();
        let labels: Vec<bool> = (0..4).map(|i| w.part_a.contains(&i)).collect();
        assert!(!shatter_check(&pts, &labels).unwrap());
    }

    #[test]
    fn single_sector_construction_is_shattered() {
        let m = 100.0;
        let pts = [p(&[m, 0.0, 0.0]), p(&[0.0, m, 0.0]), p(&[0.0, 0.0, m])];
        for bits in 0..8u32 {
            let labels: Vec<bool> = (0..3).map(|i| bits & (1 << i) != 0).collect();
            assert!(shatter_check(&pts, &labels).unwrap(), "labeling {bits:03b}");
        }
    }

    #[test]
    fn identical_points_with_mixed_labels() {
        let x = p(&[1.0, 2.0, 0.0]);
        assert!(!shatter_check(&[x.clone(), x], &[true, false]).unwrap());
    }

    #[test]
    fn shatter_input_limits() {
        let pts: Vec<TorusPoint> = (0..5).map(|i| p(&[i as f64, 0.0, 0.0])).collect();
        assert!(shatter_check(&pts, &[true; 5]).is_err());
        let big = vec![TorusPoint::zeros(9).unwrap()];
        assert!(shatter_check(&big, &[true]).is_err());
    }
}
