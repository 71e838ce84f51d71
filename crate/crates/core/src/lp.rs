//! Dense linear programs in inequality form and a two-phase simplex solver.
//!
//! Problems are `maximize c·u subject to A·u <= b` with every `u_j` free.
//! Free variables are split as `u = u⁺ - u⁻`; Bland's rule (lowest index for
//! both the entering and the leaving variable) rules out cycling. The problem
//! sizes in this crate are small, so the solver favours robustness over speed.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Minimum magnitude of a pivot element.
pub const PIVOT_TOL: f64 = 1e-9;
/// Allowed constraint violation of a reported optimum.
pub const FEAS_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    coeffs: Vec<f64>,
    bounds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpSolution {
    Optimal { point: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpSolution::Optimal { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            LpSolution::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[f64]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// An LP with the given objective (to maximize) and no constraints yet.
    pub fn new(objective: Vec<f64>) -> Result<Self> {
        if objective.is_empty() {
            return Err(Error::invalid("LP needs at least one variable"));
        }
        if let Some(i) = objective.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(LinearProgram { objective, coeffs: Vec::new(), bounds: Vec::new() })
    }

    /// Appends the constraint `row · u <= bound`.
    pub fn add_constraint(&mut self, row: &[f64], bound: f64) -> Result<()> {
        crate::error::check_dims(self.num_vars(), row.len())?;
        if let Some(i) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if !bound.is_finite() {
            return Err(Error::NonFinite(row.len()));
        }
        self.coeffs.extend_from_slice(row);
        self.bounds.push(bound);
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.bounds.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let m = self.num_vars();
        &self.coeffs[r * m..(r + 1) * m]
    }

    pub fn bound(&self, r: usize) -> f64 {
        self.bounds[r]
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    /// Largest violation `max_r (A_r·u - b_r)`, or 0 when `u` is feasible.
    pub fn max_violation(&self, u: &[f64]) -> f64 {
        (0..self.num_constraints())
            .map(|r| dot(self.row(r), u) - self.bounds[r])
            .fold(0.0, f64::max)
    }

    pub fn evaluate(&self, u: &[f64]) -> f64 {
        dot(&self.objective, u)
    }

    /// Rows with identical coefficient vectors keep only the tightest bound.
    /// Returns `None` if a zero row has a negative bound.
    fn presolve(&self) -> Option<(Vec<Vec<f64>>, Vec<f64>)> {
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut bounds: Vec<f64> = Vec::new();
        for r in 0..self.num_constraints() {
            let row = self.row(r);
            let b = self.bounds[r];
            if row.iter().all(|&v| v == 0.0) {
                if b < -FEAS_TOL {
                    return None;
                }
                continue;
            }
            // `+ 0.0` folds -0.0 into 0.0 so both hash alike
            let key: Vec<u64> = row.iter().map(|v| (v + 0.0).to_bits()).collect();
            match index.get(&key) {
                Some(&k) => bounds[k] = bounds[k].min(b),
                None => {
                    index.insert(key, rows.len());
                    rows.push(row.to_vec());
                    bounds.push(b);
                }
            }
        }
        Some((rows, bounds))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Tableau {
    width: usize,
    cells: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    reduced: Vec<f64>,
    objective_value: f64,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.rhs.len()
    }

    fn at(&self, r: usize, j: usize) -> f64 {
        self.cells[r * self.width + j]
    }

    /// Resets the objective row for cost vector `cost` given the current basis.
    fn price(&mut self, cost: &[f64]) {
        self.reduced = cost.to_vec();
        self.reduced.resize(self.width, 0.0);
        self.objective_value = 0.0;
        for r in 0..self.rows() {
            let cb = cost.get(self.basis[r]).copied().unwrap_or(0.0);
            if cb == 0.0 {
                continue;
            }
            let row = &self.cells[r * self.width..(r + 1) * self.width];
            for (d, a) in self.reduced.iter_mut().zip(row) {
                *d -= cb * a;
            }
            self.objective_value += cb * self.rhs[r];
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.cells[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        self.rhs[pr] *= inv;
        self.cells[pr * w + pc] = 1.0;
        let pivot_row: Vec<f64> = self.cells[pr * w..(pr + 1) * w].to_vec();
        let pivot_rhs = self.rhs[pr];
        for r in 0..self.rows() {
            if r == pr {
                continue;
            }
            let f = self.cells[r * w + pc];
            if f == 0.0 {
                continue;
            }
            for (v, p) in self.cells[r * w..(r + 1) * w].iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.cells[r * w + pc] = 0.0;
            self.rhs[r] -= f * pivot_rhs;
            if self.rhs[r].abs() < 1e-13 {
                self.rhs[r] = 0.0;
            }
        }
        let f = self.reduced[pc];
        if f != 0.0 {
            for (v, p) in self.reduced.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.reduced[pc] = 0.0;
            self.objective_value += f * pivot_rhs;
        }
        self.basis[pr] = pc;
    }

    /// Runs Bland's rule over columns `0..allowed`. Returns `false` when the
    /// objective is unbounded.
    fn optimize(&mut self, allowed: usize, budget: &mut usize) -> Result<bool> {
        loop {
            let Some(pc) = (0..allowed).find(|&j| self.reduced[j] > PIVOT_TOL) else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows() {
                let a = self.at(r, pc);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs[r] / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                        if ratio < bratio && !tie || tie && self.basis[r] < self.basis[br] {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
            let Some((pr, _)) = best else {
                return Ok(false);
            };
            if *budget == 0 {
                return Err(Error::Numerical("pivot budget exhausted".into()));
            }
            *budget -= 1;
            self.pivot(pr, pc);
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width;
        self.cells.drain(r * w..(r + 1) * w);
        self.rhs.remove(r);
        self.basis.remove(r);
    }
}

/// Solves `lp` to optimality, or reports it infeasible or unbounded.
///
/// A reported optimum always satisfies `A·u <= b + FEAS_TOL`; if round-off
/// breaks that, the result is [`Error::Numerical`] instead.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let Some((rows, bounds)) = lp.presolve() else {
        return Ok(LpSolution::Infeasible);
    };
    let m = lp.num_vars();
    let nrows = rows.len();
    let n_struct = 2 * m;
    let n_artificial = bounds.iter().filter(|&&b| b < 0.0).count();
    let width = n_struct + nrows + n_artificial;

    let mut t = Tableau {
        width,
        cells: vec![0.0; nrows * width],
        rhs: vec![0.0; nrows],
        basis: vec![0; nrows],
        reduced: Vec::new(),
        objective_value: 0.0,
    };
    let mut next_art = n_struct + nrows;
    for (r, (row, &b)) in rows.iter().zip(&bounds).enumerate() {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let cells = &mut t.cells[r * width..(r + 1) * width];
        for j in 0..m {
            cells[j] = sign * row[j];
            cells[m + j] = -sign * row[j];
        }
        cells[n_struct + r] = sign;
        t.rhs[r] = sign * b;
        if b < 0.0 {
            cells[next_art] = 1.0;
            t.basis[r] = next_art;
            next_art += 1;
        } else {
            t.basis[r] = n_struct + r;
        }
    }

    let mut budget = 50_000 + 50 * (width + nrows);
    let first_art = n_struct + nrows;

    if n_artificial > 0 {
        let mut cost = vec![0.0; width];
        for c in cost.iter_mut().skip(first_art) {
            *c = -1.0;
        }
        t.price(&cost);
        t.optimize(width, &mut budget)?;
        if t.objective_value < -FEAS_TOL {
            return Ok(LpSolution::Infeasible);
        }
        // drive zero-level artificials out of the basis
        let mut r = 0;
        while r < t.rows() {
            if t.basis[r] >= first_art {
                match (0..first_art).find(|&j| t.at(r, j).abs() > PIVOT_TOL) {
                    Some(j) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => t.remove_row(r),
                }
            } else {
                r += 1;
            }
        }
    }

    let mut cost = vec![0.0; width];
    for j in 0..m {
        cost[j] = lp.objective[j];
        cost[m + j] = -lp.objective[j];
    }
    t.price(&cost);
    if !t.optimize(first_art, &mut budget)? {
        return Ok(LpSolution::Unbounded);
    }

    let mut split = vec![0.0; n_struct];
    for (r, &bv) in t.basis.iter().enumerate() {
        if bv < n_struct {
            split[bv] = t.rhs[r];
        }
    }
    let point: Vec<f64> = (0..m).map(|j| split[j] - split[m + j]).collect();
    if point.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite solution".into()));
    }
    let violation = lp.max_violation(&point);
    if violation > FEAS_TOL {
        return Err(Error::Numerical(format!("solution violates a constraint by {violation:e}")));
    }
    let value = lp.evaluate(&point);
    Ok(LpSolution::Optimal { point, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_upper_bound() {
        let mut lp = LinearProgram::new(vec![1.0]).unwrap();
        lp.add_constraint(&[1.0], 5.0).unwrap();
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.value(), Some(5.0));
    }

    #[test]
    fn box_corner() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]).unwrap();
        lp.add_constraint(&[1.0, 0.0], 1.0).unwrap();
        lp.add_constraint(&[0.0, 1.0], 2.0).unwrap();
        lp.add_constraint(&[-1.0, 0.0], 0.0).unwrap();
        lp.add_constraint(&[0.0, -1.0], 0.0).unwrap();
        match solve(&lp).unwrap() {
            LpSolution::Optimal { point, value } => {
                assert!((value - 3.0).abs() < 1e-12);
                assert!((point[0] - 1.0).abs() < 1e-12 && (point[1] - 2.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbounded_and_infeasible() {
        let lp = LinearProgram::new(vec![1.0]).unwrap();
        assert_eq!(solve(&lp).unwrap(), LpSolution::Unbounded);

        let mut lp = LinearProgram::new(vec![1.0]).unwrap();
        lp.add_constraint(&[1.0], -1.0).unwrap();
        lp.add_constraint(&[-1.0], -1.0).unwrap();
        assert_eq!(solve(&lp).unwrap(), LpSolution::Infeasible);

        let mut lp = LinearProgram::new(vec![1.0, 0.0]).unwrap();
        lp.add_constraint(&[0.0, 0.0], -1.0).unwrap();
        assert_eq!(solve(&lp).unwrap(), LpSolution::Infeasible);
    }

    #[test]
    fn negative_bounds_need_phase_one() {
        // maximize -u s.t. u >= 3  (i.e. -u <= -3)
        let mut lp = LinearProgram::new(vec![-1.0]).unwrap();
        lp.add_constraint(&[-1.0], -3.0).unwrap();
        let sol = solve(&lp).unwrap();
        assert!((sol.value().unwrap() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn duplicate_rows_keep_tightest() {
        let mut lp = LinearProgram::new(vec![1.0, -1.0]).unwrap();
        for b in [4.0, 2.0, 3.0] {
            lp.add_constraint(&[1.0, -1.0], b).unwrap();
        }
        assert!((solve(&lp).unwrap().value().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // several constraints active at the optimum (0, 0)
        let mut lp = LinearProgram::new(vec![1.0, 1.0]).unwrap();
        lp.add_constraint(&[1.0, 1.0], 0.0).unwrap();
        lp.add_constraint(&[1.0, 2.0], 0.0).unwrap();
        lp.add_constraint(&[2.0, 1.0], 0.0).unwrap();
        lp.add_constraint(&[-1.0, 0.0], 0.0).unwrap();
        lp.add_constraint(&[0.0, -1.0], 0.0).unwrap();
        assert_eq!(solve(&lp).unwrap().value(), Some(0.0));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(LinearProgram::new(vec![]).is_err());
        let mut lp = LinearProgram::new(vec![1.0]).unwrap();
        assert!(lp.add_constraint(&[1.0, 2.0], 1.0).is_err());
        assert!(lp.add_constraint(&[f64::NAN], 1.0).is_err());
    }
}
