//! Independent reference implementations used to check the library.
#![allow(dead_code)]

use rand::Rng;
use tropsvm_core::svm::margin_function;
use tropsvm_core::{LabeledDataset, TorusPoint};

pub fn p(raw: &[f64]) -> TorusPoint {
    TorusPoint::normalize(raw).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R, d: usize, scale: f64) -> TorusPoint {
    let raw: Vec<f64> = (0..d).map(|_| rng.random_range(-scale..scale)).collect();
    p(&raw)
}

/// Outcome of the vertex-enumeration LP oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleLp {
    Optimal(f64),
    Infeasible,
    Unbounded,
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting; `None`
/// when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Maximizes `c·x` subject to `A x <= b` (free `x`) by enumerating every
/// vertex of the problem intersected with the box `|x_i| <= bound`. If
/// doubling the box still improves the optimum, the problem is unbounded.
pub fn vertex_enumeration(c: &[f64], rows: &[Vec<f64>], b: &[f64], bound: f64) -> OracleLp {
    let v = vertex_enumeration_value(c, rows, b, bound);
    if v == f64::NEG_INFINITY {
        return OracleLp::Infeasible;
    }
    let wider = vertex_enumeration_value(c, rows, b, 2.0 * bound);
    if wider - v > 1e-6 * (1.0 + v.abs()) {
        OracleLp::Unbounded
    } else {
        OracleLp::Optimal(v)
    }
}

fn vertex_enumeration_value(c: &[f64], rows: &[Vec<f64>], b: &[f64], bound: f64) -> f64 {
    let m = c.len();
    let mut all_rows: Vec<Vec<f64>> = rows.to_vec();
    let mut all_b: Vec<f64> = b.to_vec();
    for i in 0..m {
        for s in [1.0, -1.0] {
            let mut r = vec![0.0; m];
            r[i] = s;
            all_rows.push(r);
            all_b.push(bound);
        }
    }
    let mut best = f64::NEG_INFINITY;
    for combo in combinations(all_rows.len(), m) {
        let a: Vec<Vec<f64>> = combo.iter().map(|&i| all_rows[i].clone()).collect();
        let rhs: Vec<f64> = combo.iter().map(|&i| all_b[i]).collect();
        let Some(x) = solve_square(a, rhs) else { continue };
        let feasible = all_rows
            .iter()
            .zip(&all_b)
            .all(|(r, &bi)| r.iter().zip(&x).map(|(a, v)| a * v).sum::<f64>() <= bi + 1e-7 * (1.0 + bi.abs()));
        if feasible {
            best = best.max(c.iter().zip(&x).map(|(a, b)| a * b).sum());
        }
    }
    best
}

/// Maximizes the margin function over `ω ∈ [-r, r]^{d-1}` (last coordinate
/// zero) by Lipschitz branch and bound. The margin is 2-Lipschitz in the
/// sup norm, so a cell of half-width `h` around `c` cannot beat
/// `M(c) + 2h`. Returns a lower and an upper bound on the maximum.
pub fn margin_branch_and_bound(data: &LabeledDataset, r: f64, tol: f64) -> (f64, f64) {
    let d = data.dim();
    let k = d - 1;
    let eval = |c: &[f64]| {
        let mut raw = c.to_vec();
        raw.push(0.0);
        margin_function(data, &p(&raw)).unwrap()
    };
    let mut cells: Vec<(Vec<f64>, f64, f64)> = Vec::new();
    let root = vec![0.0; k];
    let v = eval(&root);
    let mut lower = v;
    cells.push((root, r, v));
    let mut upper_global;
    loop {
        upper_global = cells.iter().map(|(_, h, v)| v + 2.0 * h).fold(f64::NEG_INFINITY, f64::max);
        if upper_global - lower <= tol || cells.is_empty() {
            break;
        }
        // split every cell whose bound still beats the incumbent
        let mut next = Vec::new();
        for (c, h, v) in cells {
            if v + 2.0 * h <= lower + tol {
                continue;
            }
            let nh = h / 2.0;
            for mask in 0..(1usize << k) {
                let child: Vec<f64> = c
                    .iter()
                    .enumerate()
                    .map(|(i, ci)| if mask & (1 << i) != 0 { ci + nh } else { ci - nh })
                    .collect();
                let cv = eval(&child);
                lower = lower.max(cv);
                next.push((child, nh, cv));
            }
        }
        cells = next;
    }
    (lower, upper_global.max(lower))
}

/// Hull membership by the covering criterion: `x` lies in the tropical hull
/// iff every coordinate is a minimizer of `x - v` for some vertex `v`.
pub fn covers(vertices: &[TorusPoint], x: &TorusPoint, tol: f64) -> bool {
    let d = x.dim();
    let mut covered = vec![false; d];
    for v in vertices {
        let diffs: Vec<f64> = (0..d).map(|j| x[j] - v[j]).collect();
        let min = diffs.iter().copied().fold(f64::INFINITY, f64::min);
        for j in 0..d {
            if diffs[j] <= min + tol {
                covered[j] = true;
            }
        }
    }
    covered.into_iter().all(|c| c)
}

/// One-hot prediction over the assigned coordinates: the label whose sector
/// score is largest (lowest coordinate on ties).
pub fn indicator_predict(omega: &TorusPoint, assignment: &[(String, usize)], x: &TorusPoint) -> String {
    let mut coords: Vec<usize> = assignment.iter().map(|e| e.1).collect();
    coords.sort_unstable();
    let scores: Vec<f64> = coords.iter().map(|&c| x[c] + omega[c]).collect();
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let indicator: Vec<u8> = scores.iter().map(|&s| u8::from(s >= max - 1e-9)).collect();
    let first = indicator.iter().position(|&b| b == 1).unwrap();
    let coord = coords[first];
    assignment.iter().find(|e| e.1 == coord).unwrap().0.clone()
}

/// L2-regularized logistic regression by full-batch gradient descent.
pub fn logistic_regression(xs: &[Vec<f64>], ys: &[i8], lambda: f64, iters: usize) -> (Vec<f64>, f64) {
    let d = xs[0].len();
    let n = xs.len() as f64;
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let lr = 0.1;
    for _ in 0..iters {
        let mut gw = vec![0.0; d];
        let mut gb = 0.0;
        for (x, &y) in xs.iter().zip(ys) {
            let y = f64::from(y);
            let m = y * (x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() + b);
            let s = -y / (1.0 + m.exp());
            for (g, xi) in gw.iter_mut().zip(x) {
                *g += s * xi / n;
            }
            gb += s / n;
        }
        for (wi, g) in w.iter_mut().zip(&gw) {
            *wi -= lr * (g + lambda * *wi);
        }
        b -= lr * gb;
    }
    (w, b)
}
