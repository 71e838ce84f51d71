//! Linear soft-margin SVM trained by stochastic subgradient descent, used as
//! the classical comparator in the experiments.
//!
//! The bias is handled as an extra constant feature and is regularized along
//! with the weights. The returned model is the average of the second half of
//! the iterates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dims, Error, Result};

pub const DEFAULT_LAMBDA: f64 = 1e-3;

/// Default number of stochastic steps for `n` training points.
pub fn default_steps(n: usize) -> usize {
    200 * n
}

#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub lambda: f64,
}

impl EuclideanModel {
    pub fn zero(dim: usize, lambda: f64) -> Self {
        EuclideanModel { weights: vec![0.0; dim], bias: 0.0, lambda }
    }

    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        check_dims(self.weights.len(), x.len())?;
        Ok(dot(&self.weights, x) + self.bias)
    }

    /// `λ/2 (|w|² + b²) + mean hinge loss`, the objective the optimizer
    /// descends.
    pub fn objective(&self, xs: &[Vec<f64>], ys: &[i8]) -> Result<f64> {
        let mut loss = 0.0;
        for (x, &y) in xs.iter().zip(ys) {
            loss += (1.0 - f64::from(y) * self.decision(x)?).max(0.0);
        }
        let norm2 = dot(&self.weights, &self.weights) + self.bias * self.bias;
        Ok(0.5 * self.lambda * norm2 + loss / xs.len() as f64)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pegasos-style training with step `1/(λt)` and projection onto the ball of
/// radius `1/√λ`. Labels must be `-1` or `+1` with both present.
pub fn train_l2(xs: &[Vec<f64>], ys: &[i8], lambda: f64, steps: usize, seed: u64) -> Result<EuclideanModel> {
    check_dims(xs.len(), ys.len())?;
    if xs.len() < 2 {
        return Err(Error::invalid("need at least two training points"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("lambda must be positive"));
    }
    if steps == 0 {
        return Err(Error::invalid("need at least one step"));
    }
    if let Some(&y) = ys.iter().find(|&&y| y != 1 && y != -1) {
        return Err(Error::invalid(format!("label {y} is not -1 or +1")));
    }
    if !(ys.contains(&1) && ys.contains(&-1)) {
        return Err(Error::invalid("both labels must be present"));
    }
    let dim = xs[0].len();
    for x in xs {
        check_dims(dim, x.len())?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // w[dim] is the bias
    let mut w = vec![0.0; dim + 1];
    let mut avg = vec![0.0; dim + 1];
    let burn_in = steps / 2;
    let radius = 1.0 / lambda.sqrt();
    for t in 1..=steps {
        let i = rng.random_range(0..xs.len());
        let (x, y) = (&xs[i], f64::from(ys[i]));
        let eta = 1.0 / (lambda * t as f64);
        let active = y * (dot(&w[..dim], x) + w[dim]) < 1.0;
        let shrink = 1.0 - eta * lambda;
        w.iter_mut().for_each(|v| *v *= shrink);
        if active {
            for (wj, xj) in w.iter_mut().zip(x) {
                *wj += eta * y * xj;
            }
            w[dim] += eta * y;
        }
        let norm = dot(&w, &w).sqrt();
        if norm > radius {
            w.iter_mut().for_each(|v| *v *= radius / norm);
        }
        if t > burn_in {
            let k = (t - burn_in) as f64;
            for (a, v) in avg.iter_mut().zip(&w) {
                *a += (v - *a) / k;
            }
        }
    }
    let bias = avg.pop().expect("bias slot");
    Ok(EuclideanModel { weights: avg, bias, lambda })
}

/// Sign of `w·x + b`; an exact zero maps to `+1`.
pub fn predict_l2(model: &EuclideanModel, x: &[f64]) -> Result<i8> {
    Ok(if model.decision(x)? >= 0.0 { 1 } else { -1 })
}
