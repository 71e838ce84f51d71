//! Tuning-curve distances and the extreme-value scaling of the tropical
//! distance between a noisy vector and the origin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::torus::trop_distance_raw;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Height of the signal coordinate in the random tuning trial.
pub const SIGNAL: f64 = 5.0;

/// Responses of one neuron across stimuli.
#[derive(Clone, Debug, PartialEq)]
pub struct TuningCurve {
    values: Vec<f64>,
}

impl TuningCurve {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(TuningCurve { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn trop_distance(&self, other: &TuningCurve) -> Result<f64> {
        trop_distance_raw(&self.values, &other.values)
    }

    pub fn euclidean_distance(&self, other: &TuningCurve) -> Result<f64> {
        crate::error::check_dims(self.values.len(), other.values.len())?;
        Ok(euclidean(&self.values, &other.values))
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Gaussian density with mean `mu` and deviation `sigma` sampled at `n`
/// evenly spaced stimuli on `[-5, 5]`, plus a constant `lift`.
pub fn gaussian_curve(n: usize, mu: f64, sigma: f64, lift: f64) -> Result<TuningCurve> {
    if n < 2 {
        return Err(Error::invalid("need at least two stimuli"));
    }
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma must be positive"));
    }
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let values = (0..n)
        .map(|i| {
            let x = -5.0 + 10.0 * i as f64 / (n - 1) as f64;
            let u = (x - mu) / sigma;
            norm * (-0.5 * u * u).exp() + lift
        })
        .collect();
    TuningCurve::new(values)
}

/// RNG for trial `trial` of a run seeded with `seed`; `stream` separates runs
/// that share a seed (different `n`, different dimension).
pub fn trial_rng(seed: u64, trial: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial);
    rng.set_stream(stream);
    rng
}

/// `Exp(1)` by inverse transform, `-ln U` with `U` in `(0, 1]`.
pub fn sample_exp<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -(1.0 - rng.random::<f64>()).ln()
}

/// Standard Gumbel by inverse transform, `-ln(-ln U)` with `U` in `(0, 1)`.
pub fn sample_gumbel<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(rand::distr::Open01);
    -(-u.ln()).ln()
}

pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Distances between `v = (5, -x_2, …, -x_n)` and the origin for the given
/// noise `x_2..x_n`. Returns `(tropical, euclidean)`.
pub fn tuning_trial_from_noise(noise: &[f64]) -> (f64, f64) {
    let mut v = Vec::with_capacity(noise.len() + 1);
    v.push(SIGNAL);
    v.extend(noise.iter().map(|x| -x));
    let origin = vec![0.0; v.len()];
    let trop = trop_distance_raw(&v, &origin).expect("equal lengths");
    (trop, euclidean(&v, &origin))
}

/// One random tuning trial with `n` stimuli: `n - 1` exponential noise terms.
pub fn random_tuning_trial<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::invalid("need at least two stimuli"));
    }
    let noise: Vec<f64> = (1..n).map(|_| sample_exp(rng)).collect();
    Ok(tuning_trial_from_noise(&noise))
}

/// Largest of `n` exponential draws.
fn max_exp<R: Rng + ?Sized>(n: usize, rng: &mut R) -> f64 {
    (0..n).map(|_| sample_exp(rng)).fold(f64::NEG_INFINITY, f64::max)
}

/// Kolmogorov–Smirnov statistic of `samples` against a continuous CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("KS statistic of an empty sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (((i + 1) as f64 / m) - f).max(f - i as f64 / m)
        })
        .fold(0.0, f64::max))
}

/// KS distance between the law of `max_i x_i - ln n` over `n` exponential
/// draws and the standard Gumbel distribution.
pub fn gumbel_deviation(n: usize, trials: usize, seed: u64) -> Result<f64> {
    if n == 0 || trials == 0 {
        return Err(Error::invalid("need n >= 1 and trials >= 1"));
    }
    let shift = (n as f64).ln();
    let samples: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| max_exp(n, &mut trial_rng(seed, t, n as u64)) - shift)
        .collect();
    ks_statistic(&samples, gumbel_cdf)
}

/// `H_n = 1 + 1/2 + … + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

/// Mean and standard error of a sample.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    crate::error::check_dims(xs.len(), ys.len())?;
    if xs.len() < 2 || xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::invalid("need at least two positive points"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// One row of the scaling experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub mean_trop: f64,
    pub se_trop: f64,
    /// `5 + γ + ln n`
    pub theory_trop: f64,
    pub mean_euclid: f64,
    pub se_euclid: f64,
}

/// Monte-Carlo means of both distances for each `n`.
pub fn scaling_table(ns: &[usize], trials: usize, seed: u64) -> Result<Vec<ScalingRow>> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    ns.iter()
        .map(|&n| {
            let draws: Vec<(f64, f64)> = (0..trials as u64)
                .into_par_iter()
                .map(|t| random_tuning_trial(n, &mut trial_rng(seed, t, n as u64)))
                .collect::<Result<_>>()?;
            let trop: Vec<f64> = draws.iter().map(|d| d.0).collect();
            let euclid: Vec<f64> = draws.iter().map(|d| d.1).collect();
            let (mean_trop, se_trop) = mean_and_se(&trop);
            let (mean_euclid, se_euclid) = mean_and_se(&euclid);
            Ok(ScalingRow {
                n,
                mean_trop,
                se_trop,
                theory_trop: SIGNAL + EULER_GAMMA + (n as f64).ln(),
                mean_euclid,
                se_euclid,
            })
        })
        .collect()
}

/// One row of the tuning-curve sweep: distance between the reference curve
/// and the curve with parameter `param` applied.
#[derive(Clone, Debug, PartialEq)]
pub struct TuningRow {
    pub param: f64,
    pub trop: f64,
    pub euclid: f64,
}

/// Which parameter a tuning sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// Vertical lift of the whole curve.
    Lift,
    /// Horizontal shift of the preferred stimulus.
    Shift,
}

/// Distances between a unit Gaussian tuning curve and its lifted or shifted
/// copies.
pub fn tuning_sweep(n: usize, sweep: Sweep, params: &[f64]) -> Result<Vec<TuningRow>> {
    let reference = gaussian_curve(n, 0.0, 1.0, 0.0)?;
    params
        .iter()
        .map(|&param| {
            let other = match sweep {
                Sweep::Lift => gaussian_curve(n, 0.0, 1.0, param)?,
                Sweep::Shift => gaussian_curve(n, param, 1.0, 0.0)?,
            };
            Ok(TuningRow {
                param,
                trop: reference.trop_distance(&other)?,
                euclid: reference.euclidean_distance(&other)?,
            })
        })
        .collect()
}
