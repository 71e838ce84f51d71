//! Seeded experiment drivers on synthetic two-class Gaussian data.
//!
//! Class `A` is drawn around `(s, -s, 0, …, 0)` and class `B` around
//! `(-s, s, 0, …, 0)` with identity covariance, so the class means are
//! `2s√2` apart. Every trial draws its own training, validation and test
//! sets from `trial_rng(seed, trial, d)`, which makes results independent of
//! how trials are scheduled across threads.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::baseline::{self, predict_l2, train_l2};
use crate::error::{Error, Result};
use crate::extremes::{self, trial_rng, Sweep};
use crate::functional::{self, Constant, FunctionalHyperplane, GaussianMixture, GridFunction, Interval, RealFunction};
use crate::generalization::hit_rate_lower_bound;
use crate::plot::{Figure, Series};
use crate::svm::{self, HardFit, LabeledDataset};
use crate::torus::TorusPoint;

pub const LABEL_A: &str = "A";
pub const LABEL_B: &str = "B";

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    /// Training points per class; the validation set has the same size.
    pub samples_per_class: usize,
    /// Test points per class.
    pub test_per_class: usize,
    /// Half the coordinate offset `s` of the class means.
    pub separation: f64,
    pub eta: f64,
    /// Drop budget parameter of the heuristic trainer.
    pub c: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            trials: 200,
            dims: vec![3, 5, 10, 20, 50, 100],
            samples_per_class: 5,
            test_per_class: 100,
            separation: 5.0,
            eta: 0.1,
            c: svm::DEFAULT_C,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.dims.is_empty() {
            return Err(Error::invalid("dims must not be empty"));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d < 3) {
            return Err(Error::invalid(format!("dimension {d} is below 3")));
        }
        if self.samples_per_class == 0 || self.test_per_class == 0 {
            return Err(Error::invalid("sample sizes must be positive"));
        }
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return Err(Error::invalid("separation must be positive"));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::invalid("eta must lie in (0, 1)"));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::invalid("C must be positive"));
        }
        Ok(())
    }

    /// Distance between the class means, `2s√2`.
    pub fn mean_separation(&self) -> f64 {
        2.0 * self.separation * std::f64::consts::SQRT_2
    }
}

/// One synthetic draw in both representations: torus points for the tropical
/// classifier and raw vectors with `±1` labels for the Euclidean one.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSample {
    pub data: LabeledDataset,
    pub raw: Vec<Vec<f64>>,
    pub signs: Vec<i8>,
}

/// Draws `per_class` points of class A, then `per_class` of class B.
pub fn sample_gaussian_classes<R: Rng + ?Sized>(d: usize, per_class: usize, s: f64, rng: &mut R) -> Result<GaussianSample> {
    if d < 3 {
        return Err(Error::invalid(format!("dimension {d} is below 3")));
    }
    let mut points = Vec::with_capacity(2 * per_class);
    let mut labels = Vec::with_capacity(2 * per_class);
    let mut raw = Vec::with_capacity(2 * per_class);
    let mut signs = Vec::with_capacity(2 * per_class);
    for (label, sign) in [(LABEL_A, 1.0), (LABEL_B, -1.0)] {
        for _ in 0..per_class {
            let mut x: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            x[0] += sign * s;
            x[1] -= sign * s;
            points.push(TorusPoint::normalize(&x)?);
            labels.push(label.to_string());
            raw.push(x);
            signs.push(if sign > 0.0 { 1 } else { -1 });
        }
    }
    Ok(GaussianSample { data: LabeledDataset::new(points, labels)?, raw, signs })
}

/// A dataset determined by `seed` alone.
pub fn gen_gaussian_dataset(d: usize, per_class: usize, s: f64, seed: u64) -> Result<GaussianSample> {
    sample_gaussian_classes(d, per_class, s, &mut trial_rng(seed, 0, d as u64))
}

struct TrialSets {
    train: GaussianSample,
    validation: GaussianSample,
    test: GaussianSample,
    l2_seed: u64,
}

fn draw_trial(cfg: &ExperimentConfig, d: usize, trial: u64) -> Result<TrialSets> {
    let mut rng = trial_rng(cfg.seed, trial, d as u64);
    let n = cfg.samples_per_class;
    Ok(TrialSets {
        train: sample_gaussian_classes(d, n, cfg.separation, &mut rng)?,
        validation: sample_gaussian_classes(d, n, cfg.separation, &mut rng)?,
        test: sample_gaussian_classes(d, cfg.test_per_class, cfg.separation, &mut rng)?,
        l2_seed: rng.random(),
    })
}

fn l2_accuracy(train: &GaussianSample, test: &GaussianSample, seed: u64) -> Result<f64> {
    let n = train.raw.len();
    let model = train_l2(&train.raw, &train.signs, baseline::DEFAULT_LAMBDA, baseline::default_steps(n), seed)?;
    let mut hits = 0usize;
    for (x, &y) in test.raw.iter().zip(&test.signs) {
        if predict_l2(&model, x)? == y {
            hits += 1;
        }
    }
    Ok(hits as f64 / test.raw.len() as f64)
}

/// Sample mean and sample standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let (mean, se) = extremes::mean_and_se(xs);
    (mean, se * (xs.len() as f64).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurseRow {
    pub d: usize,
    pub tropical_hit: f64,
    pub tropical_sd: f64,
    pub classical_hit: f64,
    pub classical_sd: f64,
}

/// Test accuracy of the heuristic tropical SVM (model selection on the
/// validation set) and of the linear SVM (trained on the same training set).
pub fn run_curse_experiment(cfg: &ExperimentConfig) -> Result<Vec<CurseRow>> {
    cfg.validate()?;
    cfg.dims
        .iter()
        .map(|&d| {
            let hits: Vec<(f64, f64)> = (0..cfg.trials as u64)
                .into_par_iter()
                .map(|t| {
                    let sets = draw_trial(cfg, d, t)?;
                    let model = svm::train_heuristic(&sets.train.data, &sets.validation.data, cfg.c)?;
                    let trop = model.accuracy(&sets.test.data)?;
                    let classical = l2_accuracy(&sets.train, &sets.test, sets.l2_seed)?;
                    Ok((trop, classical))
                })
                .collect::<Result<_>>()?;
            let (tropical_hit, tropical_sd) = mean_sd(&hits.iter().map(|h| h.0).collect::<Vec<_>>());
            let (classical_hit, classical_sd) = mean_sd(&hits.iter().map(|h| h.1).collect::<Vec<_>>());
            Ok(CurseRow { d, tropical_hit, tropical_sd, classical_hit, classical_sd })
        })
        .collect()
}

pub fn curse_figure(rows: &[CurseRow], title: &str) -> Figure {
    Figure::new(title, "dimension d", "test hit rate", rows.iter().map(|r| r.d as f64).collect())
        .with_series(
            Series::new("tropical", rows.iter().map(|r| r.tropical_hit).collect())
                .with_err(rows.iter().map(|r| r.tropical_sd).collect()),
        )
        .with_series(
            Series::new("classical", rows.iter().map(|r| r.classical_hit).collect())
                .with_err(rows.iter().map(|r| r.classical_sd).collect()),
        )
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub d: usize,
    pub hit: f64,
    pub hit_sd: f64,
    pub train_hit: f64,
    /// Mean over trials of `train_hit - vc_bound(2N, d, η)`, clipped at 0.
    pub lower_bound: f64,
    /// Fraction of trials whose test hit rate reached that trial's bound.
    pub coverage: f64,
}

/// Test hit rates of the tropical SVM against the VC lower bound computed
/// from the training hit rate with `n = 2N` training points.
pub fn run_bound_experiment(cfg: &ExperimentConfig) -> Result<Vec<BoundRow>> {
    cfg.validate()?;
    let n_train = 2 * cfg.samples_per_class;
    if let Some(d) = cfg.dims.iter().find(|&&d| d > n_train) {
        return Err(Error::invalid(format!("the bound needs n >= d, but d = {d} exceeds n = {n_train}")));
    }
    cfg.dims
        .iter()
        .map(|&d| {
            let per_trial: Vec<(f64, f64, f64)> = (0..cfg.trials as u64)
                .into_par_iter()
                .map(|t| {
                    let sets = draw_trial(cfg, d, t)?;
                    let model = svm::train_heuristic(&sets.train.data, &sets.validation.data, cfg.c)?;
                    let train_hit = model.accuracy(&sets.train.data)?;
                    let hit = model.accuracy(&sets.test.data)?;
                    let lb = hit_rate_lower_bound(train_hit, n_train, d, cfg.eta)?;
                    Ok((hit, train_hit, lb))
                })
                .collect::<Result<_>>()?;
            let hits: Vec<f64> = per_trial.iter().map(|r| r.0).collect();
            let (hit, hit_sd) = mean_sd(&hits);
            let m = per_trial.len() as f64;
            Ok(BoundRow {
                d,
                hit,
                hit_sd,
                train_hit: per_trial.iter().map(|r| r.1).sum::<f64>() / m,
                lower_bound: per_trial.iter().map(|r| r.2).sum::<f64>() / m,
                coverage: per_trial.iter().filter(|r| r.0 >= r.2).count() as f64 / m,
            })
        })
        .collect()
}

pub fn bound_figure(rows: &[BoundRow], title: &str) -> Figure {
    Figure::new(title, "dimension d", "hit rate", rows.iter().map(|r| r.d as f64).collect())
        .with_series(
            Series::new("test hit", rows.iter().map(|r| r.hit).collect()).with_err(rows.iter().map(|r| r.hit_sd).collect()),
        )
        .with_series(Series::new("lower bound", rows.iter().map(|r| r.lower_bound).collect()).dashed())
}

/// Outcome of the support-vector shift check over many trials.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftSummary {
    pub trials: usize,
    /// Trials whose hard-margin model put A on sector 1 and B on sector 2.
    pub selected: usize,
    /// Largest `|predicted - trained|` among those trials.
    pub max_error: f64,
}

/// Hard-margin training on `N` points per class in dimension `d` (first
/// entry of `dims`), comparing `ω_2 - ω_1` with the support-vector formula.
pub fn run_shift_experiment(cfg: &ExperimentConfig) -> Result<ShiftSummary> {
    cfg.validate()?;
    let d = cfg.dims[0];
    let outcomes: Vec<Option<f64>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let sets = draw_trial(cfg, d, t)?;
            let HardFit::Separable(model) = svm::train_hard(&sets.train.data)? else {
                return Ok(None);
            };
            match svm::support_vector_shift(&sets.train.data, &model, LABEL_A, cfg.separation) {
                Ok(shift) => Ok(Some(shift.error())),
                Err(Error::InvalidArgument(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let errors: Vec<f64> = outcomes.iter().flatten().copied().collect();
    Ok(ShiftSummary {
        trials: cfg.trials,
        selected: errors.len(),
        max_error: errors.iter().copied().fold(0.0, f64::max),
    })
}

/// Mean distances of the random tuning trial for each `n`.
pub fn run_scaling_experiment(ns: &[usize], trials: usize, seed: u64) -> Result<Vec<extremes::ScalingRow>> {
    extremes::scaling_table(ns, trials, seed)
}

pub fn scaling_figure(rows: &[extremes::ScalingRow]) -> Figure {
    Figure::new("distance to the origin", "n", "mean distance", rows.iter().map(|r| r.n as f64).collect())
        .with_series(
            Series::new("tropical", rows.iter().map(|r| r.mean_trop).collect())
                .with_err(rows.iter().map(|r| r.se_trop).collect()),
        )
        .with_series(Series::new("5 + gamma + ln n", rows.iter().map(|r| r.theory_trop).collect()).dashed())
        .with_series(
            Series::new("euclidean", rows.iter().map(|r| r.mean_euclid).collect())
                .with_err(rows.iter().map(|r| r.se_euclid).collect()),
        )
        .with_series(
            Series::new("sqrt(25 + 2(n - 1))", rows.iter().map(|r| (25.0 + 2.0 * (r.n as f64 - 1.0)).sqrt()).collect()).dashed(),
        )
}

/// Lift and shift sweeps of a Gaussian tuning curve.
pub fn run_tuning_experiment(stimuli: usize) -> Result<(Vec<extremes::TuningRow>, Vec<extremes::TuningRow>)> {
    let lifts: Vec<f64> = (0..=20).map(|k| k as f64 * 0.05).collect();
    let shifts: Vec<f64> = (0..=30).map(|k| k as f64 * 0.1).collect();
    Ok((
        extremes::tuning_sweep(stimuli, Sweep::Lift, &lifts)?,
        extremes::tuning_sweep(stimuli, Sweep::Shift, &shifts)?,
    ))
}

pub fn tuning_figure(rows: &[extremes::TuningRow], title: &str, x_label: &str) -> Figure {
    Figure::new(title, x_label, "distance", rows.iter().map(|r| r.param).collect())
        .with_series(Series::new("tropical", rows.iter().map(|r| r.trop).collect()))
        .with_series(Series::new("euclidean", rows.iter().map(|r| r.euclid).collect()))
}

/// The four Gaussians `N(-2, 1)`, `N(-2, 1/2)`, `N(2, 1)`, `N(2, 1/2)`.
pub fn example_functions() -> [GaussianMixture; 4] {
    [(-2.0, 1.0), (-2.0, 0.5), (2.0, 1.0), (2.0, 0.5)]
        .map(|(mu, sigma)| GaussianMixture::gaussian(mu, sigma).expect("valid parameters"))
}

/// Named quantities of the function-space examples: pairwise distances,
/// distances to `H_{0,1}` and `H_{F3,1}`, and the labels a model trained on
/// sampled `F1` (A) and `F3` (B) assigns to all four functions.
pub fn run_functional_experiment() -> Result<Vec<(String, String)>> {
    let fs = example_functions();
    let domain = Interval::default();
    let mut out = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (0, 3), (2, 3), (1, 2)] {
        let d = functional::func_trop_distance(&fs[i], &fs[j], domain)?;
        out.push((format!("d(F{}, F{})", i + 1, j + 1), format!("{d:.6}")));
    }
    let flat = FunctionalHyperplane::new(Constant(0.0), 1.0)?;
    for (i, f) in fs.iter().enumerate() {
        let d = functional::dist_to_functional_hyperplane(f, &flat, domain)?;
        out.push((format!("d(F{}, H_0)", i + 1), format!("{d:.6}")));
    }
    let shifted = FunctionalHyperplane::new(fs[2].clone(), 1.0)?;
    let d = functional::dist_to_functional_hyperplane(&fs[0], &shifted, domain)?;
    out.push(("d(F1, H_F3)".into(), format!("{d:.6}")));

    let grid: Vec<f64> = (-4..=4).map(f64::from).collect();
    let samples = vec![
        (GridFunction::sample(&fs[0], &grid)?, LABEL_A.to_string()),
        (GridFunction::sample(&fs[2], &grid)?, LABEL_B.to_string()),
    ];
    let model = functional::train_sampled_functions(&samples, 0.5)?
        .into_model()
        .ok_or_else(|| Error::SearchFailed("example functions were not separable".into()))?;
    for (i, f) in fs.iter().enumerate() {
        out.push((format!("class(F{})", i + 1), model.classify(f)?.to_string()));
    }
    Ok(out)
}

pub fn functions_figure() -> Figure {
    let xs: Vec<f64> = (0..=200).map(|k| -5.0 + 0.05 * k as f64).collect();
    let fs = example_functions();
    let mut fig = Figure::new("example functions", "x", "f(x)", xs.clone());
    for (i, f) in fs.iter().enumerate() {
        fig = fig.with_series(Series::new(format!("F{}", i + 1), xs.iter().map(|&x| f.eval(x)).collect()));
    }
    fig
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_separation_formula() {
        let cfg = ExperimentConfig { separation: std::f64::consts::SQRT_2, ..Default::default() };
        assert!((cfg.mean_separation() - 4.0).abs() < 1e-12);
        let cfg = ExperimentConfig { separation: 5.0, ..Default::default() };
        assert!((cfg.mean_separation() - 10.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn dataset_is_deterministic() {
        let a = gen_gaussian_dataset(4, 10, 1.0, 9).unwrap();
        let b = gen_gaussian_dataset(4, 10, 1.0, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_gaussian_dataset(4, 10, 1.0, 10).unwrap());
        assert!(gen_gaussian_dataset(2, 10, 1.0, 9).is_err());
        assert_eq!(a.data.len(), 20);
        assert_eq!(a.data.labels()[0], LABEL_A);
        assert_eq!(a.data.labels()[19], LABEL_B);
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        assert!(ExperimentConfig { trials: 0, ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { dims: vec![], ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { dims: vec![2], ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { separation: 0.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn small_curse_run_is_sane() {
        let cfg = ExperimentConfig { trials: 4, dims: vec![3, 6], test_per_class: 20, ..Default::default() };
        let rows = run_curse_experiment(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert!((0.0..=1.0).contains(&r.tropical_hit) && (0.0..=1.0).contains(&r.classical_hit));
            assert!((0.0..=0.5).contains(&r.tropical_sd));
        }
        assert_eq!(rows, run_curse_experiment(&cfg).unwrap());
    }

    #[test]
    fn bound_needs_enough_points() {
        let cfg = ExperimentConfig { samples_per_class: 5, dims: vec![20], ..Default::default() };
        assert!(run_bound_experiment(&cfg).is_err());
    }
}
