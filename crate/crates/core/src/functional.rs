//! The tropical metric on real functions modulo constants, functional
//! tropical hyperplanes `H_{ω,ε}`, and classification of sampled functions.
//!
//! Suprema are taken on uniform grids over a bounded domain, doubling the
//! resolution until two successive estimates agree to within 1e-6.

use crate::error::{Error, Result};
use crate::svm::{self, HardFit, LabeledDataset, TrainedModel};
use crate::torus::TorusPoint;

/// Convergence threshold between successive grid refinements.
pub const REFINE_TOL: f64 = 1e-6;

/// Maximum number of grid doublings.
pub const MAX_REFINEMENTS: usize = 20;

const INITIAL_INTERVALS: usize = 256;

/// Distances at or below this value count as "on the hyperplane".
pub const ON_HYPERPLANE_TOL: f64 = 1e-6;

pub trait RealFunction: Sync {
    fn eval(&self, x: f64) -> f64;
}

impl<T: RealFunction + ?Sized> RealFunction for &T {
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }
}

/// The constant function; `Constant(0.0)` is the normal of `H_{0,ε}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constant(pub f64);

impl RealFunction for Constant {
    fn eval(&self, _: f64) -> f64 {
        self.0
    }
}

/// Pointwise sum of two functions.
pub struct Sum<F, G>(pub F, pub G);

impl<F: RealFunction, G: RealFunction> RealFunction for Sum<F, G> {
    fn eval(&self, x: f64) -> f64 {
        self.0.eval(x) + self.1.eval(x)
    }
}

/// `Σ w·N(x; μ, σ)` with Gaussian densities.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMixture {
    components: Vec<(f64, f64, f64)>,
}

impl GaussianMixture {
    /// Components are `(weight, mu, sigma)`.
    pub fn new(components: Vec<(f64, f64, f64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("mixture needs at least one component"));
        }
        for &(w, mu, sigma) in &components {
            if !(w.is_finite() && mu.is_finite() && sigma.is_finite()) {
                return Err(Error::invalid("mixture parameters must be finite"));
            }
            if sigma <= 0.0 {
                return Err(Error::invalid("sigma must be positive"));
            }
        }
        Ok(GaussianMixture { components })
    }

    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(vec![(1.0, mu, sigma)])
    }

    pub fn components(&self) -> &[(f64, f64, f64)] {
        &self.components
    }
}

impl RealFunction for GaussianMixture {
    fn eval(&self, x: f64) -> f64 {
        let root_two_pi = (2.0 * std::f64::consts::PI).sqrt();
        self.components
            .iter()
            .map(|&(w, mu, sigma)| {
                let u = (x - mu) / sigma;
                w * (-0.5 * u * u).exp() / (sigma * root_two_pi)
            })
            .sum()
    }
}

/// A function known at finitely many abscissae, linearly interpolated in
/// between and held constant beyond the ends.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        crate::error::check_dims(grid.len(), values.len())?;
        if grid.is_empty() {
            return Err(Error::invalid("grid function needs at least one sample"));
        }
        if let Some(i) = grid.iter().chain(&values).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i % grid.len()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("grid must be strictly increasing"));
        }
        Ok(GridFunction { grid, values })
    }

    /// Samples `f` at the given abscissae.
    pub fn sample(f: &dyn RealFunction, grid: &[f64]) -> Result<Self> {
        Self::new(grid.to_vec(), grid.iter().map(|&x| f.eval(x)).collect())
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The values as a point of the tropical projective torus.
    pub fn to_torus(&self) -> Result<TorusPoint> {
        TorusPoint::normalize(&self.values)
    }
}

impl RealFunction for GridFunction {
    fn eval(&self, x: f64) -> f64 {
        let k = self.grid.partition_point(|&g| g <= x);
        if k == 0 {
            return self.values[0];
        }
        if k == self.grid.len() {
            return self.values[k - 1];
        }
        let (x0, x1) = (self.grid[k - 1], self.grid[k]);
        let t = (x - x0) / (x1 - x0);
        self.values[k - 1] + t * (self.values[k] - self.values[k - 1])
    }
}

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!("[{lo}, {hi}] is not a proper interval")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    fn grid(&self, intervals: usize) -> Vec<f64> {
        let h = (self.hi - self.lo) / intervals as f64;
        (0..=intervals).map(|i| if i == intervals { self.hi } else { self.lo + h * i as f64 }).collect()
    }
}

impl Default for Interval {
    /// `[-8, 8]`, wide enough that Gaussian tails of the worked examples are
    /// below 1e-14.
    fn default() -> Self {
        Interval { lo: -8.0, hi: 8.0 }
    }
}

/// Runs `estimate` on successively doubled uniform grids until two estimates
/// agree within [`REFINE_TOL`]; returns the last result.
fn refine<T>(domain: Interval, mut estimate: impl FnMut(&[f64]) -> Result<(f64, T)>) -> Result<(f64, T)> {
    let mut intervals = INITIAL_INTERVALS;
    let mut prev = estimate(&domain.grid(intervals))?;
    for _ in 0..MAX_REFINEMENTS {
        intervals *= 2;
        let next = estimate(&domain.grid(intervals))?;
        if (next.0 - prev.0).abs() < REFINE_TOL {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numerical(format!("grid estimate did not settle after {MAX_REFINEMENTS} refinements")))
}

/// Golden-section search for a maximum of `g` on the grid cells next to
/// `xs[i]`; never returns less than the grid value `v`.
fn polish_max(g: &dyn Fn(f64) -> f64, xs: &[f64], i: usize, v: f64) -> (f64, f64) {
    let (mut a, mut b) = (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)]);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..60 {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    let (x, gx) = if gc >= gd { (c, gc) } else { (d, gd) };
    if gx.is_finite() && gx > v { (x, gx) } else { (xs[i], v) }
}

/// `max(f - g) - min(f - g)` over `domain`.
pub fn func_trop_distance(f: &dyn RealFunction, g: &dyn RealFunction, domain: Interval) -> Result<f64> {
    refine(domain, |xs| {
        let diff = |x: f64| f.eval(x) - g.eval(x);
        let values: Vec<f64> = xs.iter().map(|&x| diff(x)).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("function is not finite at {}", xs[i])));
        }
        let (imax, imin) = (0..xs.len()).fold((0, 0), |(a, b), i| {
            (if values[i] > values[a] { i } else { a }, if values[i] < values[b] { i } else { b })
        });
        let hi = polish_max(&diff, xs, imax, values[imax]).1;
        let lo = -polish_max(&|x| -diff(x), xs, imin, -values[imin]).1;
        Ok((hi - lo, ()))
    })
    .map(|r| r.0)
}

/// `H_{ω,ε}`: functions `f` whose maximum of `f + ω` is also reached at
/// distance at least `ε` from its argmax.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalHyperplane<W> {
    omega: W,
    epsilon: f64,
}

impl<W: RealFunction> FunctionalHyperplane<W> {
    pub fn new(omega: W, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        Ok(FunctionalHyperplane { omega, epsilon })
    }

    pub fn omega(&self) -> &W {
        &self.omega
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Where `f + ω` peaks relative to the excluded ball.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Peak {
    /// Leftmost grid argmax of `f + ω`.
    argmax: f64,
    /// Best location outside the open ball `B_ε(argmax)`.
    outside: f64,
    gap: f64,
}

fn peak_on_grid(g: &dyn RealFunction, epsilon: f64, domain: Interval, xs: &[f64]) -> Result<Peak> {
    let values: Vec<f64> = xs.iter().map(|&x| g.eval(x)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("function is not finite at {}", xs[i])));
    }
    let last = xs.len() - 1;
    let mut best = 1;
    for i in 1..last {
        if values[i] > values[best] {
            best = i;
        }
    }
    // a plateau that reaches the boundary is fine; a boundary peak is not
    for edge in [0, last] {
        if values[edge] > values[best] + 1e-12 {
            return Err(Error::invalid(format!(
                "maximum of f + ω sits on the domain boundary at {}",
                xs[edge]
            )));
        }
    }
    let x_star = xs[best];
    let (_, top) = polish_max(&|x| g.eval(x), xs, best, values[best]);
    let mut outside = None::<(f64, f64)>;
    let mut consider = |x: f64, v: f64| {
        if outside.is_none_or(|(_, ov)| v > ov) {
            outside = Some((x, v));
        }
    };
    let masked = |x: f64| if (x - x_star).abs() >= epsilon { g.eval(x) } else { f64::NEG_INFINITY };
    let best_out = (0..xs.len())
        .filter(|&i| (xs[i] - x_star).abs() >= epsilon)
        .max_by(|&i, &j| values[i].total_cmp(&values[j]).then(j.cmp(&i)));
    if let Some(j) = best_out {
        let (x, v) = polish_max(&masked, xs, j, values[j]);
        consider(x, v);
    }
    // the sphere |x - x*| = ε itself lies outside the open ball
    for x in [x_star - epsilon, x_star + epsilon] {
        if x >= domain.lo && x <= domain.hi {
            consider(x, g.eval(x));
        }
    }
    let (out_x, out_v) =
        outside.ok_or_else(|| Error::invalid("domain has no points outside the excluded ball"))?;
    Ok(Peak { argmax: x_star, outside: out_x, gap: top - out_v })
}

fn refined_peak(f: &dyn RealFunction, omega: &dyn RealFunction, epsilon: f64, domain: Interval) -> Result<Peak> {
    let g = Sum(f, omega);
    refine(domain, |xs| peak_on_grid(&g, epsilon, domain, xs).map(|p| (p.gap, p))).map(|r| r.1)
}

/// `d_tr(f, H_{ω,ε}) = max(f + ω) - max{(f + ω)(y) : |y - x*| >= ε}`.
pub fn dist_to_functional_hyperplane<W: RealFunction>(
    f: &dyn RealFunction,
    h: &FunctionalHyperplane<W>,
    domain: Interval,
) -> Result<f64> {
    Ok(refined_peak(f, &h.omega, h.epsilon, domain)?.gap.max(0.0))
}

/// Sector membership of a function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FunctionalSector {
    /// `f + ω` peaks strictly at `argmax`; `f` lies in every sector `S^x`
    /// with `argmax ∈ B_ε(x)`.
    Sector { argmax: f64 },
    /// The maximum is matched at two places at least `ε` apart.
    OnHyperplane { left: f64, right: f64 },
}

pub fn functional_sector<W: RealFunction>(
    f: &dyn RealFunction,
    h: &FunctionalHyperplane<W>,
    domain: Interval,
) -> Result<FunctionalSector> {
    let peak = refined_peak(f, &h.omega, h.epsilon, domain)?;
    Ok(if peak.gap <= ON_HYPERPLANE_TOL {
        FunctionalSector::OnHyperplane {
            left: peak.argmax.min(peak.outside),
            right: peak.argmax.max(peak.outside),
        }
    } else {
        FunctionalSector::Sector { argmax: peak.argmax }
    })
}

/// A finite-dimensional tropical SVM acting on functions through their
/// samples on a fixed grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalModel {
    grid: Vec<f64>,
    model: TrainedModel,
}

impl FunctionalModel {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn model(&self) -> &TrainedModel {
        &self.model
    }

    /// Samples `f` on the training grid and predicts.
    pub fn classify(&self, f: &dyn RealFunction) -> Result<&str> {
        let values: Vec<f64> = self.grid.iter().map(|&x| f.eval(x)).collect();
        self.model.predict(&TorusPoint::normalize(&values)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionalFit {
    Separable(FunctionalModel),
    Inseparable { best_margin: f64 },
}

impl FunctionalFit {
    pub fn into_model(self) -> Option<FunctionalModel> {
        match self {
            FunctionalFit::Separable(m) => Some(m),
            FunctionalFit::Inseparable { .. } => None,
        }
    }
}

/// Trains on sampled functions that share one grid whose spacing exceeds
/// `epsilon`, so every sample point lies outside the ε-balls of the others.
///
/// Falls back to the heuristic trainer (validated on the training set) when
/// the hard-margin problem is infeasible; the fallback is accepted only if
/// its margin on the retained points is positive.
pub fn train_sampled_functions(samples: &[(GridFunction, String)], epsilon: f64) -> Result<FunctionalFit> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let first = samples.first().ok_or_else(|| Error::invalid("no training functions"))?;
    let grid = first.0.grid().to_vec();
    if samples.iter().any(|(f, _)| f.grid() != grid.as_slice()) {
        return Err(Error::invalid("training functions must share one grid"));
    }
    if grid.windows(2).any(|w| w[1] - w[0] <= epsilon) {
        return Err(Error::invalid("grid spacing must exceed epsilon"));
    }
    let points = samples.iter().map(|(f, _)| f.to_torus()).collect::<Result<Vec<_>>>()?;
    let labels = samples.iter().map(|(_, l)| l.clone()).collect();
    let data = LabeledDataset::new(points, labels)?;
    if data.classes().len() != 2 {
        return Err(Error::invalid("functional training needs exactly two labels"));
    }
    let model = match svm::train_hard(&data)? {
        HardFit::Separable(m) => m,
        HardFit::Inseparable { best_margin } => {
            let m = svm::train_heuristic(&data, &data, svm::DEFAULT_C)?;
            if m.margin() <= svm::MARGIN_TOL {
                return Ok(FunctionalFit::Inseparable { best_margin });
            }
            m
        }
    };
    Ok(FunctionalFit::Separable(FunctionalModel { grid, model }))
}
