//! Hard-margin and heuristic tropical support vector machines.
//!
//! A classifier is a normal vector `ω` together with an injective map from
//! labels to sectors of `H_ω`. For a fixed map the best margin is a linear
//! program in `(z, ω)` (see [`build_lp`]); training enumerates the maps.
//!
//! Coordinates of `ω` that no label owns only ever appear as upper-bounded
//! terms in that LP, so they can be pushed arbitrarily low: the optimal
//! margin depends on the assigned coordinates alone. Ranking assignments
//! therefore uses the small LP over assigned coordinates (closed form for two
//! labels), and only the winning assignment goes through the full LP plus the
//! minimum-norm selection that pins the remaining coordinates.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{check_dims, Error, Result};
use crate::hyperplane::TropicalHyperplane;
use crate::lp::{self, LinearProgram, LpSolution};
use crate::torus::{TorusPoint, EQ_TOL};

/// Margins at or below this value count as "not separable".
pub const MARGIN_TOL: f64 = 1e-9;

/// Default penalty for the heuristic trainer.
pub const DEFAULT_C: f64 = 1.0;

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    points: Vec<TorusPoint>,
    labels: Vec<String>,
}

impl LabeledDataset {
    /// Pairs points with labels. All points must share one dimension; an
    /// empty dataset is allowed.
    pub fn new(points: Vec<TorusPoint>, labels: Vec<String>) -> Result<Self> {
        check_dims(points.len(), labels.len())?;
        if let Some(first) = points.first() {
            for p in &points {
                check_dims(first.dim(), p.dim())?;
            }
        }
        Ok(LabeledDataset { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dimension of the points, 0 for an empty dataset.
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, TorusPoint::dim)
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TorusPoint, &str)> {
        self.points.iter().zip(self.labels.iter().map(String::as_str))
    }

    /// Distinct labels in sorted order.
    pub fn classes(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.labels.iter().collect();
        set.into_iter().cloned().collect()
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        LabeledDataset {
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    /// Concatenates two datasets of equal dimension.
    pub fn concat(&self, other: &LabeledDataset) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        LabeledDataset::new(points, labels)
    }
}

/// Labels indexed `0..q` in sorted order, plus the class of every point.
struct Classes {
    names: Vec<String>,
    of_point: Vec<usize>,
}

impl Classes {
    fn of(data: &LabeledDataset) -> Self {
        let names = data.classes();
        let of_point = data
            .labels
            .iter()
            .map(|l| names.binary_search(l).expect("label comes from the same dataset"))
            .collect();
        Classes { names, of_point }
    }

    fn count(&self) -> usize {
        self.names.len()
    }
}

/// Injective map from labels to coordinate indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorAssignment {
    entries: Vec<(String, usize)>,
}

impl SectorAssignment {
    pub fn new(mut entries: Vec<(String, usize)>) -> Result<Self> {
        entries.sort();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::invalid(format!("label `{}` assigned twice", w[0].0)));
            }
        }
        let coords: BTreeSet<usize> = entries.iter().map(|e| e.1).collect();
        if coords.len() != entries.len() {
            return Err(Error::invalid("two labels share a sector"));
        }
        Ok(SectorAssignment { entries })
    }

    /// `(label, coordinate)` pairs sorted by label.
    pub fn entries(&self) -> &[(String, usize)] {
        &self.entries
    }

    pub fn coord_of(&self, label: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.0 == label).map(|e| e.1)
    }

    pub fn label_of(&self, coord: usize) -> Option<&str> {
        self.entries.iter().find(|e| e.1 == coord).map(|e| e.0.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// How [`TrainedModel::predict`] resolves ties between assigned coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TiePolicy {
    #[default]
    LowestIndex,
}

impl TiePolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            TiePolicy::LowestIndex => "lowest-index",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lowest-index" => Some(TiePolicy::LowestIndex),
            _ => None,
        }
    }
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    omega: TorusPoint,
    assignment: SectorAssignment,
    margin: f64,
    tie_policy: TiePolicy,
}

impl TrainedModel {
    pub fn new(
        omega: TorusPoint,
        assignment: SectorAssignment,
        margin: f64,
        tie_policy: TiePolicy,
    ) -> Result<Self> {
        if let Some(&(_, c)) = assignment.entries().iter().find(|e| e.1 >= omega.dim()) {
            return Err(Error::invalid(format!("sector {c} out of range for dimension {}", omega.dim())));
        }
        if assignment.len() < 2 {
            return Err(Error::invalid("a classifier needs at least two labels"));
        }
        Ok(TrainedModel { omega, assignment, margin, tie_policy })
    }

    pub fn omega(&self) -> &TorusPoint {
        &self.omega
    }

    pub fn assignment(&self) -> &SectorAssignment {
        &self.assignment
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn hyperplane(&self) -> TropicalHyperplane {
        TropicalHyperplane::new(self.omega.clone())
    }

    /// Label owning the largest assigned coordinate of `x + ω`. Coordinates
    /// outside the assignment are ignored.
    pub fn predict(&self, x: &TorusPoint) -> Result<&str> {
        check_dims(self.dim(), x.dim())?;
        let score = |c: usize| x[c] + self.omega[c];
        let best = self
            .assignment
            .entries()
            .iter()
            .map(|e| score(e.1))
            .fold(f64::NEG_INFINITY, f64::max);
        let coord = self
            .assignment
            .entries()
            .iter()
            .map(|e| e.1)
            .filter(|&c| score(c) >= best - EQ_TOL)
            .min()
            .expect("assignment is nonempty");
        Ok(self.assignment.label_of(coord).expect("coordinate is assigned"))
    }

    /// Fraction of `data` predicted correctly.
    pub fn accuracy(&self, data: &LabeledDataset) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::invalid("accuracy of an empty dataset"));
        }
        let mut hits = 0usize;
        for (x, label) in data.iter() {
            if self.predict(x)? == label {
                hits += 1;
            }
        }
        Ok(hits as f64 / data.len() as f64)
    }
}

/// Outcome of hard-margin training.
#[derive(Clone, Debug, PartialEq)]
pub enum HardFit {
    Separable(TrainedModel),
    /// No assignment admits a positive margin; `best_margin` is the largest
    /// LP optimum seen (`<= 0`).
    Inseparable { best_margin: f64 },
}

impl HardFit {
    pub fn model(&self) -> Option<&TrainedModel> {
        match self {
            HardFit::Separable(m) => Some(m),
            HardFit::Inseparable { .. } => None,
        }
    }

    pub fn into_model(self) -> Option<TrainedModel> {
        match self {
            HardFit::Separable(m) => Some(m),
            HardFit::Inseparable { .. } => None,
        }
    }
}

fn check_assignment(data: &LabeledDataset, asg: &SectorAssignment) -> Result<()> {
    let d = data.dim();
    for (label, c) in asg.entries() {
        if *c >= d {
            return Err(Error::invalid(format!("sector {c} of label `{label}` out of range (d = {d})")));
        }
    }
    for label in data.labels() {
        if asg.coord_of(label).is_none() {
            return Err(Error::UnknownLabel(label.clone()));
        }
    }
    Ok(())
}

/// The margin LP for a fixed assignment.
///
/// Variables are `(z, ω_0, …, ω_{d-2})`; `ω_{d-1}` is fixed to zero. For every
/// point with assigned coordinate `i` and every `j != i` there is one row
/// `z + x_j + ω_j - x_i - ω_i <= 0`. The objective maximizes `z`.
pub fn build_lp(data: &LabeledDataset, asg: &SectorAssignment) -> Result<LinearProgram> {
    check_assignment(data, asg)?;
    let d = data.dim();
    let mut objective = vec![0.0; d];
    objective[0] = 1.0;
    let mut lp = LinearProgram::new(objective)?;
    append_margin_rows(&mut lp, data, asg, d, None)?;
    Ok(lp)
}

/// Adds the margin rows to `lp`, whose first `d` columns are `(z, ω_0..ω_{d-2})`.
/// With `fixed_z = Some(z)` the `z` column is dropped into the bound.
fn append_margin_rows(
    lp: &mut LinearProgram,
    data: &LabeledDataset,
    asg: &SectorAssignment,
    width: usize,
    fixed_z: Option<f64>,
) -> Result<()> {
    let d = data.dim();
    let omega_col = |c: usize| if c + 1 < d { Some(c + 1) } else { None };
    let mut row = vec![0.0; width];
    for (x, label) in data.iter() {
        let i = asg.coord_of(label).expect("checked above");
        for j in (0..d).filter(|&j| j != i) {
            row.iter_mut().for_each(|v| *v = 0.0);
            let mut bound = x[i] - x[j];
            match fixed_z {
                Some(z) => bound -= z,
                None => row[0] = 1.0,
            }
            if let Some(cj) = omega_col(j) {
                row[cj] += 1.0;
            }
            if let Some(ci) = omega_col(i) {
                row[ci] -= 1.0;
            }
            lp.add_constraint(&row, bound)?;
        }
    }
    Ok(())
}

/// Optimal margin for one assignment (given as a coordinate per class index).
fn assignment_optimum(data: &LabeledDataset, classes: &Classes, coords: &[usize]) -> Result<f64> {
    if coords.len() == 2 {
        let (a, b) = pair_gaps(data, classes, coords[0], coords[1]);
        let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
        return Ok((min(&a) + min(&b)) / 2.0);
    }
    let lp = build_reduced_lp(data, classes, coords)?;
    match lp::solve(&lp)? {
        LpSolution::Optimal { value, .. } => Ok(value),
        // every class owns a sector, so the margin is bounded and z = -inf is
        // never forced; anything else means the rows were built wrong
        other => Err(Error::Numerical(format!("reduced margin LP returned {other:?}"))),
    }
}

/// Margin LP restricted to the assigned coordinates, with the first
/// assigned coordinate pinned to zero. Variables are `(z, ω_{c_1}, …)`.
fn build_reduced_lp(data: &LabeledDataset, classes: &Classes, coords: &[usize]) -> Result<LinearProgram> {
    let q = coords.len();
    let mut objective = vec![0.0; q];
    objective[0] = 1.0;
    let mut lp = LinearProgram::new(objective)?;
    let mut row = vec![0.0; q];
    for (x, &cls) in data.points.iter().zip(&classes.of_point) {
        let i = coords[cls];
        for (slot, &j) in coords.iter().enumerate() {
            if slot == cls {
                continue;
            }
            row.iter_mut().for_each(|v| *v = 0.0);
            row[0] = 1.0;
            if slot > 0 {
                row[slot] += 1.0;
            }
            if cls > 0 {
                row[cls] -= 1.0;
            }
            lp.add_constraint(&row, x[i] - x[j])?;
        }
    }
    Ok(lp)
}

/// For two classes on sectors `(i, k)`: `x_i - x_k` over class 0 and
/// `x_k - x_i` over class 1.
fn pair_gaps(data: &LabeledDataset, classes: &Classes, i: usize, k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (x, &cls) in data.points.iter().zip(&classes.of_point) {
        if cls == 0 {
            a.push(x[i] - x[k]);
        } else {
            b.push(x[k] - x[i]);
        }
    }
    (a, b)
}

/// All injective maps `0..q -> 0..d` in lexicographic order.
fn injective_maps(q: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(q: usize, d: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for c in 0..d {
            if !used[c] {
                used[c] = true;
                cur.push(c);
                rec(q, d, cur, used, out);
                cur.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(q, d, &mut Vec::with_capacity(q), &mut vec![false; d], &mut out);
    out
}

fn check_label_count(q: usize, d: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::invalid("training needs at least two distinct labels"));
    }
    if q > d {
        return Err(Error::invalid(format!("{q} labels cannot own distinct sectors in dimension {d}")));
    }
    Ok(())
}

/// Hard-margin training: the assignment with the largest LP optimum wins
/// (earliest in enumeration order on ties), then the minimum-norm `ω`
/// attaining that margin is selected.
pub fn train_hard(data: &LabeledDataset) -> Result<HardFit> {
    let classes = Classes::of(data);
    check_label_count(classes.count(), data.dim())?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for coords in injective_maps(classes.count(), data.dim()) {
        let z = assignment_optimum(data, &classes, &coords)?;
        if best.as_ref().is_none_or(|(bz, _)| z > *bz + 1e-12) {
            best = Some((z, coords));
        }
    }
    let (z, coords) = best.expect("at least one assignment exists when q <= d");
    if z <= MARGIN_TOL {
        return Ok(HardFit::Inseparable { best_margin: z });
    }
    fit_assignment(data, &classes, &coords).map(HardFit::Separable)
}

/// Solves the full margin LP for a fixed assignment, then re-solves for the
/// smallest `max_i |ω_i|` that keeps the optimal margin.
fn fit_assignment(data: &LabeledDataset, classes: &Classes, coords: &[usize]) -> Result<TrainedModel> {
    let asg = SectorAssignment::new(
        classes.names.iter().cloned().zip(coords.iter().copied()).collect(),
    )?;
    let lp = build_lp(data, &asg)?;
    let z = match lp::solve(&lp)? {
        LpSolution::Optimal { value, .. } => value,
        other => return Err(Error::Numerical(format!("margin LP returned {other:?}"))),
    };
    let omega = min_norm_omega(data, &asg, z)?;
    let margin = assignment_margin(data, &asg, &omega);
    TrainedModel::new(omega, asg, margin, TiePolicy::LowestIndex)
}

/// Minimizes `t` subject to `|ω_i| <= t` and the margin rows at level `z`.
/// If round-off makes the exact level infeasible, a hair of slack is given.
///
/// The infinity norm with `ω_{d-1} = 0` stands in for `d_tr(ω, 0)`; it picks
/// `(5, 5, 0)` out of the optimal ray `(5 + c, 5 + c, 0)` of the two-point
/// example.
fn min_norm_omega(data: &LabeledDataset, asg: &SectorAssignment, z: f64) -> Result<TorusPoint> {
    let d = data.dim();
    match min_norm_at_level(data, asg, z)? {
        LpSolution::Infeasible => {}
        other => return min_norm_point(other, d),
    }
    min_norm_point(min_norm_at_level(data, asg, z - 1e-9 * z.abs().max(1.0))?, d)
}

fn min_norm_at_level(data: &LabeledDataset, asg: &SectorAssignment, level: f64) -> Result<LpSolution> {
    let d = data.dim();
    let t_col = d;
    let mut objective = vec![0.0; d + 1];
    objective[t_col] = -1.0;
    let mut lp = LinearProgram::new(objective)?;
    append_margin_rows(&mut lp, data, asg, d + 1, Some(level))?;
    let mut row = vec![0.0; d + 1];
    for c in 1..d {
        for sign in [1.0, -1.0] {
            row.iter_mut().for_each(|v| *v = 0.0);
            row[c] = sign;
            row[t_col] = -1.0;
            lp.add_constraint(&row, 0.0)?;
        }
    }
    lp::solve(&lp)
}

fn min_norm_point(sol: LpSolution, d: usize) -> Result<TorusPoint> {
    let point = match sol {
        LpSolution::Optimal { point, .. } => point,
        other => return Err(Error::Numerical(format!("minimum-norm LP returned {other:?}"))),
    };
    let mut raw: Vec<f64> = point[1..d].to_vec();
    raw.push(0.0);
    TorusPoint::normalize(&raw)
}

/// Signed margin of `x` for sector `i`: `(x+ω)_i - max_{j != i}(x+ω)_j`.
/// Positive exactly when `x` lies strictly inside sector `i`, where it equals
/// the distance to the hyperplane.
fn signed_margins(x: &TorusPoint, omega: &TorusPoint) -> Vec<f64> {
    let s: Vec<f64> = x.coords().iter().zip(omega.coords()).map(|(a, b)| a + b).collect();
    let (mut top, mut arg, mut second) = (f64::NEG_INFINITY, 0, f64::NEG_INFINITY);
    for (j, &v) in s.iter().enumerate() {
        if v > top {
            second = top;
            top = v;
            arg = j;
        } else if v > second {
            second = v;
        }
    }
    s.iter()
        .enumerate()
        .map(|(j, &v)| if j == arg { v - second } else { v - top })
        .collect()
}

fn assignment_margin(data: &LabeledDataset, asg: &SectorAssignment, omega: &TorusPoint) -> f64 {
    data.iter()
        .map(|(x, label)| signed_margins(x, omega)[asg.coord_of(label).expect("assigned")])
        .fold(f64::INFINITY, f64::min)
}

/// Margin of `ω` on `data` under the best label-to-sector assignment.
///
/// Positive values are the minimum distance of the points to `H_ω` with every
/// point strictly inside its label's sector; zero means some point sits on the
/// hyperplane; negative values are minus the smallest achievable worst
/// violation.
pub fn margin_function(data: &LabeledDataset, omega: &TorusPoint) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::invalid("margin of an empty dataset"));
    }
    check_dims(data.dim(), omega.dim())?;
    let classes = Classes::of(data);
    let d = data.dim();
    check_label_count(classes.count(), d)?;
    // worst[c][i]: smallest signed margin of class c's points for sector i
    let mut worst = vec![vec![f64::INFINITY; d]; classes.count()];
    for (x, &cls) in data.points.iter().zip(&classes.of_point) {
        for (w, m) in worst[cls].iter_mut().zip(signed_margins(x, omega)) {
            *w = w.min(m);
        }
    }
    let best = injective_maps(classes.count(), d)
        .into_iter()
        .map(|coords| {
            coords
                .iter()
                .enumerate()
                .map(|(cls, &c)| worst[cls][c])
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(best)
}

/// One candidate of the heuristic trainer.
struct Candidate {
    hits: usize,
    margin: f64,
    coords: [usize; 2],
    retained: Vec<usize>,
}

/// Error-tolerant binary training with model selection on `validation`.
///
/// For every ordered sector pair the hard LP is solved; while its optimum is
/// not positive, the binding point whose removal raises the margin most is
/// dropped and the LP re-solved, up to `ceil(n / (2C)) - 1` points. Each
/// candidate is scored by validation accuracy, then by margin, then by the
/// sector pair in lexicographic order.
pub fn train_heuristic(train: &LabeledDataset, validation: &LabeledDataset, c: f64) -> Result<TrainedModel> {
    if validation.is_empty() {
        return Err(Error::invalid("validation set is empty"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("C must be a positive real"));
    }
    check_dims(train.dim(), validation.dim())?;
    let classes = Classes::of(train);
    if classes.count() != 2 {
        return Err(Error::invalid("the heuristic trainer is binary"));
    }
    check_label_count(2, train.dim())?;
    let val_class: Vec<usize> = validation
        .labels()
        .iter()
        .map(|l| classes.names.binary_search(l).map_err(|_| Error::UnknownLabel(l.clone())))
        .collect::<Result<_>>()?;

    let n = train.len();
    let max_drops = ((n as f64 / (2.0 * c)).ceil() as usize).saturating_sub(1);
    let d = train.dim();
    let mut best: Option<Candidate> = None;
    for i in 0..d {
        for k in (0..d).filter(|&k| k != i) {
            let Some((delta, margin, retained)) = peel_pair(train, &classes, i, k, max_drops) else {
                continue;
            };
            let hits = validation
                .points()
                .iter()
                .zip(&val_class)
                .filter(|(x, &cls)| pair_predict(x, i, k, delta) == cls)
                .count();
            let better = match &best {
                None => true,
                Some(b) => hits > b.hits || hits == b.hits && margin > b.margin + 1e-12,
            };
            if better {
                best = Some(Candidate { hits, margin, coords: [i, k], retained });
            }
        }
    }
    let best = best.ok_or_else(|| Error::SearchFailed("no sector pair kept both labels".into()))?;
    let kept = train.subset(&best.retained);
    let kept_classes = Classes::of(&kept);
    fit_assignment(&kept, &kept_classes, &best.coords)
}

/// Class index predicted by the pair rule `x_i + ω_i` vs `x_k + ω_k` with
/// `δ = ω_i - ω_k`; ties go to the lower coordinate.
fn pair_predict(x: &TorusPoint, i: usize, k: usize, delta: f64) -> usize {
    let gap = x[i] - x[k] + delta;
    if gap.abs() <= EQ_TOL {
        usize::from(i > k)
    } else if gap > 0.0 {
        0
    } else {
        1
    }
}

/// Greedy peeling for the pair `(i, k)`. Returns `(δ, margin, retained)` or
/// `None` if a class would be emptied.
fn peel_pair(
    data: &LabeledDataset,
    classes: &Classes,
    i: usize,
    k: usize,
    max_drops: usize,
) -> Option<(f64, f64, Vec<usize>)> {
    let mut a: Vec<(f64, usize)> = Vec::new();
    let mut b: Vec<(f64, usize)> = Vec::new();
    for (idx, (x, &cls)) in data.points.iter().zip(&classes.of_point).enumerate() {
        if cls == 0 {
            a.push((x[i] - x[k], idx));
        } else {
            b.push((x[k] - x[i], idx));
        }
    }
    let by_gap = |p: &(f64, usize), q: &(f64, usize)| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1));
    a.sort_by(by_gap);
    b.sort_by(by_gap);
    let (mut ia, mut ib) = (0usize, 0usize);
    let margin = |ia: usize, ib: usize| (a[ia].0 + b[ib].0) / 2.0;
    while margin(ia, ib) <= MARGIN_TOL && ia + ib < max_drops {
        let gain_a = a.get(ia + 1).map(|next| next.0 - a[ia].0);
        let gain_b = b.get(ib + 1).map(|next| next.0 - b[ib].0);
        match (gain_a, gain_b) {
            (Some(ga), Some(gb)) if gb > ga => ib += 1,
            (Some(_), _) => ia += 1,
            (None, Some(_)) => ib += 1,
            (None, None) => break,
        }
    }
    if ia >= a.len() || ib >= b.len() {
        return None;
    }
    let delta = (b[ib].0 - a[ia].0) / 2.0;
    let mut retained: Vec<usize> = a[ia..].iter().chain(&b[ib..]).map(|p| p.1).collect();
    retained.sort_unstable();
    Some((delta, margin(ia, ib), retained))
}

/// Comparison of the trained `ω_1 - ω_0` with the value predicted from the
/// support vectors of a two-Gaussian instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportVectorShift {
    pub predicted: f64,
    pub trained: f64,
}

impl SupportVectorShift {
    pub fn error(&self) -> f64 {
        (self.predicted - self.trained).abs()
    }
}

/// Predicted `ω_1 - ω_0` for data drawn around `(s, -s, 0, …)` (label
/// `class_one`) and `(-s, s, 0, …)`: half the sum of `ξ_0 - ξ_1` at the
/// class-one point minimizing it and `η_0 - η_1` at the other-class point
/// minimizing `η_1 - η_0`.
///
/// Fails unless `model` puts `class_one` on coordinate 0 and the other label
/// on coordinate 1.
pub fn support_vector_shift(
    data: &LabeledDataset,
    model: &TrainedModel,
    class_one: &str,
    s: f64,
) -> Result<SupportVectorShift> {
    let asg = model.assignment();
    let other = asg
        .entries()
        .iter()
        .find(|e| e.0 != class_one)
        .map(|e| e.0.clone())
        .ok_or_else(|| Error::UnknownLabel(class_one.to_string()))?;
    if asg.coord_of(class_one) != Some(0) || asg.coord_of(&other) != Some(1) {
        return Err(Error::invalid("classifier does not use sectors 1 and 2 for the two classes"));
    }
    let mut xi_min = f64::INFINITY;
    let mut eta_min = f64::INFINITY;
    for (x, label) in data.iter() {
        let gap = x[0] - x[1];
        if label == class_one {
            xi_min = xi_min.min(gap - 2.0 * s);
        } else if label == other {
            // minimizing η_1 - η_0 is maximizing η_0 - η_1
            eta_min = eta_min.min(-(gap + 2.0 * s));
        }
    }
    if !xi_min.is_finite() || !eta_min.is_finite() {
        return Err(Error::invalid("both classes need at least one point"));
    }
    Ok(SupportVectorShift {
        predicted: (xi_min - eta_min) / 2.0,
        trained: model.omega()[1] - model.omega()[0],
    })
}
