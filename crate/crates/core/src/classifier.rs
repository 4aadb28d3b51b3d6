//! Zero set T₀ = {t | C(t) = 0} of an entanglement evolution and its
//! topological category:
//!
//! * A: T₀ empty.
//! * B: T₀ a set of isolated points.
//! * E: T₀ a single interval running to the horizon.
//! * O: anything else (zero intervals followed by revivals).
//!
//! Sampled concurrences rarely hit zero exactly at a transversal bounce, and a
//! long exponential approach to C = 0 eventually drops below any absolute
//! tolerance. A sample counts as zero when C_k ≤ tol_c·s_k, where
//! s_k = min(1, |n_k − n_∞| / |n_0 − n_∞|) shrinks the tolerance as the state
//! approaches its limit. Interior local minima are then refined: with a model
//! at hand by golden-section search, and from samples alone by intersecting
//! the secants on either side of the minimum (a kink test). The kink test
//! cannot tell a transversal zero from a minimum whose depth is comparable to
//! the variation over one sample step; `kink_tol` sets where the line falls.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{distance_markovian_with_slack, DISTANCE_MARKOV_SLACK};
use crate::error::{Error, Result};
use crate::models::{Location, Model, ModelSpec, SubspaceMeta};
use crate::montecarlo::sample_sphere;
use crate::state::{
    classify_state, concurrence, positivity, random_pure_state, PolarizationVector, StateClass,
    DEFAULT_CONCURRENCE_TOL, DEFAULT_POSITIVITY_TOL,
};
use crate::trajectory::Trajectory;

pub const MIN_SAMPLES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EvolutionCategory {
    A,
    B,
    E,
    O,
}

impl EvolutionCategory {
    pub const ALL: [EvolutionCategory; 4] = [Self::A, Self::B, Self::E, Self::O];

    pub fn name(self) -> &'static str {
        match self {
            Self::A => "approaching",
            Self::B => "bouncing",
            Self::E => "entering",
            Self::O => "oscillating",
        }
    }

    pub fn letter(self) -> char {
        match self {
            Self::A => 'A',
            Self::B => 'B',
            Self::E => 'E',
            Self::O => 'O',
        }
    }
}

impl std::fmt::Display for EvolutionCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroInterval {
    pub start: f64,
    pub end: f64,
    pub is_point: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    /// Disjoint and sorted.
    pub intervals: Vec<ZeroInterval>,
    pub horizon: f64,
    /// The last run of zeros reaches the horizon, is long enough, and the
    /// trajectory has settled near n_∞.
    pub tail_is_zero: bool,
    /// The last run of zeros reaches the horizon and is long enough.
    pub tail_reaches_horizon: bool,
    /// n(t_max) is not yet within `horizon_fraction` of n_∞ (or n_∞ is unknown).
    pub undecided_horizon: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierOptions {
    pub tol_c: f64,
    /// Zero runs no wider than this many average sample steps are points.
    pub point_width_steps: f64,
    /// Sample-only mode: a kink is a zero if the secant intersection lies
    /// within `kink_tol`·max(C_{k−1}, C_{k+1}) of zero.
    pub kink_tol: f64,
    pub horizon_fraction: f64,
    pub markov_slack: f64,
}

impl Default for ClassifierOptions {
    fn default() -> Self {
        Self {
            tol_c: DEFAULT_CONCURRENCE_TOL,
            point_width_steps: 2.0,
            kink_tol: 0.05,
            horizon_fraction: 0.05,
            markov_slack: DISTANCE_MARKOV_SLACK,
        }
    }
}

struct Prepared {
    t: Vec<f64>,
    c: Vec<f64>,
    zero: Vec<bool>,
    n_inf: Option<PolarizationVector>,
    d0: f64,
    point_width: f64,
    tail_reaches: bool,
    converged: bool,
}

fn relative_scale(n: &PolarizationVector, n_inf: Option<&PolarizationVector>, d0: f64) -> f64 {
    match n_inf {
        Some(ni) if d0 > 0.0 => (n.distance(ni) / d0).min(1.0),
        _ => 1.0,
    }
}

fn prepare(traj: &Trajectory, opts: &ClassifierOptions) -> Result<Prepared> {
    traj.validate(MIN_SAMPLES)?;
    if !(opts.tol_c >= 0.0) || !(opts.point_width_steps >= 0.0) {
        return Err(Error::Config(
            "classifier tolerances must be non-negative".into(),
        ));
    }
    let t = traj.times();
    let c = traj.concurrences();
    let n = t.len();
    let n_inf = traj.n_infinity;
    let n0 = traj.samples[0].n;
    let d0 = n_inf.map_or(0.0, |ni| n0.distance(&ni));
    let zero: Vec<bool> = traj
        .samples
        .iter()
        .map(|s| s.c <= opts.tol_c * relative_scale(&s.n, n_inf.as_ref(), d0))
        .collect();
    let point_width = opts.point_width_steps * (t[n - 1] - t[0]) / (n - 1) as f64;

    let tail_len = zero.iter().rev().take_while(|&&z| z).count();
    let need = 5usize.max((0.05 * n as f64).ceil() as usize);
    let tail_reaches = tail_len >= need;
    let converged = match n_inf {
        Some(ni) => traj.samples[n - 1].n.distance(&ni) <= opts.horizon_fraction * d0 + 1e-12,
        None => false,
    };
    Ok(Prepared {
        t,
        c,
        zero,
        n_inf,
        d0,
        point_width,
        tail_reaches,
        converged,
    })
}

/// Maximal runs of zero samples as index ranges.
fn runs(zero: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < zero.len() {
        if zero[k] {
            let s = k;
            while k + 1 < zero.len() && zero[k + 1] {
                k += 1;
            }
            out.push((s, k));
        }
        k += 1;
    }
    out
}

/// Indices of strict interior local minima not adjacent to a zero sample.
fn interior_minima(p: &Prepared) -> Vec<usize> {
    (1..p.c.len() - 1)
        .filter(|&k| {
            !p.zero[k - 1]
                && !p.zero[k]
                && !p.zero[k + 1]
                && p.c[k] < p.c[k - 1]
                && p.c[k] <= p.c[k + 1]
        })
        .collect()
}

fn finish(p: &Prepared, mut intervals: Vec<ZeroInterval>) -> ZeroSet {
    intervals.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut merged: Vec<ZeroInterval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match merged.last_mut() {
            Some(last) if iv.start <= last.end => last.end = last.end.max(iv.end),
            _ => merged.push(iv),
        }
    }
    for iv in &mut merged {
        iv.is_point = iv.end - iv.start <= p.point_width;
    }
    let horizon = *p.t.last().expect("validated length");
    ZeroSet {
        intervals: merged,
        horizon,
        tail_is_zero: p.tail_reaches && p.converged,
        tail_reaches_horizon: p.tail_reaches,
        undecided_horizon: !p.converged,
    }
}

/// Zero set from samples alone.
pub fn zero_set(traj: &Trajectory, opts: &ClassifierOptions) -> Result<ZeroSet> {
    let p = prepare(traj, opts)?;
    let mut intervals: Vec<ZeroInterval> = runs(&p.zero)
        .into_iter()
        .map(|(i, j)| ZeroInterval {
            start: p.t[i],
            end: p.t[j],
            is_point: false,
        })
        .collect();
    let n = p.t.len();
    for k in interior_minima(&p) {
        if k < 2 || k + 2 >= n {
            continue;
        }
        let (t, c) = (&p.t, &p.c);
        let sl = (c[k - 1] - c[k - 2]) / (t[k - 1] - t[k - 2]);
        let sr = (c[k + 2] - c[k + 1]) / (t[k + 2] - t[k + 1]);
        if !(sl < 0.0 && sr > 0.0) {
            continue;
        }
        // c[k−1] + sl(τ − t[k−1]) = c[k+1] + sr(τ − t[k+1])
        let tau = (c[k + 1] - c[k - 1] + sl * t[k - 1] - sr * t[k + 1]) / (sl - sr);
        let tau = tau.clamp(t[k - 1], t[k + 1]);
        let v = c[k - 1] + sl * (tau - t[k - 1]);
        if v.abs() <= opts.kink_tol * c[k - 1].max(c[k + 1]) {
            intervals.push(ZeroInterval {
                start: tau,
                end: tau,
                is_point: true,
            });
        }
    }
    Ok(finish(&p, intervals))
}

/// Golden-section minimum of `f` on [a, b]: (argmin, min) over all evaluations.
fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..200 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v < best.1 {
                best = (x, v);
            }
        }
        if best.1 == 0.0 || !(x1 > a && x2 < b && x1 < x2) {
            break;
        }
    }
    best
}

/// Boundary between `inside` (pred true) and `outside` (pred false),
/// returned on the `inside` side.
fn bisect_edge(pred: &dyn Fn(f64) -> bool, mut inside: f64, mut outside: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Zero set with run edges and interior minima refined against the model.
pub fn zero_set_refined(
    traj: &Trajectory,
    model: &dyn Model,
    opts: &ClassifierOptions,
) -> Result<ZeroSet> {
    let p = prepare(traj, opts)?;
    let n_inf = p.n_inf;
    let d0 = p.d0;
    let thr = |t: f64| opts.tol_c * relative_scale(&model.state(t), n_inf.as_ref(), d0);
    let is_zero = |t: f64| model.concurrence(t) <= thr(t);
    let last = p.t.len() - 1;

    let mut intervals = Vec::new();
    for (i, j) in runs(&p.zero) {
        let start = if i > 0 {
            bisect_edge(&is_zero, p.t[i], p.t[i - 1])
        } else {
            p.t[0]
        };
        let end = if j < last {
            bisect_edge(&is_zero, p.t[j], p.t[j + 1])
        } else {
            p.t[last]
        };
        intervals.push(ZeroInterval {
            start,
            end,
            is_point: false,
        });
    }
    let conc = |t: f64| model.concurrence(t);
    for k in interior_minima(&p) {
        let (ts, cs) = golden_min(&conc, p.t[k - 1], p.t[k + 1]);
        let local = opts.tol_c * p.c[k - 1].max(p.c[k + 1]);
        if cs > local && cs > thr(ts) {
            continue;
        }
        let pred = |t: f64| {
            let c = model.concurrence(t);
            c <= local || c <= thr(t)
        };
        let start = bisect_edge(&pred, ts, p.t[k - 1]);
        let end = bisect_edge(&pred, ts, p.t[k + 1]);
        intervals.push(ZeroInterval {
            start,
            end,
            is_point: false,
        });
    }
    Ok(finish(&p, intervals))
}

pub fn categorize(zs: &ZeroSet) -> EvolutionCategory {
    let iv = &zs.intervals;
    if iv.is_empty() {
        EvolutionCategory::A
    } else if iv.iter().all(|i| i.is_point) && !zs.tail_is_zero {
        EvolutionCategory::B
    } else if iv.len() == 1 && !iv[0].is_point && zs.tail_is_zero {
        EvolutionCategory::E
    } else {
        EvolutionCategory::O
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryPrediction {
    /// Prediction-table cell for (n_∞ location, dim(D ∩ S) vs dim(D)).
    pub cell: Vec<EvolutionCategory>,
    /// Cell filtered by distance-Markovianity.
    pub allowed: Vec<EvolutionCategory>,
    /// The filter removed every cell entry; `allowed` falls back to the cell.
    pub warning: bool,
}

pub fn predict_categories(meta: &SubspaceMeta, distance_markovian: bool) -> CategoryPrediction {
    use EvolutionCategory::*;
    let equal = meta.dim_d_cap_s == meta.dim_d;
    let cell = match (meta.n_infinity_location, equal) {
        (Location::InteriorS, true) => vec![E, O],
        (Location::InteriorS, false) => vec![A, B],
        (Location::BoundaryS, true) => vec![A, B, E, O],
        (Location::BoundaryS, false) => vec![A, B],
    };
    let keep: &[EvolutionCategory] = if distance_markovian { &[A, E] } else { &[B, O] };
    let filtered: Vec<_> = cell.iter().copied().filter(|c| keep.contains(c)).collect();
    if filtered.is_empty() {
        CategoryPrediction {
            allowed: cell.clone(),
            cell,
            warning: true,
        }
    } else {
        CategoryPrediction {
            cell,
            allowed: filtered,
            warning: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    /// `None` when the outcome hinges on an unsettled trailing zero run.
    pub category: Option<EvolutionCategory>,
    pub zero_set: ZeroSet,
    /// `None` without a limiting state.
    pub distance_markovian: Option<bool>,
    pub max_distance_increase: Option<f64>,
    pub prediction: Option<CategoryPrediction>,
}

impl Classification {
    pub fn undecided_horizon(&self) -> bool {
        self.zero_set.undecided_horizon
    }

    /// Observed category lies in the prediction-table cell (true when either is unknown).
    pub fn consistent_with_cell(&self) -> bool {
        match (&self.category, &self.prediction) {
            (Some(c), Some(p)) => p.cell.contains(c),
            _ => true,
        }
    }
}

fn assemble(traj: &Trajectory, zs: ZeroSet, opts: &ClassifierOptions) -> Result<Classification> {
    let category = if zs.undecided_horizon && zs.tail_reaches_horizon {
        None
    } else {
        Some(categorize(&zs))
    };
    let dm = match traj.n_infinity {
        Some(_) => Some(distance_markovian_with_slack(traj, opts.markov_slack)?),
        None => None,
    };
    let prediction = match (&traj.meta, dm) {
        (Some(meta), Some(dm)) => Some(predict_categories(meta, dm.is_distance_markovian)),
        _ => None,
    };
    Ok(Classification {
        category,
        zero_set: zs,
        distance_markovian: dm.map(|d| d.is_distance_markovian),
        max_distance_increase: dm.map(|d| d.max_violation),
        prediction,
    })
}

/// Classify sampled data (no model to refine against).
pub fn classify_trajectory(traj: &Trajectory, opts: &ClassifierOptions) -> Result<Classification> {
    let zs = zero_set(traj, opts)?;
    assemble(traj, zs, opts)
}

/// Classify a model on the given times (default grid if `None`).
pub fn classify_model(
    model: &dyn Model,
    times: Option<&[f64]>,
    opts: &ClassifierOptions,
) -> Result<Classification> {
    let owned;
    let times = match times {
        Some(t) => t,
        None => {
            owned = model.default_times();
            &owned
        }
    };
    let traj = model.trajectory(times)?;
    let zs = zero_set_refined(&traj, model, opts)?;
    assemble(&traj, zs, opts)
}

pub fn classify_spec(spec: &ModelSpec, opts: &ClassifierOptions) -> Result<Classification> {
    classify_model(spec.build()?.as_ref(), None, opts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub value: f64,
    pub category: Option<EvolutionCategory>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalBracket {
    pub lo: f64,
    pub hi: f64,
    pub lo_category: Option<EvolutionCategory>,
    pub hi_category: Option<EvolutionCategory>,
    /// Midpoint of the final bracket.
    pub value: f64,
    /// Successive brackets, from the scan step down to the final width.
    pub history: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalScan {
    pub parameter: String,
    pub samples: Vec<ScanSample>,
    pub brackets: Vec<CriticalBracket>,
}

impl CriticalScan {
    pub fn critical_values(&self) -> Vec<f64> {
        self.brackets.iter().map(|b| b.value).collect()
    }
}

pub const CRITICAL_TOL: f64 = 1e-6;

/// Categorize `steps` equally spaced values of `parameter` on [lo, hi] and
/// bisect every change of category down to `CRITICAL_TOL`.
pub fn critical_scan(
    base: &ModelSpec,
    parameter: &str,
    lo: f64,
    hi: f64,
    steps: usize,
    opts: &ClassifierOptions,
) -> Result<CriticalScan> {
    if steps < 3 {
        return Err(Error::Config(format!(
            "critical scan needs at least 3 steps, got {steps}"
        )));
    }
    if !(lo < hi) {
        return Err(Error::Config(format!(
            "scan range must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    base.get(parameter)?;
    let category_at = |v: f64| -> Result<Option<EvolutionCategory>> {
        Ok(classify_spec(&base.with_param(parameter, v)?, opts)?.category)
    };
    let mut samples = Vec::with_capacity(steps);
    for i in 0..steps {
        let value = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        samples.push(ScanSample {
            value,
            category: category_at(value)?,
        });
    }
    let mut brackets = Vec::new();
    for w in samples.windows(2) {
        if w[0].category == w[1].category {
            continue;
        }
        let (mut a, mut b) = (w[0].value, w[1].value);
        let (ca, cb) = (w[0].category, w[1].category);
        let mut history = vec![(a, b)];
        while b - a > CRITICAL_TOL {
            let mid = 0.5 * (a + b);
            if category_at(mid)? == ca {
                a = mid;
            } else {
                b = mid;
            }
            history.push((a, b));
        }
        brackets.push(CriticalBracket {
            lo: a,
            hi: b,
            lo_category: ca,
            hi_category: cb,
            value: 0.5 * (a + b),
            history,
        });
    }
    Ok(CriticalScan {
        parameter: parameter.to_string(),
        samples,
        brackets,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryClass {
    InteriorS,
    BoundaryS,
    NotSeparable,
}

/// Probe whether a separable state lies on the boundary of the separable set.
///
/// Half of the probes step a distance `eps` toward a Haar-random pure state
/// (always physical); the rest step in an isotropic random direction and are
/// kept only if physical. Any entangled probe makes n a boundary point.
pub fn boundary_probe<R: Rng + ?Sized>(
    n: &PolarizationVector,
    eps: f64,
    probes: usize,
    tol_c: f64,
    rng: &mut R,
) -> Result<BoundaryClass> {
    if !(eps > 0.0) || probes < 16 {
        return Err(Error::Config(format!(
            "boundary probe needs eps > 0 and at least 16 probes (eps {eps}, probes {probes})"
        )));
    }
    let report = positivity(n, DEFAULT_POSITIVITY_TOL);
    if !report.physical {
        return Err(Error::Unphysical(Box::new(report)));
    }
    if concurrence(n)?.c > tol_c {
        return Ok(BoundaryClass::NotSeparable);
    }
    for i in 0..probes {
        let probe = if i % 2 == 0 {
            let target = random_pure_state(rng);
            let dist = target.distance(n);
            if dist == 0.0 {
                continue;
            }
            n.add_scaled(&target.add_scaled(n, -1.0), eps.min(dist) / dist)
        } else {
            let u = sample_sphere(15, eps, rng)?;
            let p = n.add_scaled(&PolarizationVector::from_slice(&u)?, 1.0);
            if !positivity(&p, DEFAULT_POSITIVITY_TOL).physical {
                continue;
            }
            p
        };
        if classify_state(&probe, DEFAULT_POSITIVITY_TOL, tol_c)? == StateClass::Entangled {
            return Ok(BoundaryClass::BoundaryS);
        }
    }
    Ok(BoundaryClass::InteriorS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::d3::embed_block;
    use crate::models::ye::ye_n_infinity;
    use crate::models::{D3Params, YeParams, ZjParams};
    use crate::trajectory::{uniform_times, TrajectorySample};
    use rand::SeedableRng;

    fn synthetic(f: impl Fn(f64) -> f64, t_max: f64, n: usize) -> Trajectory {
        let samples = uniform_times(t_max, n)
            .into_iter()
            .map(|t| TrajectorySample {
                t,
                n: PolarizationVector::zeros(),
                c: f(t),
            })
            .collect();
        Trajectory {
            samples,
            n_infinity: None,
            model: None,
            meta: None,
        }
    }

    fn iv(start: f64, end: f64) -> ZeroInterval {
        ZeroInterval {
            start,
            end,
            is_point: end - start <= 1e-3,
        }
    }

    fn zs(intervals: Vec<ZeroInterval>, tail: bool) -> ZeroSet {
        ZeroSet {
            intervals,
            horizon: 10.0,
            tail_is_zero: tail,
            tail_reaches_horizon: tail,
            undecided_horizon: false,
        }
    }

    #[test]
    fn categorize_definitions() {
        use EvolutionCategory::*;
        assert_eq!(categorize(&zs(vec![], false)), A);
        assert_eq!(categorize(&zs(vec![iv(1.0, 1.0), iv(3.0, 3.0)], false)), B);
        assert_eq!(categorize(&zs(vec![iv(2.0, 10.0)], true)), E);
        assert_eq!(categorize(&zs(vec![iv(1.0, 2.0), iv(4.0, 10.0)], true)), O);
        assert_eq!(categorize(&zs(vec![iv(1.0, 2.0)], false)), O);
        assert_eq!(categorize(&zs(vec![iv(1.0, 1.0), iv(4.0, 10.0)], true)), O);
    }

    #[test]
    fn prediction_table_cells() {
        use EvolutionCategory::*;
        let meta = |loc, d, ds| SubspaceMeta {
            dim_d: d,
            dim_d_cap_s: ds,
            n_infinity: None,
            n_infinity_location: loc,
        };
        let p = predict_categories(&meta(Location::BoundaryS, 3, 1), true);
        assert_eq!(p.allowed, vec![A]);
        let p = predict_categories(&meta(Location::InteriorS, 3, 3), true);
        assert_eq!((p.cell.clone(), p.allowed.clone()), (vec![E, O], vec![E]));
        let p = predict_categories(&meta(Location::BoundaryS, 3, 3), true);
        assert_eq!((p.cell.len(), p.allowed.clone()), (4, vec![A, E]));
        let p = predict_categories(&meta(Location::InteriorS, 3, 1), false);
        assert_eq!(p.allowed, vec![B]);
        assert!(!p.warning);
    }

    #[test]
    fn synthetic_sample_mode() {
        use EvolutionCategory::*;
        let o = ClassifierOptions::default();
        let c = classify_trajectory(&synthetic(|_| 0.5, 10.0, 101), &o).unwrap();
        assert_eq!(c.category, Some(A));
        assert!(c.undecided_horizon());
        // |cos t| has transversal zeros that never land on a sample.
        let z = zero_set(&synthetic(|t: f64| (t.cos()).abs(), 20.0, 997), &o).unwrap();
        assert_eq!(z.intervals.len(), 6);
        for (k, i) in z.intervals.iter().enumerate() {
            assert!(i.is_point);
            let expect = std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI;
            assert!((i.start - expect).abs() < 1e-4);
        }
        assert_eq!(categorize(&z), B);
        // A smooth positive minimum is not a zero.
        let z = zero_set(&synthetic(|t: f64| 1.0 + (t - 5.0).powi(2), 10.0, 101), &o).unwrap();
        assert!(z.intervals.is_empty());
        // Dark period then revival then death.
        let f = |t: f64| {
            if (2.0..4.0).contains(&t) || t > 7.0 {
                0.0
            } else {
                0.3
            }
        };
        let z = zero_set(&synthetic(f, 10.0, 1001), &o).unwrap();
        assert_eq!(z.intervals.len(), 2);
        assert!(z.tail_reaches_horizon && !z.tail_is_zero);
    }

    #[test]
    fn too_short_trajectory_rejected() {
        let r = zero_set(&synthetic(|_| 1.0, 1.0, 10), &ClassifierOptions::default());
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn d3_examples() {
        use EvolutionCategory::*;
        let o = ClassifierOptions::default();
        let markov = ModelSpec::D3(D3Params {
            g: 0.5,
            gamma: 1.0,
            b0: 1.0,
            bloch: [1.0, 0.0, 0.0],
        });
        let c = classify_spec(&markov, &o).unwrap();
        assert_eq!(c.category, Some(A));
        assert_eq!(c.distance_markovian, Some(true));
        assert!(!c.undecided_horizon());
        let bounce = ModelSpec::D3(D3Params {
            g: 0.5,
            gamma: 0.1,
            b0: 1.0,
            bloch: [1.0, 0.0, 0.0],
        });
        let c = classify_spec(&bounce, &o).unwrap();
        assert_eq!(c.category, Some(B));
        assert_eq!(c.distance_markovian, Some(false));
        // Zeros at the roots of ζ_T: tan Ωt = −Ω/γ.
        let om = (0.24f64).sqrt();
        let first = (std::f64::consts::PI - (om / 0.1).atan()) / om;
        assert!((c.zero_set.intervals[0].start - first).abs() < 1e-8);
        assert!(c
            .zero_set
            .intervals
            .windows(2)
            .all(|w| ((w[1].start - w[0].start) - std::f64::consts::PI / om).abs() < 1e-8));
    }

    #[test]
    fn ye_and_zj_examples() {
        use EvolutionCategory::*;
        let o = ClassifierOptions::default();
        let ye = |a0| {
            classify_spec(&ModelSpec::Ye(YeParams { gamma: 1.0, a0 }), &o)
                .unwrap()
                .category
        };
        assert_eq!(ye(0.1), Some(A));
        assert_eq!(ye(0.5), Some(E));
        let zj = ModelSpec::Zj(ZjParams::default());
        assert_eq!(classify_spec(&zj, &o).unwrap().category, Some(E));
        let zj = zj.with_param("gamma", 0.01).unwrap();
        assert_eq!(classify_spec(&zj, &o).unwrap().category, Some(O));
    }

    #[test]
    fn ye_critical_scan() {
        let scan = critical_scan(
            &ModelSpec::Ye(YeParams::default()),
            "a0",
            0.0,
            1.0,
            11,
            &ClassifierOptions::default(),
        )
        .unwrap();
        assert_eq!(scan.brackets.len(), 1);
        let b = &scan.brackets[0];
        assert!((b.value - 1.0 / 3.0).abs() < 1e-6);
        assert!(b.hi - b.lo <= CRITICAL_TOL);
        assert_ne!(b.lo_category, b.hi_category);
        assert!(b
            .history
            .windows(2)
            .all(|w| w[1].1 - w[1].0 < w[0].1 - w[0].0 && w[1].0 >= w[0].0 && w[1].1 <= w[0].1));
        assert!(critical_scan(
            &ModelSpec::Ye(YeParams::default()),
            "nope",
            0.0,
            1.0,
            11,
            &ClassifierOptions::default()
        )
        .is_err());
    }

    #[test]
    fn probes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let tol = DEFAULT_CONCURRENCE_TOL;
        for eps in [0.1, 0.01] {
            assert_eq!(
                boundary_probe(&PolarizationVector::zeros(), eps, 64, tol, &mut rng).unwrap(),
                BoundaryClass::InteriorS
            );
        }
        assert_eq!(
            boundary_probe(&embed_block(0.0, 0.0, 0.3), 1e-3, 256, tol, &mut rng).unwrap(),
            BoundaryClass::BoundaryS
        );
        assert_eq!(
            boundary_probe(&ye_n_infinity(), 1e-3, 256, tol, &mut rng).unwrap(),
            BoundaryClass::BoundaryS
        );
        assert_eq!(
            boundary_probe(&embed_block(0.5, 0.0, 0.0), 1e-3, 256, tol, &mut rng).unwrap(),
            BoundaryClass::NotSeparable
        );
        let mut bad = PolarizationVector::zeros();
        bad.n[0] = 2.0;
        assert!(boundary_probe(&bad, 0.1, 64, tol, &mut rng).is_err());
        assert!(boundary_probe(&PolarizationVector::zeros(), 0.1, 8, tol, &mut rng).is_err());
    }
}
