//! Monte Carlo estimates of the physical and separable volumes in ℝ¹⁵ and of
//! concurrence distributions on spheres |n| = r.
//!
//! Work is split into (radius, block) tasks, each with its own ChaCha8
//! stream derived from the seed, and only integer counts are aggregated.
//! Results therefore depend on (K, samples, seed) alone, not on the number
//! of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{
    classify_state, concurrence_with_tol, random_pure_state, PolarizationVector, StateClass,
    DEFAULT_CONCURRENCE_TOL, DEFAULT_POSITIVITY_TOL,
};

pub const DIM: usize = 15;
pub const MAX_RADIUS: f64 = 1.732_050_807_568_877_2;
const BLOCK: usize = 1 << 16;

/// Volume of the `dim`-ball of radius `r` via V_d = 2π r²/d · V_{d−2}.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0 * r,
        d => std::f64::consts::TAU * r * r / d as f64 * ball_volume(d - 2, r),
    }
}

/// Volume of the 15-ball of radius √3 enclosing every physical state.
pub fn enclosing_ball_volume() -> f64 {
    ball_volume(DIM, MAX_RADIUS)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point on the sphere of the given radius in ℝ^dim.
pub fn sample_sphere<R: Rng + ?Sized>(dim: usize, radius: f64, rng: &mut R) -> Result<Vec<f64>> {
    if dim == 0 {
        return Err(Error::Domain("sphere dimension must be at least 1".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::Domain(format!(
            "sphere radius must be positive, got {radius}"
        )));
    }
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x *= radius / norm);
            return Ok(v);
        }
    }
}

fn sphere_vector<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> PolarizationVector {
    loop {
        let mut n = [0.0; DIM];
        let mut s = 0.0_f64;
        for x in n.iter_mut() {
            *x = rng.sample(StandardNormal);
            s += *x * *x;
        }
        if s > 0.0 {
            let f = radius / s.sqrt();
            return PolarizationVector::new(n.map(|x| x * f));
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub radial_steps: usize,
    pub samples: usize,
    pub seed: u64,
    pub positivity_tol: f64,
    pub concurrence_tol: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            radial_steps: 50,
            samples: 1_000_000,
            seed: 7,
            positivity_tol: DEFAULT_POSITIVITY_TOL,
            concurrence_tol: DEFAULT_CONCURRENCE_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub radii: Vec<f64>,
    pub p_phys: Vec<f64>,
    pub p_sep: Vec<f64>,
    pub phys_counts: Vec<u64>,
    pub sep_counts: Vec<u64>,
    pub samples_per_radius: usize,
    pub seed: u64,
}

fn binomial_err(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

impl RadialProfile {
    pub fn radial_steps(&self) -> usize {
        self.radii.len() - 1
    }

    pub fn p_phys_err(&self) -> Vec<f64> {
        self.p_phys
            .iter()
            .map(|&p| binomial_err(p, self.samples_per_radius))
            .collect()
    }

    pub fn p_sep_err(&self) -> Vec<f64> {
        self.p_sep
            .iter()
            .map(|&p| binomial_err(p, self.samples_per_radius))
            .collect()
    }
}

pub fn radial_profile(cfg: &ProfileConfig) -> Result<RadialProfile> {
    if cfg.radial_steps < 10 {
        return Err(Error::Config(format!(
            "radial steps must be at least 10, got {}",
            cfg.radial_steps
        )));
    }
    if cfg.samples < 1000 {
        return Err(Error::Config(format!(
            "samples per radius must be at least 1000, got {}",
            cfg.samples
        )));
    }
    let k_max = cfg.radial_steps;
    let radii: Vec<f64> = (0..=k_max)
        .map(|k| MAX_RADIUS * k as f64 / k_max as f64)
        .collect();
    let blocks = cfg.samples.div_ceil(BLOCK);
    let tasks: Vec<(usize, usize)> = (0..=k_max)
        .flat_map(|k| (0..blocks).map(move |b| (k, b)))
        .collect();

    let counts: Vec<(u64, u64)> = tasks
        .par_iter()
        .map(|&(k, b)| -> Result<(u64, u64)> {
            let mut rng = stream_rng(cfg.seed, ((k as u64) << 32) | b as u64);
            let len = BLOCK.min(cfg.samples - b * BLOCK);
            let mut phys = 0;
            let mut sep = 0;
            for _ in 0..len {
                let n = sphere_vector(radii[k], &mut rng);
                match classify_state(&n, cfg.positivity_tol, cfg.concurrence_tol)? {
                    StateClass::Unphysical => {}
                    StateClass::Entangled => phys += 1,
                    StateClass::Separable => {
                        phys += 1;
                        sep += 1;
                    }
                }
            }
            Ok((phys, sep))
        })
        .collect::<Result<_>>()?;

    let mut phys_counts = vec![0u64; k_max + 1];
    let mut sep_counts = vec![0u64; k_max + 1];
    for (&(k, _), &(p, s)) in tasks.iter().zip(&counts) {
        phys_counts[k] += p;
        sep_counts[k] += s;
    }
    let total = cfg.samples as f64;
    Ok(RadialProfile {
        radii,
        p_phys: phys_counts.iter().map(|&c| c as f64 / total).collect(),
        p_sep: sep_counts.iter().map(|&c| c as f64 / total).collect(),
        phys_counts,
        sep_counts,
        samples_per_radius: cfg.samples,
        seed: cfg.seed,
    })
}

/// Composite Simpson weights (without the h/3 factor) for `intervals` even.
fn simpson_weights(intervals: usize) -> Result<Vec<f64>> {
    if intervals == 0 || intervals % 2 != 0 {
        return Err(Error::Config(format!(
            "Simpson's rule needs an even number of intervals, got {intervals}"
        )));
    }
    Ok((0..=intervals)
        .map(|k| {
            if k == 0 || k == intervals {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            }
        })
        .collect())
}

/// Composite Simpson integral of equally spaced samples over [a, a + h·(len−1)].
pub fn simpson(values: &[f64], h: f64) -> Result<f64> {
    let w = simpson_weights(values.len().saturating_sub(1))?;
    Ok(h / 3.0 * values.iter().zip(&w).map(|(v, w)| v * w).sum::<f64>())
}

/// Integration weights c_k with V = Σ c_k p_k, i.e. 15 V_B ∫₀¹ p(r̃) r̃¹⁴ dr̃.
fn volume_weights(k_max: usize) -> Result<Vec<f64>> {
    let w = simpson_weights(k_max)?;
    let h = 1.0 / k_max as f64;
    let vb = enclosing_ball_volume();
    Ok(w.iter()
        .enumerate()
        .map(|(k, w)| 15.0 * vb * h / 3.0 * w * (k as f64 * h).powi(14))
        .collect())
}

/// Volume from probabilities on the grid r̃_k = k/K, K = len − 1.
pub fn volume_from_probabilities(p: &[f64]) -> Result<f64> {
    let c = volume_weights(p.len().saturating_sub(1))?;
    Ok(c.iter().zip(p).map(|(c, p)| c * p).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    Phys,
    Sep,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeComponent {
    pub value: f64,
    pub error: f64,
}

pub fn volume(profile: &RadialProfile, which: Which) -> Result<VolumeComponent> {
    let c = volume_weights(profile.radial_steps())?;
    let (p, err) = match which {
        Which::Phys => (&profile.p_phys, profile.p_phys_err()),
        Which::Sep => (&profile.p_sep, profile.p_sep_err()),
    };
    let value = c.iter().zip(p).map(|(c, p)| c * p).sum();
    let error = c
        .iter()
        .zip(&err)
        .map(|(c, e)| (c * e).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(VolumeComponent { value, error })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub v_phys: f64,
    pub v_phys_err: f64,
    pub v_sep: f64,
    pub v_sep_err: f64,
    pub ratio: f64,
    pub ratio_err: f64,
    pub v_ball: f64,
}

pub fn volumes(profile: &RadialProfile) -> Result<VolumeEstimate> {
    let phys = volume(profile, Which::Phys)?;
    let sep = volume(profile, Which::Sep)?;
    let ratio = if phys.value > 0.0 {
        sep.value / phys.value
    } else {
        f64::NAN
    };
    // Separable samples are a subset of physical ones, so per radius
    // cov(p_sep, p_phys) = p_sep (1 − p_phys) / N.
    let c = volume_weights(profile.radial_steps())?;
    let n = profile.samples_per_radius as f64;
    let cov: f64 = c
        .iter()
        .zip(profile.p_sep.iter().zip(&profile.p_phys))
        .map(|(c, (ps, pp))| c * c * ps * (1.0 - pp) / n)
        .sum();
    let rel = (sep.error / sep.value).powi(2) + (phys.error / phys.value).powi(2)
        - 2.0 * cov / (sep.value * phys.value);
    Ok(VolumeEstimate {
        v_phys: phys.value,
        v_phys_err: phys.error,
        v_sep: sep.value,
        v_sep_err: sep.error,
        ratio,
        ratio_err: ratio.abs() * rel.max(0.0).sqrt(),
        v_ball: enclosing_ball_volume(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HistogramStatus {
    Ok,
    /// No physical state was drawn within the sample budget.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceHistogram {
    pub radius: f64,
    pub status: HistogramStatus,
    /// Bin edges on [0, 1], `bins + 1` entries.
    pub edges: Vec<f64>,
    /// Normalized over physical samples; all zeros when empty.
    pub probabilities: Vec<f64>,
    /// Fraction of physical samples with C ≤ tol_c.
    pub zero_mass: f64,
    pub physical: u64,
    pub draws: u64,
    /// True when the radius is the pure-state shell and Haar-random pure
    /// states were drawn instead of uniform sphere points.
    pub pure_shell: bool,
}

pub fn concurrence_histogram(
    radius: f64,
    samples: usize,
    bins: usize,
    seed: u64,
    tol_c: f64,
) -> Result<ConcurrenceHistogram> {
    if !(radius > 0.0 && radius <= MAX_RADIUS + 1e-12) {
        return Err(Error::Domain(format!(
            "histogram radius must lie in (0, √3], got {radius}"
        )));
    }
    if bins == 0 || samples == 0 {
        return Err(Error::Config(
            "histogram needs at least one bin and one sample".into(),
        ));
    }
    // Uniform points on |n| = √3 are almost never physical; pure states are
    // the physical part of that sphere.
    let pure_shell = radius >= MAX_RADIUS - 1e-12;
    let blocks = samples.div_ceil(BLOCK);
    let partial: Vec<(Vec<u64>, u64, u64)> = (0..blocks)
        .into_par_iter()
        .map(|b| -> Result<(Vec<u64>, u64, u64)> {
            let mut rng = stream_rng(seed, (1u64 << 63) | b as u64);
            let len = BLOCK.min(samples - b * BLOCK);
            let mut counts = vec![0u64; bins];
            let mut phys = 0;
            let mut zero = 0;
            for _ in 0..len {
                let n = if pure_shell {
                    random_pure_state(&mut rng)
                } else {
                    sphere_vector(radius, &mut rng)
                };
                let c = match concurrence_with_tol(&n, DEFAULT_POSITIVITY_TOL) {
                    Ok(r) => r.c,
                    Err(Error::Unphysical(_)) => continue,
                    Err(e) => return Err(e),
                };
                phys += 1;
                if c <= tol_c {
                    zero += 1;
                }
                let idx = ((c * bins as f64) as usize).min(bins - 1);
                counts[idx] += 1;
            }
            Ok((counts, phys, zero))
        })
        .collect::<Result<_>>()?;

    let mut counts = vec![0u64; bins];
    let mut phys = 0;
    let mut zero = 0;
    for (c, p, z) in partial {
        counts.iter_mut().zip(&c).for_each(|(a, b)| *a += b);
        phys += p;
        zero += z;
    }
    let edges = (0..=bins).map(|k| k as f64 / bins as f64).collect();
    let (status, probabilities, zero_mass) = if phys == 0 {
        (HistogramStatus::Empty, vec![0.0; bins], 0.0)
    } else {
        let total = phys as f64;
        (
            HistogramStatus::Ok,
            counts.iter().map(|&c| c as f64 / total).collect(),
            zero as f64 / total,
        )
    };
    Ok(ConcurrenceHistogram {
        radius,
        status,
        edges,
        probabilities,
        zero_mass,
        physical: phys,
        draws: samples as u64,
        pure_shell,
    })
}
