//! Sampled state trajectories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::SubspaceMeta;
use crate::state::PolarizationVector;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub n: PolarizationVector,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub n_infinity: Option<PolarizationVector>,
    pub model: Option<String>,
    pub meta: Option<SubspaceMeta>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn concurrences(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.c).collect()
    }

    pub fn t_max(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    /// At least `min_len` samples with strictly increasing times.
    pub fn validate(&self, min_len: usize) -> Result<()> {
        if self.samples.len() < min_len {
            return Err(Error::Validation(format!(
                "trajectory needs at least {min_len} samples, got {}",
                self.samples.len()
            )));
        }
        if let Some(k) = self.samples.windows(2).position(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Validation(format!(
                "trajectory times not strictly increasing at sample {}",
                k + 1
            )));
        }
        Ok(())
    }
}

/// `n` equally spaced times on [0, t_max].
pub fn uniform_times(t_max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "need at least two sample times");
    (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
}
