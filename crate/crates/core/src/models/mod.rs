//! Closed-form open-system models and their dynamical-subspace metadata.
//!
//! * D3: Heisenberg pair with random-telegraph dephasing on one qubit, living
//!   in span{|00⟩, |11⟩}.
//! * D8: triplet-subspace geometry (no dynamics).
//! * YE: independent spontaneous emission of both qubits.
//! * ZJ: separable dephasing plus relaxation starting from Werner states.

pub mod d3;
pub mod d8;
pub mod ye;
pub mod zj;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::MapFamily;
use crate::error::{Error, Result};
use crate::state::{positivity, PolarizationVector, DEFAULT_POSITIVITY_TOL};
use crate::trajectory::{uniform_times, Trajectory, TrajectorySample};

pub use d3::{D3Model, D3Params};
pub use ye::{YeModel, YeParams};
pub use zj::{Dephasing, WernerFamily, ZjModel, ZjParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    InteriorS,
    BoundaryS,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceMeta {
    pub dim_d: usize,
    pub dim_d_cap_s: usize,
    /// `None` when the limit depends on a configuration the metadata does not fix.
    pub n_infinity: Option<PolarizationVector>,
    pub n_infinity_location: Location,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelId {
    D3,
    D8,
    Ye,
    Zj,
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d3" => Ok(ModelId::D3),
            "d8" => Ok(ModelId::D8),
            "ye" => Ok(ModelId::Ye),
            "zj" => Ok(ModelId::Zj),
            _ => Err(Error::Domain(format!(
                "unknown model {s:?} (expected d3, d8, ye or zj)"
            ))),
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelId::D3 => "d3",
            ModelId::D8 => "d8",
            ModelId::Ye => "ye",
            ModelId::Zj => "zj",
        })
    }
}

/// Hard-coded metadata with each model's default configuration.
pub fn subspace_meta(model: ModelId) -> SubspaceMeta {
    match model {
        ModelId::D3 => D3Model::new(D3Params::default())
            .expect("valid defaults")
            .meta(),
        ModelId::D8 => SubspaceMeta {
            dim_d: 8,
            dim_d_cap_s: 7,
            n_infinity: None,
            n_infinity_location: Location::BoundaryS,
        },
        ModelId::Ye => YeModel::new(YeParams::default())
            .expect("valid defaults")
            .meta(),
        ModelId::Zj => ZjModel::new(ZjParams::default())
            .expect("valid defaults")
            .meta(),
    }
}

/// A model with a closed-form trajectory n(t) and concurrence C(t).
pub trait Model: Sync {
    fn id(&self) -> ModelId;
    fn state(&self, t: f64) -> PolarizationVector;
    fn concurrence(&self, t: f64) -> f64;
    fn n_infinity(&self) -> PolarizationVector;
    fn meta(&self) -> SubspaceMeta;
    /// Time by which the trajectory has settled near n_∞ (and, for
    /// oscillating models, covered a few periods).
    fn horizon(&self) -> f64;
    /// Samples used on [0, horizon] by default.
    fn default_samples(&self) -> usize {
        2001
    }
    fn family(&self) -> Box<dyn MapFamily + '_>;

    fn default_times(&self) -> Vec<f64> {
        uniform_times(self.horizon(), self.default_samples())
    }

    /// Sample the trajectory; every point must pass the positivity test.
    fn trajectory(&self, times: &[f64]) -> Result<Trajectory> {
        let mut samples = Vec::with_capacity(times.len());
        for &t in times {
            if !(t >= 0.0) {
                return Err(Error::Domain(format!(
                    "trajectory time must be non-negative, got {t}"
                )));
            }
            let n = self.state(t);
            let report = positivity(&n, DEFAULT_POSITIVITY_TOL);
            if !report.physical {
                return Err(Error::Consistency(format!(
                    "{} trajectory left the state space at t = {t} (min a_k = {:.3e})",
                    self.id(),
                    report.min_coefficient()
                )));
            }
            samples.push(TrajectorySample {
                t,
                n,
                c: self.concurrence(t),
            });
        }
        Ok(Trajectory {
            samples,
            n_infinity: Some(self.n_infinity()),
            model: Some(self.id().to_string()),
            meta: Some(self.meta()),
        })
    }
}

/// Parameters of any dynamical model, with by-name access for scans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    D3(D3Params),
    Ye(YeParams),
    Zj(ZjParams),
}

impl ModelSpec {
    pub fn default_for(id: ModelId) -> Result<Self> {
        match id {
            ModelId::D3 => Ok(ModelSpec::D3(D3Params::default())),
            ModelId::Ye => Ok(ModelSpec::Ye(YeParams::default())),
            ModelId::Zj => Ok(ModelSpec::Zj(ZjParams::default())),
            ModelId::D8 => Err(Error::Domain("model d8 has no dynamics".into())),
        }
    }

    pub fn id(&self) -> ModelId {
        match self {
            ModelSpec::D3(_) => ModelId::D3,
            ModelSpec::Ye(_) => ModelId::Ye,
            ModelSpec::Zj(_) => ModelId::Zj,
        }
    }

    pub fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            ModelSpec::D3(_) => &["g", "gamma", "B0", "x0", "y0", "z0"],
            ModelSpec::Ye(_) => &["Gamma", "a0"],
            ModelSpec::Zj(_) => &["r", "phi", "B0", "Gamma1", "g", "gamma", "Gamma2"],
        }
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        let missing = || Error::Domain(format!("model {} has no parameter {name:?}", self.id()));
        Ok(match (self, name) {
            (ModelSpec::D3(p), "g") => p.g,
            (ModelSpec::D3(p), "gamma") => p.gamma,
            (ModelSpec::D3(p), "B0") => p.b0,
            (ModelSpec::D3(p), "x0") => p.bloch[0],
            (ModelSpec::D3(p), "y0") => p.bloch[1],
            (ModelSpec::D3(p), "z0") => p.bloch[2],
            (ModelSpec::Ye(p), "Gamma") => p.gamma,
            (ModelSpec::Ye(p), "a0") => p.a0,
            (ModelSpec::Zj(p), "r") => p.r,
            (ModelSpec::Zj(p), "phi") => p.phi,
            (ModelSpec::Zj(p), "B0") => p.b0,
            (ModelSpec::Zj(p), "Gamma1") => p.gamma1,
            (ModelSpec::Zj(p), "g") => match p.dephasing {
                Dephasing::Rtn { g, .. } => g,
                _ => return Err(missing()),
            },
            (ModelSpec::Zj(p), "gamma") => match p.dephasing {
                Dephasing::Rtn { gamma, .. } => gamma,
                _ => return Err(missing()),
            },
            (ModelSpec::Zj(p), "Gamma2") => match p.dephasing {
                Dephasing::Exponential { gamma2 } => gamma2,
                _ => return Err(missing()),
            },
            _ => return Err(missing()),
        })
    }

    /// Copy with one parameter replaced. Setting `Gamma2` on a ZJ model
    /// switches it to exponential dephasing; `g`/`gamma` switch it to RTN.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut out = self.clone();
        let missing = || Error::Domain(format!("model {} has no parameter {name:?}", self.id()));
        match (&mut out, name) {
            (ModelSpec::D3(p), "g") => p.g = value,
            (ModelSpec::D3(p), "gamma") => p.gamma = value,
            (ModelSpec::D3(p), "B0") => p.b0 = value,
            (ModelSpec::D3(p), "x0") => p.bloch[0] = value,
            (ModelSpec::D3(p), "y0") => p.bloch[1] = value,
            (ModelSpec::D3(p), "z0") => p.bloch[2] = value,
            (ModelSpec::Ye(p), "Gamma") => p.gamma = value,
            (ModelSpec::Ye(p), "a0") => p.a0 = value,
            (ModelSpec::Zj(p), "r") => p.r = value,
            (ModelSpec::Zj(p), "phi") => p.phi = value,
            (ModelSpec::Zj(p), "B0") => p.b0 = value,
            (ModelSpec::Zj(p), "Gamma1") => p.gamma1 = value,
            (ModelSpec::Zj(p), "g") => {
                let gamma = match p.dephasing {
                    Dephasing::Rtn { gamma, .. } => gamma,
                    Dephasing::Exponential { .. } => ZjParams::default_rtn().1,
                };
                p.dephasing = Dephasing::Rtn { g: value, gamma };
            }
            (ModelSpec::Zj(p), "gamma") => {
                let g = match p.dephasing {
                    Dephasing::Rtn { g, .. } => g,
                    Dephasing::Exponential { .. } => ZjParams::default_rtn().0,
                };
                p.dephasing = Dephasing::Rtn { g, gamma: value };
            }
            (ModelSpec::Zj(p), "Gamma2") => p.dephasing = Dephasing::Exponential { gamma2: value },
            _ => return Err(missing()),
        }
        Ok(out)
    }

    pub fn build(&self) -> Result<Box<dyn Model>> {
        Ok(match self {
            ModelSpec::D3(p) => Box::new(D3Model::new(p.clone())?),
            ModelSpec::Ye(p) => Box::new(YeModel::new(p.clone())?),
            ModelSpec::Zj(p) => Box::new(ZjModel::new(p.clone())?),
        })
    }
}

/// Extended single-qubit transfer matrix on (I, X, Y, Z): precession by
/// `angle` about z with in-plane damping `zeta` and longitudinal factor `z`.
pub(crate) fn precession_matrix(angle: f64, zeta: f64, z: f64) -> nalgebra::Matrix4<f64> {
    let (s, c) = angle.sin_cos();
    nalgebra::Matrix4::new(
        1.0,
        0.0,
        0.0,
        0.0, //
        0.0,
        zeta * c,
        zeta * s,
        0.0, //
        0.0,
        -zeta * s,
        zeta * c,
        0.0, //
        0.0,
        0.0,
        0.0,
        z,
    )
}

/// Samples on [0, t_max] giving about `per_period` points per oscillation.
pub(crate) fn samples_for(t_max: f64, omega: f64, per_period: f64) -> usize {
    let mut n = 2001.0_f64;
    if omega > 0.0 {
        let period = std::f64::consts::TAU / omega;
        n = n.max((t_max / period * per_period).ceil() + 1.0);
    }
    n.min(200_001.0) as usize
}
