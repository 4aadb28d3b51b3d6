//! D3: two qubits in span{|00⟩, |11⟩} with a static field on qubit A and
//! random telegraph noise of strength g and switching rate γ on qubit B.
//!
//! Within the block the state is an effective Bloch vector (x, y, z) with
//! n_IZ = n_ZI = z, n_ZZ = 1, n_XX = −n_YY = x and n_XY = n_YX = y. The
//! in-plane part evolves as x + iy ↦ ζ_T(t) e^{−iB₀t}(x₀ + iy₀) and
//! C = √(x² + y²).

use serde::{Deserialize, Serialize};

use super::{precession_matrix, samples_for, Location, Model, ModelId, SubspaceMeta};
use crate::channels::{AffineMap, MapFamily};
use crate::error::{Error, Result};
use crate::state::PolarizationVector;
use crate::trajectory::Trajectory;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct D3Params {
    pub g: f64,
    pub gamma: f64,
    #[serde(rename = "B0")]
    pub b0: f64,
    /// Initial effective Bloch vector (x₀, y₀, z₀).
    pub bloch: [f64; 3],
}

impl Default for D3Params {
    /// Φ+ initial state, g = 0.5, γ = 1, B₀ = 1.
    fn default() -> Self {
        Self {
            g: 0.5,
            gamma: 1.0,
            b0: 1.0,
            bloch: [1.0, 0.0, 0.0],
        }
    }
}

impl D3Params {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.g, self.gamma, self.b0]
            .iter()
            .chain(&self.bloch)
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::Domain("D3 parameters must be finite".into()));
        }
        if self.gamma < 0.0 {
            return Err(Error::Domain(format!(
                "RTN switching rate must be non-negative, got {}",
                self.gamma
            )));
        }
        let r = self.bloch.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "initial Bloch vector has norm {r} > 1"
            )));
        }
        Ok(())
    }
}

/// RTN dephasing function: e^{−γt}[cos Ωt + (γ/Ω) sin Ωt], Ω = √(g² − γ²),
/// hyperbolic for g < γ and e^{−γt}(1 + γt) when |g − γ| < 1e-8·max(g, γ).
pub fn d3_zeta(t: f64, g: f64, gamma: f64) -> f64 {
    let g = g.abs();
    if gamma == 0.0 {
        return (g * t).cos();
    }
    if (g - gamma).abs() < 1e-8 * g.max(gamma) {
        return (-gamma * t).exp() * (1.0 + gamma * t);
    }
    if g > gamma {
        let om = ((g - gamma) * (g + gamma)).sqrt();
        (-gamma * t).exp() * ((om * t).cos() + gamma / om * (om * t).sin())
    } else {
        // cosh/sinh written as two decaying exponentials; γ − κ = g²/(γ + κ).
        let k = ((gamma - g) * (gamma + g)).sqrt();
        let slow = g * g / (gamma + k);
        0.5 * (1.0 + gamma / k) * (-slow * t).exp()
            + 0.5 * (1.0 - gamma / k) * (-(gamma + k) * t).exp()
    }
}

/// Envelope of |ζ_T|: amplitude · e^{−rate·t}, with oscillation frequency Ω.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RtnDecay {
    pub rate: f64,
    pub omega: f64,
    pub amplitude: f64,
}

pub(crate) fn rtn_decay(g: f64, gamma: f64) -> RtnDecay {
    let g = g.abs();
    if gamma == 0.0 {
        return RtnDecay {
            rate: 0.0,
            omega: g,
            amplitude: 1.0,
        };
    }
    if (g - gamma).abs() < 1e-8 * g.max(gamma) {
        // (1 + x)e^{−x} ≤ 2e^{−1/2}·e^{−x/2}.
        return RtnDecay {
            rate: gamma / 2.0,
            omega: 0.0,
            amplitude: 1.22,
        };
    }
    if g > gamma {
        let om = ((g - gamma) * (g + gamma)).sqrt();
        RtnDecay {
            rate: gamma,
            omega: om,
            amplitude: (1.0 + gamma * gamma / (om * om)).sqrt(),
        }
    } else {
        let k = ((gamma - g) * (gamma + g)).sqrt();
        RtnDecay {
            rate: g * g / (gamma + k),
            omega: 0.0,
            amplitude: 0.5 * (1.0 + gamma / k),
        }
    }
}

impl RtnDecay {
    /// Time for the envelope to fall to 1% (a few periods at least when
    /// oscillating); `None` if it never decays.
    pub fn settle_time(&self) -> Option<f64> {
        self.time_to(0.01)
    }

    pub fn time_to(&self, level: f64) -> Option<f64> {
        let osc = if self.omega > 0.0 {
            3.0 * std::f64::consts::TAU / self.omega
        } else {
            0.0
        };
        if self.rate == 0.0 {
            return None;
        }
        let mut t = ((self.amplitude / level).ln().max(0.0) / self.rate).max(osc);
        if self.omega > 0.0 {
            // e^{−γt} underflows past γt ≈ 745.
            t = t.min(600.0 / self.rate);
        }
        Some(t)
    }
}

/// Embed an effective Bloch vector of the {|00⟩, |11⟩} block.
pub fn embed_block(x: f64, y: f64, z: f64) -> PolarizationVector {
    let mut n = [0.0; 15];
    n[2] = z; // IZ
    n[11] = z; // ZI
    n[14] = 1.0; // ZZ
    n[4] = x; // XX
    n[9] = -x; // YY
    n[5] = y; // XY
    n[8] = y; // YX
    PolarizationVector::new(n)
}

#[derive(Clone, Debug)]
pub struct D3Model {
    p: D3Params,
}

impl D3Model {
    pub fn new(p: D3Params) -> Result<Self> {
        p.validate()?;
        Ok(Self { p })
    }

    pub fn params(&self) -> &D3Params {
        &self.p
    }

    pub fn effective_bloch(&self, t: f64) -> [f64; 3] {
        let z = d3_zeta(t, self.p.g, self.p.gamma);
        let (s, c) = (self.p.b0 * t).sin_cos();
        let [x0, y0, z0] = self.p.bloch;
        [z * (c * x0 + s * y0), z * (-s * x0 + c * y0), z0]
    }
}

impl Model for D3Model {
    fn id(&self) -> ModelId {
        ModelId::D3
    }

    fn state(&self, t: f64) -> PolarizationVector {
        let [x, y, z] = self.effective_bloch(t);
        embed_block(x, y, z)
    }

    fn concurrence(&self, t: f64) -> f64 {
        let [x, y, _] = self.effective_bloch(t);
        x.hypot(y)
    }

    fn n_infinity(&self) -> PolarizationVector {
        embed_block(0.0, 0.0, self.p.bloch[2])
    }

    fn meta(&self) -> SubspaceMeta {
        SubspaceMeta {
            dim_d: 3,
            dim_d_cap_s: 1,
            n_infinity: Some(self.n_infinity()),
            n_infinity_location: Location::BoundaryS,
        }
    }

    fn horizon(&self) -> f64 {
        let d = rtn_decay(self.p.g, self.p.gamma);
        match d.settle_time() {
            Some(t) => t.min(1e6),
            None if d.omega > 0.0 => 3.0 * std::f64::consts::TAU / d.omega,
            None => 10.0,
        }
    }

    fn default_samples(&self) -> usize {
        samples_for(
            self.horizon(),
            rtn_decay(self.p.g, self.p.gamma).omega,
            32.0,
        )
    }

    fn family(&self) -> Box<dyn MapFamily + '_> {
        Box::new(D3Family {
            g: self.p.g,
            gamma: self.p.gamma,
            b0: self.p.b0,
        })
    }
}

/// Unital family T(t) = R_A(B₀t) ⊗ diag(1, ζ_T, ζ_T, 1).
#[derive(Clone, Copy, Debug)]
pub struct D3Family {
    pub g: f64,
    pub gamma: f64,
    pub b0: f64,
}

impl MapFamily for D3Family {
    fn map_at(&self, t: f64) -> AffineMap {
        let z = d3_zeta(t, self.g, self.gamma);
        AffineMap::from_extended(
            &precession_matrix(self.b0 * t, 1.0, 1.0),
            &precession_matrix(0.0, z, 1.0),
            t,
        )
    }

    fn is_unital(&self) -> bool {
        true
    }

    fn claims_semigroup(&self) -> bool {
        false
    }
}

pub fn d3_trajectory(params: &D3Params, times: &[f64]) -> Result<Trajectory> {
    D3Model::new(params.clone())?.trajectory(times)
}
