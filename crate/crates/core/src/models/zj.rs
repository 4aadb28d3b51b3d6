//! ZJ: non-interacting qubits with separable dephasing and relaxation,
//! starting from a Werner state r|Bell⟩⟨Bell| + (1−r)I/4.
//!
//! T(t) = R^A ⊗ R^B with R^A a precession by B₀t and R^B a precession by B₀t
//! with in-plane factor ζ(t) and longitudinal factor e^{−Γ₁t}. For the Ψ
//! family this keeps n_XX = n_YY, n_XY = −n_YX (the D_Z section); the Φ family
//! is its image under a local X on qubit B.

use serde::{Deserialize, Serialize};

use super::d3::{d3_zeta, rtn_decay, RtnDecay};
use super::{precession_matrix, samples_for, Location, Model, ModelId, SubspaceMeta};
use crate::algebra::C64;
use crate::channels::{AffineMap, MapFamily};
use crate::error::{Error, Result};
use crate::state::{pure_state_from_vector, PolarizationVector};
use crate::trajectory::Trajectory;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Dephasing {
    /// Random telegraph noise ζ_T(t; g, γ).
    Rtn { g: f64, gamma: f64 },
    /// ζ = e^{−Γ₂t}.
    Exponential {
        #[serde(rename = "Gamma2")]
        gamma2: f64,
    },
}

impl Dephasing {
    pub fn zeta(&self, t: f64) -> f64 {
        match *self {
            Dephasing::Rtn { g, gamma } => d3_zeta(t, g, gamma),
            Dephasing::Exponential { gamma2 } => (-gamma2 * t).exp(),
        }
    }

    /// Envelope of |ζ| as (amplitude, rate, oscillation frequency).
    fn envelope(&self) -> RtnDecay {
        match *self {
            Dephasing::Rtn { g, gamma } => rtn_decay(g, gamma),
            Dephasing::Exponential { gamma2 } => RtnDecay {
                rate: gamma2,
                omega: 0.0,
                amplitude: 1.0,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Dephasing::Rtn { g, gamma } => g.is_finite() && gamma.is_finite() && gamma >= 0.0,
            Dephasing::Exponential { gamma2 } => gamma2.is_finite() && gamma2 >= 0.0,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "invalid dephasing parameters {self:?}"
            )));
        }
        // Without decay of ζ the coherences never settle and n_∞ is undefined.
        if self.envelope().rate <= 0.0 {
            return Err(Error::Domain(format!("dephasing {self:?} does not decay")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WernerFamily {
    /// Built on (|00⟩ + e^{iφ}|11⟩)/√2.
    Phi,
    /// Built on (|01⟩ + e^{iφ}|10⟩)/√2.
    Psi,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZjParams {
    pub r: f64,
    pub phi: f64,
    #[serde(rename = "B0")]
    pub b0: f64,
    #[serde(rename = "Gamma1")]
    pub gamma1: f64,
    pub dephasing: Dephasing,
    pub family: WernerFamily,
}

impl Default for ZjParams {
    /// Ψ-Werner, r = 0.5, RTN with g = 0.1, γ = 0.5, B₀ = 0.1, Γ₁ = 0.
    fn default() -> Self {
        let (g, gamma) = Self::default_rtn();
        Self {
            r: 0.5,
            phi: 0.0,
            b0: 0.1,
            gamma1: 0.0,
            dephasing: Dephasing::Rtn { g, gamma },
            family: WernerFamily::Psi,
        }
    }
}

impl ZjParams {
    pub(crate) fn default_rtn() -> (f64, f64) {
        (0.1, 0.5)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r <= 1.0) {
            return Err(Error::Domain(format!(
                "Werner weight r must lie in (0, 1], got {}",
                self.r
            )));
        }
        if !(self.gamma1 >= 0.0 && self.gamma1.is_finite()) {
            return Err(Error::Domain(format!(
                "relaxation rate must be non-negative, got {}",
                self.gamma1
            )));
        }
        if !(self.phi.is_finite() && self.b0.is_finite()) {
            return Err(Error::Domain("phase and field must be finite".into()));
        }
        self.dephasing.validate()
    }
}

/// Polarization vector of the Werner state r|Bell⟩⟨Bell| + (1−r)I/4.
pub fn werner_state(family: WernerFamily, r: f64, phi: f64) -> PolarizationVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = C64::new(0.0, 0.0);
    let psi = match family {
        WernerFamily::Phi => [C64::new(s, 0.0), zero, zero, C64::from_polar(s, phi)],
        WernerFamily::Psi => [zero, C64::new(s, 0.0), C64::from_polar(s, phi), zero],
    };
    pure_state_from_vector(&psi).scaled(r)
}

/// Concurrence on the D_Z section (n_XX = n_YY, n_XY = −n_YX):
/// max{0, R − (1 + n_ZZ)/2}, R = √(n_XX² + n_XY²).
pub fn dz_concurrence(n_xx: f64, n_xy: f64, n_zz: f64) -> f64 {
    (n_xx.hypot(n_xy) - (1.0 + n_zz) / 2.0).max(0.0)
}

/// Positivity on the D_Z section, tolerance 1e-10.
pub fn dz_positivity(n_xx: f64, n_xy: f64, n_zz: f64) -> bool {
    let tol = 1e-10;
    let r2 = n_xx * n_xx + n_xy * n_xy;
    let r = r2.sqrt();
    2.0 * r2 + n_zz * n_zz <= 3.0 + tol
        && n_zz <= 1.0 - 2.0 * r2 + tol
        && n_zz >= -1.0 - tol
        && 2.0 * r + n_zz <= 1.0 + tol
}

/// ξ(t) = (1 − r e^{−Γ₁t})/2.
pub fn zj_xi(p: &ZjParams, t: f64) -> f64 {
    (1.0 - p.r * (-p.gamma1 * t).exp()) / 2.0
}

pub fn zj_map(p: &ZjParams, t: f64) -> AffineMap {
    let z = p.dephasing.zeta(t);
    let ra = precession_matrix(p.b0 * t, 1.0, 1.0);
    let rb = precession_matrix(p.b0 * t, z, (-p.gamma1 * t).exp());
    AffineMap::from_extended(&ra, &rb, t)
}

#[derive(Clone, Debug)]
pub struct ZjModel {
    p: ZjParams,
    n0: PolarizationVector,
}

impl ZjModel {
    pub fn new(p: ZjParams) -> Result<Self> {
        p.validate()?;
        let n0 = werner_state(p.family, p.r, p.phi);
        let m = Self { p, n0 };
        m.check_trajectory()?;
        Ok(m)
    }

    /// The smallest eigenvalue on the trajectory is (1 + r e^{−Γ₁t} − 2r|ζ|)/4.
    /// Relaxation without enough dephasing drives it negative at short times
    /// (e.g. RTN with r = 1 and any Γ₁ > 0), so such parameters are rejected.
    fn check_trajectory(&self) -> Result<()> {
        let h = self.horizon();
        let n = 2000;
        let uniform = (0..=n).map(|k| h * k as f64 / n as f64);
        let early = (0..=n).map(|k| h * 10f64.powf(-8.0 + 8.0 * k as f64 / n as f64));
        let margin = |t: f64| {
            1.0 + self.p.r * (-self.p.gamma1 * t).exp()
                - 2.0 * self.p.r * self.p.dephasing.zeta(t).abs()
        };
        let (t_worst, worst) = uniform
            .chain(early)
            .map(|t| (t, margin(t)))
            .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        if worst < -1e-10 {
            return Err(Error::Domain(format!(
                "relaxation outpaces dephasing: the state leaves the state space near t = {t_worst:.4e} \
                 (eigenvalue {:.3e}); use r <= 1/2 or faster dephasing",
                worst / 4.0
            )));
        }
        Ok(())
    }

    pub fn params(&self) -> &ZjParams {
        &self.p
    }

    /// (n_XX, n_XY, n_ZZ) in the D_Z frame of the model's family.
    pub fn dz_coordinates(&self, n: &PolarizationVector) -> (f64, f64, f64) {
        let (xx, xy, zz) = (n.n[4], n.n[5], n.n[14]);
        match self.p.family {
            WernerFamily::Psi => (xx, xy, zz),
            WernerFamily::Phi => (xx, -xy, -zz),
        }
    }
}

impl Model for ZjModel {
    fn id(&self) -> ModelId {
        ModelId::Zj
    }

    fn state(&self, t: f64) -> PolarizationVector {
        zj_map(&self.p, t).apply(&self.n0)
    }

    fn concurrence(&self, t: f64) -> f64 {
        let (xx, xy, zz) = self.dz_coordinates(&self.state(t));
        dz_concurrence(xx, xy, zz)
    }

    fn n_infinity(&self) -> PolarizationVector {
        let mut n = PolarizationVector::zeros();
        if self.p.gamma1 == 0.0 {
            n.n[14] = self.n0.n[14];
        }
        n
    }

    fn meta(&self) -> SubspaceMeta {
        let boundary = self.p.gamma1 == 0.0 && (self.p.r - 1.0).abs() < 1e-12;
        SubspaceMeta {
            dim_d: 3,
            dim_d_cap_s: 3,
            n_infinity: Some(self.n_infinity()),
            n_infinity_location: if boundary {
                Location::BoundaryS
            } else {
                Location::InteriorS
            },
        }
    }

    fn horizon(&self) -> f64 {
        // Run until r|ζ| is well below the asymptotic ξ, so a trailing zero
        // interval (if any) is long enough to be resolved.
        let env = self.p.dephasing.envelope();
        let xi_inf = if self.p.gamma1 > 0.0 {
            0.5
        } else {
            (1.0 - self.p.r) / 2.0
        };
        let level = if xi_inf > 0.0 {
            (0.1 * xi_inf / self.p.r).min(0.01)
        } else {
            0.01
        };
        let mut t = env.time_to(level).unwrap_or(10.0);
        if self.p.gamma1 > 0.0 {
            t = t.max(100f64.ln() / self.p.gamma1);
        }
        t.min(1e5)
    }

    fn default_samples(&self) -> usize {
        let omega = self.p.dephasing.envelope().omega;
        samples_for(self.horizon(), omega.max(2.0 * self.p.b0.abs()), 32.0)
    }

    fn family(&self) -> Box<dyn MapFamily + '_> {
        Box::new(ZjFamily { p: &self.p })
    }
}

pub struct ZjFamily<'a> {
    p: &'a ZjParams,
}

impl MapFamily for ZjFamily<'_> {
    fn map_at(&self, t: f64) -> AffineMap {
        zj_map(self.p, t)
    }

    fn is_unital(&self) -> bool {
        true
    }

    fn claims_semigroup(&self) -> bool {
        matches!(self.p.dephasing, Dephasing::Exponential { .. })
    }
}

pub fn zj_trajectory(params: &ZjParams, times: &[f64]) -> Result<Trajectory> {
    let model = ZjModel::new(params.clone())?;
    for &t in times {
        let (xx, xy, zz) = model.dz_coordinates(&model.state(t));
        if !dz_positivity(xx, xy, zz) {
            return Err(Error::Consistency(format!(
                "ZJ trajectory violates D_Z positivity at t = {t}"
            )));
        }
    }
    model.trajectory(times)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::concurrence;

    fn params(family: WernerFamily) -> ZjParams {
        ZjParams {
            r: 0.8,
            phi: 0.0,
            b0: 0.3,
            gamma1: 0.05,
            dephasing: Dephasing::Rtn { g: 0.4, gamma: 0.1 },
            family,
        }
    }

    #[test]
    fn phi_trajectory_display() {
        let p = params(WernerFamily::Phi);
        let m = ZjModel::new(p.clone()).unwrap();
        for &t in &[0.0, 0.7, 3.0, 11.0] {
            let n = m.state(t);
            let z = p.dephasing.zeta(t);
            assert!((n.get("XX") - p.r * (2.0 * p.b0 * t).cos() * z).abs() < 1e-14);
            assert!((n.get("XY") + p.r * (2.0 * p.b0 * t).sin() * z).abs() < 1e-14);
            assert!((n.get("ZZ") - p.r * (-p.gamma1 * t).exp()).abs() < 1e-14);
            assert!((n.get("YY") + n.get("XX")).abs() < 1e-14);
            assert!((n.get("YX") - n.get("XY")).abs() < 1e-14);
        }
    }

    #[test]
    fn psi_trajectory_display() {
        let p = params(WernerFamily::Psi);
        let m = ZjModel::new(p.clone()).unwrap();
        for &t in &[0.0, 0.7, 3.0, 11.0] {
            let n = m.state(t);
            let z = p.dephasing.zeta(t);
            assert!((n.get("XX") - p.r * z).abs() < 1e-14);
            assert!((n.get("YY") - p.r * z).abs() < 1e-14);
            assert!(n.get("XY").abs() < 1e-14);
            assert!((n.get("ZZ") + p.r * (-p.gamma1 * t).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn both_families_match_wootters() {
        for family in [WernerFamily::Phi, WernerFamily::Psi] {
            let mut p = params(family);
            p.phi = 0.9;
            let m = ZjModel::new(p.clone()).unwrap();
            for k in 0..60 {
                let t = k as f64 * 0.5;
                let w = concurrence(&m.state(t)).unwrap().c;
                assert!((m.concurrence(t) - w).abs() < 1e-9, "{family:?} t {t}");
                let expect = (p.r * p.dephasing.zeta(t).abs() - zj_xi(&p, t)).max(0.0);
                assert!((m.concurrence(t) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn werner_half_concurrence() {
        let m = ZjModel::new(ZjParams::default()).unwrap();
        assert!((m.concurrence(0.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn limits_and_meta() {
        let m = ZjModel::new(ZjParams {
            gamma1: 0.2,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(m.n_infinity(), PolarizationVector::zeros());
        assert_eq!(m.meta().n_infinity_location, Location::InteriorS);
        let m = ZjModel::new(ZjParams {
            r: 1.0,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(m.n_infinity().get("ZZ"), -1.0);
        assert_eq!(m.meta().n_infinity_location, Location::BoundaryS);
        let m = ZjModel::new(ZjParams {
            family: WernerFamily::Phi,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(m.n_infinity().get("ZZ"), 0.5);
        assert!(ZjModel::new(ZjParams {
            r: 0.0,
            ..Default::default()
        })
        .is_err());
        assert!(ZjModel::new(ZjParams {
            gamma1: -1.0,
            ..Default::default()
        })
        .is_err());
    }

    #[test]
    fn dz_positivity_matches_full_test() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5000 {
            let (xx, xy, zz) = (
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.2..1.2),
            );
            let n = PolarizationVector::from_labels(&[
                ("XX", xx),
                ("YY", xx),
                ("XY", xy),
                ("YX", -xy),
                ("ZZ", zz),
            ])
            .unwrap();
            let full = crate::state::positivity(&n, 1e-10).physical;
            assert_eq!(dz_positivity(xx, xy, zz), full, "({xx}, {xy}, {zz})");
            if full {
                assert!((dz_concurrence(xx, xy, zz) - concurrence(&n).unwrap().c).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn pure_dephasing_on_bottom_plane_has_no_cutoff() {
        let p = ZjParams {
            r: 1.0,
            ..Default::default()
        };
        assert_eq!(zj_xi(&p, 5.0), 0.0);
        let m = ZjModel::new(p.clone()).unwrap();
        for k in 0..100 {
            let t = k as f64;
            assert!((m.concurrence(t) - p.dephasing.zeta(t).abs()).abs() < 1e-14);
        }
    }
}
