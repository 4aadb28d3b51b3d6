//! YE: independent spontaneous emission (amplitude damping at rate Γ) of
//! both qubits, starting from
//! ρ(0) = ⅓ [[a₀,0,0,0],[0,1,1,0],[0,1,1,0],[0,0,0,1−a₀]].
//!
//! With κ = e^{−Γt} the single-qubit channel acts on (I, X, Y, Z) as
//! I ↦ I + (κ−1)Z, X ↦ √κ X, Y ↦ √κ Y, Z ↦ κZ, and the two-qubit affine map
//! is the tensor product of two copies.

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};
use serde::{Deserialize, Serialize};

use super::{Location, Model, ModelId, SubspaceMeta};
use crate::algebra::{Mat4, C64};
use crate::channels::{AffineMap, KrausMap, MapFamily};
use crate::error::{Error, Result};
use crate::state::{DensityMatrix, PolarizationVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YeParams {
    /// Emission rate Γ.
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    pub a0: f64,
}

impl Default for YeParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            a0: 0.2,
        }
    }
}

impl YeParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.a0) {
            return Err(Error::Domain(format!(
                "a0 must lie in [0, 1], got {}",
                self.a0
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Domain(format!(
                "emission rate must be positive, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

const IZ: usize = 2;
const XX: usize = 4;
const YY: usize = 9;
const ZI: usize = 11;
const ZZ: usize = 14;

/// Slots of the block coordinates (n_IZ, n_XX, n_YY, n_ZI, n_ZZ).
pub const BLOCK_SLOTS: [usize; 5] = [IZ, XX, YY, ZI, ZZ];

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("time must be non-negative, got {t}")))
    }
}

fn state_at(a0: f64, kappa: f64) -> PolarizationVector {
    let mut n = [0.0; 15];
    let side = -1.0 + 2.0 / 3.0 * (1.0 + a0) * kappa;
    n[IZ] = side;
    n[ZI] = side;
    n[XX] = 2.0 / 3.0 * kappa;
    n[YY] = 2.0 / 3.0 * kappa;
    n[ZZ] = 1.0 - 4.0 / 3.0 * (1.0 + a0) * kappa + 4.0 / 3.0 * a0 * kappa * kappa;
    PolarizationVector::new(n)
}

pub fn ye_f(a0: f64, kappa: f64) -> f64 {
    let u = 1.0 - kappa;
    1.0 - (a0 * (1.0 - a0 + 2.0 * u + u * u * a0)).sqrt()
}

fn concurrence_at(a0: f64, kappa: f64) -> f64 {
    2.0 / 3.0 * (kappa * ye_f(a0, kappa)).max(0.0)
}

pub fn ye_state(p: &YeParams, t: f64) -> Result<PolarizationVector> {
    p.validate()?;
    check_time(t)?;
    Ok(state_at(p.a0, (-p.gamma * t).exp()))
}

pub fn ye_concurrence(p: &YeParams, t: f64) -> Result<f64> {
    p.validate()?;
    check_time(t)?;
    Ok(concurrence_at(p.a0, (-p.gamma * t).exp()))
}

/// ρ(t) = ⅓[[a,0,0,0],[0,b,z,0],[0,z,c,0],[0,0,0,d]].
pub fn ye_density(p: &YeParams, t: f64) -> Result<DensityMatrix> {
    p.validate()?;
    check_time(t)?;
    let k = (-p.gamma * t).exp();
    let a0 = p.a0;
    let a = k * k * a0;
    let b = k + k * (1.0 - k) * a0;
    let d = 1.0 - a0 + 2.0 * (1.0 - k) + (1.0 - k) * (1.0 - k) * a0;
    let mut rho = Mat4::zeros();
    rho[(0, 0)] = C64::new(a / 3.0, 0.0);
    rho[(1, 1)] = C64::new(b / 3.0, 0.0);
    rho[(2, 2)] = C64::new(b / 3.0, 0.0);
    rho[(1, 2)] = C64::new(k / 3.0, 0.0);
    rho[(2, 1)] = C64::new(k / 3.0, 0.0);
    rho[(3, 3)] = C64::new(d / 3.0, 0.0);
    Ok(DensityMatrix(rho))
}

/// Extended single-qubit amplitude-damping matrix on (I, X, Y, Z).
pub fn damping_matrix(kappa: f64) -> Matrix4<f64> {
    let g = kappa.sqrt();
    Matrix4::new(
        1.0,
        0.0,
        0.0,
        0.0, //
        0.0,
        g,
        0.0,
        0.0, //
        0.0,
        0.0,
        g,
        0.0, //
        kappa - 1.0,
        0.0,
        0.0,
        kappa,
    )
}

pub fn ye_map(p: &YeParams, t: f64) -> Result<AffineMap> {
    p.validate()?;
    check_time(t)?;
    Ok(ye_map_unchecked(p.gamma, t))
}

fn ye_map_unchecked(gamma: f64, t: f64) -> AffineMap {
    let r = damping_matrix((-gamma * t).exp());
    AffineMap::from_extended(&r, &r, t)
}

/// The 5×5 block and shift in coordinates (n_IZ, n_XX, n_YY, n_ZI, n_ZZ).
pub fn ye_block(p: &YeParams, t: f64) -> Result<(SMatrix<f64, 5, 5>, SVector<f64, 5>)> {
    let map = ye_map(p, t)?;
    let tm = SMatrix::<f64, 5, 5>::from_fn(|r, c| map.transfer[(BLOCK_SLOTS[r], BLOCK_SLOTS[c])]);
    let m = SVector::<f64, 5>::from_fn(|r, _| map.shift[BLOCK_SLOTS[r]]);
    Ok((tm, m))
}

/// Kraus operators F_a ⊗ F_b with F₁ = [[γ,0],[0,1]], F₂ = [[0,0],[ω,0]],
/// γ = e^{−Γt/2}, ω = √(1 − e^{−Γt}).
pub fn ye_kraus(p: &YeParams, t: f64) -> Result<KrausMap> {
    p.validate()?;
    check_time(t)?;
    let g = (-p.gamma * t / 2.0).exp();
    let w = (1.0 - (-p.gamma * t).exp()).sqrt();
    let c = |x: f64| C64::new(x, 0.0);
    let f1 = Matrix2::new(c(g), c(0.0), c(0.0), c(1.0));
    let f2 = Matrix2::new(c(0.0), c(0.0), c(w), c(0.0));
    KrausMap::tensor(&[f1, f2], &[f1, f2])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TangentPrediction {
    CategoryA,
    CategoryE,
    Critical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentTest {
    pub dot: f64,
    pub predicted: TangentPrediction,
}

/// Limiting-tangent test: n_T(∞) = (1+a₀, 1, 4a₀−2), m̂ = (2, −2, 1)/3,
/// dot = (6a₀ − 2)/3. Negative → E, zero → critical, positive → A.
///
/// The sampled trajectories show the mirror image of this labelling: the
/// closed-form C(t) has f(∞) = 1 − √(3a₀), so a₀ < 1/3 keeps C > 0 (A) and
/// a₀ > 1/3 reaches C = 0 at finite time (E). Only the critical value 1/3
/// is shared. Use the trajectory classifier for categories.
pub fn ye_tangent_test(p: &YeParams) -> TangentTest {
    let a0 = p.a0;
    let nt = [1.0 + a0, 1.0, 4.0 * a0 - 2.0];
    let m = [2.0 / 3.0, -2.0 / 3.0, 1.0 / 3.0];
    let dot: f64 = nt.iter().zip(&m).map(|(a, b)| a * b).sum();
    let predicted = if dot.abs() < 1e-12 {
        TangentPrediction::Critical
    } else if dot < 0.0 {
        TangentPrediction::CategoryE
    } else {
        TangentPrediction::CategoryA
    };
    TangentTest { dot, predicted }
}

pub fn ye_n_infinity() -> PolarizationVector {
    state_at(0.0, 0.0)
}

#[derive(Clone, Debug)]
pub struct YeModel {
    p: YeParams,
}

impl YeModel {
    pub fn new(p: YeParams) -> Result<Self> {
        p.validate()?;
        Ok(Self { p })
    }

    pub fn params(&self) -> &YeParams {
        &self.p
    }
}

impl Model for YeModel {
    fn id(&self) -> ModelId {
        ModelId::Ye
    }

    fn state(&self, t: f64) -> PolarizationVector {
        state_at(self.p.a0, (-self.p.gamma * t).exp())
    }

    fn concurrence(&self, t: f64) -> f64 {
        concurrence_at(self.p.a0, (-self.p.gamma * t).exp())
    }

    fn n_infinity(&self) -> PolarizationVector {
        ye_n_infinity()
    }

    fn meta(&self) -> SubspaceMeta {
        SubspaceMeta {
            dim_d: 3,
            dim_d_cap_s: 3,
            n_infinity: Some(ye_n_infinity()),
            n_infinity_location: Location::BoundaryS,
        }
    }

    fn horizon(&self) -> f64 {
        50.0 / self.p.gamma
    }

    fn family(&self) -> Box<dyn MapFamily + '_> {
        Box::new(YeFamily {
            gamma: self.p.gamma,
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct YeFamily {
    pub gamma: f64,
}

impl MapFamily for YeFamily {
    fn map_at(&self, t: f64) -> AffineMap {
        ye_map_unchecked(self.gamma, t)
    }

    fn is_unital(&self) -> bool {
        false
    }

    fn claims_semigroup(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{concurrence, to_polarization};

    #[test]
    fn initial_and_limit() {
        let p = YeParams {
            gamma: 1.0,
            a0: 0.4,
        };
        let n0 = ye_state(&p, 0.0).unwrap();
        assert!((n0.get("IZ") - (2.0 * 0.4 - 1.0) / 3.0).abs() < 1e-15);
        assert!((n0.get("XX") - 2.0 / 3.0).abs() < 1e-15);
        assert!((n0.get("ZZ") + 1.0 / 3.0).abs() < 1e-15);
        let inf = ye_n_infinity();
        assert_eq!(
            (inf.get("IZ"), inf.get("XX"), inf.get("ZZ")),
            (-1.0, 0.0, 1.0)
        );
        assert!(ye_state(
            &YeParams {
                gamma: 1.0,
                a0: 1.5
            },
            0.0
        )
        .is_err());
    }

    #[test]
    fn block_matches_display() {
        let p = YeParams {
            gamma: 0.7,
            a0: 0.3,
        };
        let t = 1.3;
        let k = (-0.7f64 * t).exp();
        let (tm, m) = ye_block(&p, t).unwrap();
        let expect = SMatrix::<f64, 5, 5>::from_row_slice(&[
            k,
            0.0,
            0.0,
            0.0,
            0.0, //
            0.0,
            k,
            0.0,
            0.0,
            0.0, //
            0.0,
            0.0,
            k,
            0.0,
            0.0, //
            0.0,
            0.0,
            0.0,
            k,
            0.0, //
            k * k - k,
            0.0,
            0.0,
            k * k - k,
            k * k,
        ]);
        assert!((tm - expect).amax() < 1e-15);
        let em = SVector::<f64, 5>::from_column_slice(&[
            k - 1.0,
            0.0,
            0.0,
            k - 1.0,
            (k - 1.0) * (k - 1.0),
        ]);
        assert!((m - em).amax() < 1e-15);
        let id = ye_map(&p, 0.0).unwrap();
        assert_eq!(id.transfer, crate::channels::Mat15::identity());
        assert_eq!(id.shift, crate::state::Vec15::zeros());
    }

    #[test]
    fn kraus_reproduces_density_display() {
        for &(a0, t) in &[(0.0, 0.3), (0.2, 1.0), (0.7, 2.5), (1.0, 0.05)] {
            let p = YeParams { gamma: 1.0, a0 };
            let rho0 = ye_density(&p, 0.0).unwrap();
            let out = ye_kraus(&p, t).unwrap().apply(&rho0);
            assert!((out.0 - ye_density(&p, t).unwrap().0).norm() < 1e-14);
            let n = to_polarization(&out).unwrap();
            assert!(n.distance(&ye_state(&p, t).unwrap()) < 1e-14);
        }
        let id = ye_kraus(&YeParams::default(), 0.0).unwrap();
        let rho = ye_density(&YeParams::default(), 0.0).unwrap();
        assert!((id.apply(&rho).0 - rho.0).norm() < 1e-15);
    }

    #[test]
    fn concurrence_closed_form() {
        for a0 in [0.0, 0.1, 1.0 / 3.0, 0.5, 0.9, 1.0] {
            let p = YeParams { gamma: 1.0, a0 };
            for k in 0..40 {
                let t = k as f64 * 0.25;
                let c = ye_concurrence(&p, t).unwrap();
                let w = concurrence(&ye_state(&p, t).unwrap()).unwrap().c;
                assert!((c - w).abs() < 1e-9, "a0 {a0} t {t}: {c} vs {w}");
            }
        }
    }

    #[test]
    fn tangent_examples() {
        let t = ye_tangent_test(&YeParams {
            gamma: 1.0,
            a0: 1.0 / 3.0,
        });
        assert!(t.dot.abs() < 1e-15);
        assert_eq!(t.predicted, TangentPrediction::Critical);
        let t = ye_tangent_test(&YeParams {
            gamma: 1.0,
            a0: 0.0,
        });
        assert!((t.dot + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(t.predicted, TangentPrediction::CategoryE);
        let t = ye_tangent_test(&YeParams {
            gamma: 1.0,
            a0: 1.0,
        });
        assert!((t.dot - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(t.predicted, TangentPrediction::CategoryA);
    }

    #[test]
    fn late_concurrence_sign_follows_f_infinity() {
        // f(∞) = 1 − √(3a₀).
        assert!(ye_f(0.2, 0.0) > 0.0);
        assert!(ye_f(0.5, 0.0) < 0.0);
        assert!(ye_f(1.0 / 3.0, 0.0).abs() < 1e-15);
    }
}
