//! Channels in polarization coordinates: affine maps n ↦ T n + m, Kraus maps,
//! composition, semigroup residuals and distance-Markovianity.

use nalgebra::{Matrix4, SMatrix};
use serde::{Deserialize, Serialize};

use crate::algebra::{generators, GeneratorIndex, Mat4, C64};
use crate::error::{Error, Result};
use crate::state::{DensityMatrix, PolarizationVector, Vec15};
use crate::trajectory::Trajectory;

pub type Mat15 = SMatrix<f64, 15, 15>;

pub const DISTANCE_MARKOV_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub t: f64,
    pub transfer: Mat15,
    pub shift: Vec15,
}

impl AffineMap {
    pub fn identity(t: f64) -> Self {
        Self {
            t,
            transfer: Mat15::identity(),
            shift: Vec15::zeros(),
        }
    }

    pub fn apply(&self, n: &PolarizationVector) -> PolarizationVector {
        PolarizationVector::from_svector(&(self.transfer * n.to_svector() + self.shift))
    }

    /// `later ∘ earlier`: T = T₂T₁, m = T₂m₁ + m₂. The time stamp is the sum.
    pub fn compose(later: &AffineMap, earlier: &AffineMap) -> AffineMap {
        AffineMap {
            t: later.t + earlier.t,
            transfer: later.transfer * earlier.transfer,
            shift: later.transfer * earlier.shift + later.shift,
        }
    }

    /// Two-qubit map from single-qubit extended transfer matrices acting on
    /// (I, X, Y, Z) coefficients: T_(αβ),(α'β') = R^A_αα' R^B_ββ', and the
    /// shift is the image of the (I, I) column.
    pub fn from_extended(ra: &Matrix4<f64>, rb: &Matrix4<f64>, t: f64) -> Self {
        let mut transfer = Mat15::zeros();
        let mut shift = Vec15::zeros();
        for gi in GeneratorIndex::all() {
            let (a, b) = gi.paulis();
            shift[gi.slot()] = ra[(a, 0)] * rb[(b, 0)];
            for gj in GeneratorIndex::all() {
                let (a2, b2) = gj.paulis();
                transfer[(gi.slot(), gj.slot())] = ra[(a, a2)] * rb[(b, b2)];
            }
        }
        Self { t, transfer, shift }
    }

    /// T_ij = ¼ Tr(μ_i Λ(μ_j)), m_i = ¼ Tr(μ_i Λ(I)).
    pub fn from_kraus(kraus: &KrausMap, t: f64) -> Self {
        let g = generators();
        let project =
            |out: &Mat4| -> Vec15 { Vec15::from_fn(|i, _| 0.25 * (g[i] * out).trace().re) };
        let shift = project(&kraus.apply_raw(&Mat4::identity()));
        let mut transfer = Mat15::zeros();
        for j in 0..15 {
            transfer.set_column(j, &project(&kraus.apply_raw(&g[j])));
        }
        Self { t, transfer, shift }
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.shift.amax() <= tol
    }

    pub fn max_singular_value(&self) -> f64 {
        self.transfer.singular_values().max()
    }

    pub fn to_json(&self) -> String {
        let file = MapFile {
            t: self.t,
            transfer: (0..15)
                .map(|r| self.transfer.row(r).iter().copied().collect())
                .collect(),
            shift: self.shift.iter().copied().collect(),
        };
        serde_json::to_string(&file).expect("serializing floats")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MapFile = serde_json::from_str(text)?;
        if file.transfer.len() != 15
            || file.transfer.iter().any(|r| r.len() != 15)
            || file.shift.len() != 15
        {
            return Err(Error::Validation(
                "map file needs a 15x15 T and a 15-vector m".into(),
            ));
        }
        Ok(Self {
            t: file.t,
            transfer: Mat15::from_fn(|r, c| file.transfer[r][c]),
            shift: Vec15::from_column_slice(&file.shift),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    t: f64,
    #[serde(rename = "T")]
    transfer: Vec<Vec<f64>>,
    #[serde(rename = "m")]
    shift: Vec<f64>,
}

pub fn affine_apply(map: &AffineMap, n: &PolarizationVector) -> PolarizationVector {
    map.apply(n)
}

pub fn affine_compose(later: &AffineMap, earlier: &AffineMap) -> AffineMap {
    AffineMap::compose(later, earlier)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KrausMap {
    ops: Vec<Mat4>,
}

impl KrausMap {
    pub const COMPLETENESS_TOL: f64 = 1e-10;

    /// Rejects operator sets with ‖Σ E†E − I‖_max above 1e-10.
    pub fn new(ops: Vec<Mat4>) -> Result<Self> {
        let map = Self { ops };
        let res = map.completeness_residual();
        if res > Self::COMPLETENESS_TOL {
            return Err(Error::Validation(format!(
                "Kraus operators are not complete: residual {res:.3e}"
            )));
        }
        Ok(map)
    }

    pub fn ops(&self) -> &[Mat4] {
        &self.ops
    }

    pub fn completeness_residual(&self) -> f64 {
        let sum: Mat4 = self.ops.iter().map(|e| e.adjoint() * e).sum();
        (sum - Mat4::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Kraus set of the product channel Λ_A ⊗ Λ_B.
    pub fn tensor(a: &[nalgebra::Matrix2<C64>], b: &[nalgebra::Matrix2<C64>]) -> Result<Self> {
        let mut ops = Vec::with_capacity(a.len() * b.len());
        for ea in a {
            for eb in b {
                ops.push(crate::algebra::kron2(ea, eb));
            }
        }
        Self::new(ops)
    }

    fn apply_raw(&self, rho: &Mat4) -> Mat4 {
        self.ops.iter().map(|e| e * rho * e.adjoint()).sum()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(self.apply_raw(&rho.0))
    }
}

pub fn kraus_apply(map: &KrausMap, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let res = map.completeness_residual();
    if res > KrausMap::COMPLETENESS_TOL {
        return Err(Error::Validation(format!(
            "Kraus operators are not complete: residual {res:.3e}"
        )));
    }
    Ok(map.apply(rho))
}

/// A time-indexed family of affine maps.
pub trait MapFamily: Sync {
    fn map_at(&self, t: f64) -> AffineMap;
    fn is_unital(&self) -> bool;
    fn claims_semigroup(&self) -> bool;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SemigroupResidual {
    pub transfer: f64,
    pub shift: f64,
}

pub fn semigroup_residual(family: &dyn MapFamily, t1: f64, t2: f64) -> Result<SemigroupResidual> {
    if !(t1 >= 0.0 && t2 >= 0.0) {
        return Err(Error::Domain(format!(
            "semigroup times must be non-negative, got ({t1}, {t2})"
        )));
    }
    let a = family.map_at(t1);
    let b = family.map_at(t2);
    let ab = family.map_at(t1 + t2);
    let composed = AffineMap::compose(&b, &a);
    Ok(SemigroupResidual {
        transfer: (ab.transfer - composed.transfer).amax(),
        shift: (ab.shift - composed.shift).amax(),
    })
}

/// `n` log-spaced points on [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Default grid: 16 log-spaced times on [1e-3, 10].
pub fn default_semigroup_grid() -> Vec<f64> {
    log_grid(1e-3, 10.0, 16)
}

/// Largest residuals over all pairs of the grid.
pub fn semigroup_grid_residual(family: &dyn MapFamily, grid: &[f64]) -> Result<SemigroupResidual> {
    let mut worst = SemigroupResidual::default();
    for &t1 in grid {
        for &t2 in grid {
            let r = semigroup_residual(family, t1, t2)?;
            worst.transfer = worst.transfer.max(r.transfer);
            worst.shift = worst.shift.max(r.shift);
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceMarkovian {
    pub is_distance_markovian: bool,
    pub max_violation: f64,
}

pub fn distance_markovian(traj: &Trajectory) -> Result<DistanceMarkovian> {
    distance_markovian_with_slack(traj, DISTANCE_MARKOV_SLACK)
}

/// d_k = |n(t_k) − n_∞| must be non-increasing up to `slack`.
pub fn distance_markovian_with_slack(traj: &Trajectory, slack: f64) -> Result<DistanceMarkovian> {
    let n_inf = traj
        .n_infinity
        .ok_or_else(|| Error::Domain("distance-Markovianity needs the limiting state".into()))?;
    let d: Vec<f64> = traj.samples.iter().map(|s| s.n.distance(&n_inf)).collect();
    let max_violation = d
        .windows(2)
        .map(|w| (w[1] - w[0]).max(0.0))
        .fold(0.0, f64::max);
    Ok(DistanceMarkovian {
        is_distance_markovian: max_violation <= slack,
        max_violation,
    })
}
