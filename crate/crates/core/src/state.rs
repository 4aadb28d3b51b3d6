//! Polarization vectors, density matrices, positivity and concurrence.
//!
//! A state is ρ = I/4 + ¼ Σ n_i μ_i. Positivity is decided from the
//! characteristic-polynomial coefficients a2, a3, a4 computed from Tr ρ²,
//! Tr ρ³ and Tr ρ⁴. Concurrence follows Wootters with the spin-flipped
//! ρ̃ = (σy⊗σy) ρ* (σy⊗σy).

use std::ops::{Index, IndexMut};
use std::sync::LazyLock;

use nalgebra::{SVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{generators, spin_flip, GeneratorIndex, Mat4, C64};
use crate::error::{Error, Result};

pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-10;
pub const DEFAULT_CONCURRENCE_TOL: f64 = 1e-9;

/// Radius of the largest ball about the origin known to contain only separable states.
pub const SEPARABLE_BALL_RADIUS: f64 = 0.577_350_269_189_625_8;

pub type Vec15 = SVector<f64, 15>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarizationVector {
    pub n: [f64; 15],
}

impl Default for PolarizationVector {
    fn default() -> Self {
        Self::zeros()
    }
}

impl PolarizationVector {
    pub fn zeros() -> Self {
        Self { n: [0.0; 15] }
    }

    pub fn new(n: [f64; 15]) -> Self {
        Self { n }
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        let n: [f64; 15] = v.try_into().map_err(|_| {
            Error::Validation(format!(
                "polarization vector needs 15 components, got {}",
                v.len()
            ))
        })?;
        Ok(Self { n })
    }

    /// Build from `(label, value)` pairs; unspecified components are zero.
    pub fn from_labels(pairs: &[(&str, f64)]) -> Result<Self> {
        let mut out = Self::zeros();
        for &(label, v) in pairs {
            out[GeneratorIndex::from_label(label)?] = v;
        }
        Ok(out)
    }

    pub fn get(&self, label: &str) -> f64 {
        self[GeneratorIndex::from_label(label).expect("valid generator label")]
    }

    pub fn norm_sq(&self) -> f64 {
        self.n.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.n
            .iter()
            .zip(&other.n)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n.map(|x| x * s),
        }
    }

    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        let mut n = self.n;
        for (a, b) in n.iter_mut().zip(&other.n) {
            *a += s * b;
        }
        Self { n }
    }

    pub fn to_svector(&self) -> Vec15 {
        Vec15::from_column_slice(&self.n)
    }

    pub fn from_svector(v: &Vec15) -> Self {
        let mut n = [0.0; 15];
        n.copy_from_slice(v.as_slice());
        Self { n }
    }
}

impl Index<GeneratorIndex> for PolarizationVector {
    type Output = f64;
    fn index(&self, i: GeneratorIndex) -> &f64 {
        &self.n[i.slot()]
    }
}

impl IndexMut<GeneratorIndex> for PolarizationVector {
    fn index_mut(&mut self, i: GeneratorIndex) -> &mut f64 {
        &mut self.n[i.slot()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(pub Mat4);

impl DensityMatrix {
    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// Max-norm distance from Hermiticity and from unit trace.
    pub fn defects(&self) -> (f64, f64) {
        let herm = (self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let tr = (self.0.trace() - C64::new(1.0, 0.0)).norm();
        (herm, tr)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let (herm, tr) = self.defects();
        if herm > tol {
            return Err(Error::Validation(format!(
                "density matrix not Hermitian (defect {herm:.3e})"
            )));
        }
        if tr > tol {
            return Err(Error::Validation(format!(
                "density matrix trace off by {tr:.3e}"
            )));
        }
        Ok(())
    }

    /// Projector onto a (not necessarily normalized) state vector.
    pub fn from_pure(psi: &[C64; 4]) -> Self {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        Self(Mat4::from_fn(|r, c| psi[r] * psi[c].conj() / norm))
    }
}

// Each generator has one nonzero entry per row: (row, col, value).
static SPARSE_GENERATORS: LazyLock<[[(usize, usize, C64); 4]; 15]> = LazyLock::new(|| {
    let g = generators();
    std::array::from_fn(|s| {
        std::array::from_fn(|r| {
            let c = (0..4)
                .find(|&c| g[s][(r, c)].norm() > 0.5)
                .expect("Pauli row has one entry");
            (r, c, g[s][(r, c)])
        })
    })
});

pub fn to_density(n: &PolarizationVector) -> DensityMatrix {
    let mut rho = Mat4::from_diagonal_element(C64::new(0.25, 0.0));
    for (s, entries) in SPARSE_GENERATORS.iter().enumerate() {
        let w = 0.25 * n.n[s];
        if w == 0.0 {
            continue;
        }
        for &(r, c, v) in entries {
            rho[(r, c)] += v * w;
        }
    }
    DensityMatrix(rho)
}

/// n_i = Tr(ρ μ_i). Requires Hermitian, unit-trace input within 1e-10.
pub fn to_polarization(rho: &DensityMatrix) -> Result<PolarizationVector> {
    rho.validate(1e-10)?;
    Ok(polarization_unchecked(&rho.0))
}

pub(crate) fn polarization_unchecked(rho: &Mat4) -> PolarizationVector {
    let mut n = [0.0; 15];
    for (s, entries) in SPARSE_GENERATORS.iter().enumerate() {
        // Tr(ρ μ) = Σ_r ρ[c, r] μ[r, c]
        let t: C64 = entries.iter().map(|&(r, c, v)| rho[(c, r)] * v).sum();
        n[s] = t.re;
    }
    PolarizationVector { n }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub tr_rho2: f64,
    pub tr_rho3: f64,
    pub tr_rho4: f64,
    pub physical: bool,
    pub tolerance: f64,
}

impl PositivityReport {
    pub fn min_coefficient(&self) -> f64 {
        self.a2.min(self.a3).min(self.a4)
    }
}

/// (a2, a3, a4) of a unit-trace matrix from its power traces.
pub fn coefficients_from_traces(t2: f64, t3: f64, t4: f64) -> (f64, f64, f64) {
    let a2 = (1.0 - t2) / 2.0;
    let a3 = (1.0 - 3.0 * t2 + 2.0 * t3) / 6.0;
    let a4 = (1.0 - 6.0 * t2 + 8.0 * t3 + 3.0 * t2 * t2 - 6.0 * t4) / 24.0;
    (a2, a3, a4)
}

/// Tr ρ², Tr ρ³, Tr ρ⁴ of a Hermitian matrix.
pub fn power_traces(rho: &Mat4) -> (f64, f64, f64) {
    let rho2 = rho * rho;
    let mut t2 = 0.0;
    let mut t3 = 0.0;
    let mut t4 = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            t2 += rho[(r, c)].norm_sqr();
            t3 += (rho2[(r, c)] * rho[(c, r)]).re;
            t4 += rho2[(r, c)].norm_sqr();
        }
    }
    (t2, t3, t4)
}

pub fn positivity_of_matrix(rho: &Mat4, tol: f64) -> PositivityReport {
    let (t2, t3, t4) = power_traces(rho);
    let (a2, a3, a4) = coefficients_from_traces(t2, t3, t4);
    PositivityReport {
        a1: 1.0,
        a2,
        a3,
        a4,
        tr_rho2: t2,
        tr_rho3: t3,
        tr_rho4: t4,
        physical: a2.min(a3).min(a4) >= -tol,
        tolerance: tol,
    }
}

pub fn positivity(n: &PolarizationVector, tol: f64) -> PositivityReport {
    positivity_of_matrix(&to_density(n).0, tol)
}

pub fn is_physical(n: &PolarizationVector, tol: f64) -> bool {
    positivity(n, tol).physical
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceResult {
    pub c: f64,
    pub q: f64,
    pub lambdas: [f64; 4],
}

/// Wootters concurrence with the default positivity tolerance.
pub fn concurrence(n: &PolarizationVector) -> Result<ConcurrenceResult> {
    concurrence_with_tol(n, DEFAULT_POSITIVITY_TOL)
}

pub fn concurrence_with_tol(n: &PolarizationVector, tol: f64) -> Result<ConcurrenceResult> {
    let rho = to_density(n);
    let report = positivity_of_matrix(&rho.0, tol);
    if !report.physical {
        return Err(Error::Unphysical(Box::new(report)));
    }
    wootters(&rho.0, tol)
}

pub fn concurrence_of(rho: &DensityMatrix, tol: f64) -> Result<ConcurrenceResult> {
    rho.validate(1e-10)?;
    let report = positivity_of_matrix(&rho.0, tol);
    if !report.physical {
        return Err(Error::Unphysical(Box::new(report)));
    }
    wootters(&rho.0, tol)
}

/// λ are the singular values of τ = Aᵀ Y A with ρ = A A†, A = V √diag(e).
/// τ†τ = A† Y A* Aᵀ Y A shares its nonzero spectrum with ρ ρ̃, so this gives
/// the same λ as the square roots of eig(ρ ρ̃) without squaring small values.
fn wootters(rho: &Mat4, clamp_tol: f64) -> Result<ConcurrenceResult> {
    let eig = SymmetricEigen::new(*rho);
    let mut a = eig.eigenvectors;
    // Eigenvalues within the solver's backward error of zero are zero;
    // keeping them would feed √(roundoff) ≈ 1e-8 into λ.
    let floor = 8.0 * f64::EPSILON * rho.norm();
    for k in 0..4 {
        let mut e = eig.eigenvalues[k];
        if e < -clamp_tol {
            return Err(Error::Unphysical(Box::new(positivity_of_matrix(
                rho, clamp_tol,
            ))));
        }
        if e < floor {
            e = 0.0;
        }
        let s = e.sqrt();
        for r in 0..4 {
            a[(r, k)] *= s;
        }
    }
    let tau = a.transpose() * spin_flip() * a;
    let sv = tau.singular_values();
    let mut lambdas = [sv[0], sv[1], sv[2], sv[3]];
    lambdas.sort_by(|x, y| y.total_cmp(x));
    let q = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(ConcurrenceResult {
        c: q.max(0.0),
        q,
        lambdas,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Separability {
    Separable,
    Entangled,
}

pub fn separability_class(n: &PolarizationVector, tol_c: f64) -> Result<Separability> {
    let c = concurrence(n)?.c;
    Ok(if c <= tol_c {
        Separability::Separable
    } else {
        Separability::Entangled
    })
}

/// Outcome of the combined positivity/separability screen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateClass {
    Unphysical,
    Separable,
    Entangled,
}

/// Partial transpose on the second qubit.
pub fn partial_transpose(rho: &Mat4) -> Mat4 {
    Mat4::from_fn(|r, c| {
        let (a, b) = (r / 2, r % 2);
        let (a2, b2) = (c / 2, c % 2);
        rho[(2 * a + b2, 2 * a2 + b)]
    })
}

/// Classify a vector as unphysical, separable (C ≤ tol_c) or entangled.
///
/// Physical states whose partial transpose has all a_k > tol_c are PPT and
/// hence separable; a4 < −tol_c for the partial transpose means a negative
/// eigenvalue of magnitude above tol_c, so C ≥ 2·tol_c. Everything in between
/// goes through the Wootters computation. The decision is the same as
/// thresholding the Wootters value at tol_c.
pub fn classify_state(n: &PolarizationVector, pos_tol: f64, tol_c: f64) -> Result<StateClass> {
    let rho = to_density(n).0;
    let report = positivity_of_matrix(&rho, pos_tol);
    if !report.physical {
        return Ok(StateClass::Unphysical);
    }
    let pt = partial_transpose(&rho);
    let (t2, t3, t4) = power_traces(&pt);
    let (b2, b3, b4) = coefficients_from_traces(t2, t3, t4);
    if b2.min(b3).min(b4) > tol_c {
        return Ok(StateClass::Separable);
    }
    if b4 < -tol_c {
        return Ok(StateClass::Entangled);
    }
    let c = wootters(&rho, pos_tol)?.c;
    Ok(if c <= tol_c {
        StateClass::Separable
    } else {
        StateClass::Entangled
    })
}

/// Polarization vector of the pure state |ψ⟩ (normalized internally).
pub fn pure_state_from_vector(psi: &[C64; 4]) -> PolarizationVector {
    polarization_unchecked(&DensityMatrix::from_pure(psi).0)
}

/// The six-angle parametrization
/// cos θ1|00⟩ + e^{iφ1} sin θ1 sin θ2|01⟩ + e^{iφ2} sin θ1 cos θ2 cos θ3|10⟩
/// + e^{iφ3} sin θ1 cos θ2 sin θ3|11⟩.
pub fn pure_state(
    theta1: f64,
    theta2: f64,
    theta3: f64,
    phi1: f64,
    phi2: f64,
    phi3: f64,
) -> PolarizationVector {
    pure_state_from_vector(&pure_amplitudes(theta1, theta2, theta3, phi1, phi2, phi3))
}

pub fn pure_amplitudes(
    theta1: f64,
    theta2: f64,
    theta3: f64,
    phi1: f64,
    phi2: f64,
    phi3: f64,
) -> [C64; 4] {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    let (s3, c3) = theta3.sin_cos();
    [
        C64::new(c1, 0.0),
        C64::from_polar(s1 * s2, phi1),
        C64::from_polar(s1 * c2 * c3, phi2),
        C64::from_polar(s1 * c2 * s3, phi3),
    ]
}

/// Haar-random pure state vector.
pub fn random_pure_amplitudes<R: Rng + ?Sized>(rng: &mut R) -> [C64; 4] {
    let mut psi = [C64::new(0.0, 0.0); 4];
    let mut norm = 0.0;
    for z in psi.iter_mut() {
        *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        norm += z.norm_sqr();
    }
    let s = norm.sqrt();
    psi.map(|z| z / s)
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> PolarizationVector {
    pure_state_from_vector(&random_pure_amplitudes(rng))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateFileIn {
    Vector {
        n: Vec<f64>,
    },
    Matrix {
        rho_re: Vec<Vec<f64>>,
        #[serde(default)]
        rho_im: Option<Vec<Vec<f64>>>,
    },
}

/// Parse a state file: `{"n": [15 reals]}` or `{"rho_re": [[..]], "rho_im": [[..]]}`.
pub fn read_state_json(text: &str) -> Result<PolarizationVector> {
    match serde_json::from_str::<StateFileIn>(text)? {
        StateFileIn::Vector { n } => PolarizationVector::from_slice(&n),
        StateFileIn::Matrix { rho_re, rho_im } => {
            let im = rho_im.unwrap_or_else(|| vec![vec![0.0; 4]; 4]);
            let shape_ok = |m: &Vec<Vec<f64>>| m.len() == 4 && m.iter().all(|r| r.len() == 4);
            if !shape_ok(&rho_re) || !shape_ok(&im) {
                return Err(Error::Validation("rho_re and rho_im must be 4x4".into()));
            }
            let rho = DensityMatrix(Mat4::from_fn(|r, c| C64::new(rho_re[r][c], im[r][c])));
            to_polarization(&rho)
        }
    }
}

pub fn write_state_json(n: &PolarizationVector) -> String {
    serde_json::to_string(n).expect("serializing a float array")
}
