//! D8: geometry of the triplet subspace span{|T0⟩, |00⟩, |11⟩}, with
//! |T0⟩ = (|01⟩ + |10⟩)/√2 and ρ₃ = I/3 + ½Σ m_k λ_k over the Gell-Mann
//! matrices in the basis order (T0, 00, 11).
//!
//! With a = |ρ_{00,11}| = ½√(m₆² + m₇²), b = √(p₀₀ p₁₁) and p_T0 the |T0⟩
//! population, states without T0 coherences (m₁ = m₂ = m₄ = m₅ = 0) are
//! X-states and C = max(0, 2min(a, b) − p_T0, p_T0 − 2max(a, b)). At p_T0 = 0
//! this reduces to 2min(a, b).

use nalgebra::{Matrix3, SMatrix};

use crate::algebra::C64;
use crate::error::{Error, Result};
use crate::state::{
    polarization_unchecked, PolarizationVector, DEFAULT_CONCURRENCE_TOL, DEFAULT_POSITIVITY_TOL,
};

pub type Mat3 = Matrix3<C64>;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// The eight Gell-Mann matrices, λ₁ … λ₈.
pub fn gell_mann() -> [Mat3; 8] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut out = [Mat3::zeros(); 8];
    let offdiag = [(0, 1), (0, 2), (1, 2)];
    for (k, &(r, c)) in offdiag.iter().enumerate() {
        let (sym, asym) = match k {
            0 => (0, 1),
            1 => (3, 4),
            _ => (5, 6),
        };
        out[sym][(r, c)] = one;
        out[sym][(c, r)] = one;
        out[asym][(r, c)] = -i;
        out[asym][(c, r)] = i;
    }
    out[2] = Mat3::from_diagonal(&nalgebra::Vector3::new(one, -one, z));
    let s = C64::new(1.0 / SQRT3, 0.0);
    out[7] = Mat3::from_diagonal(&nalgebra::Vector3::new(s, s, -s * 2.0));
    out
}

/// ρ₃ = I/3 + ½Σ m_k λ_k (not checked for positivity).
pub fn d8_density(m: &[f64; 8]) -> Mat3 {
    let mut rho = Mat3::identity() / C64::new(3.0, 0.0);
    for (mk, l) in m.iter().zip(gell_mann().iter()) {
        rho += l * C64::new(0.5 * mk, 0.0);
    }
    rho
}

/// Populations (p_T0, p₀₀, p₁₁).
pub fn d8_populations(m: &[f64; 8]) -> [f64; 3] {
    let third = 1.0 / 3.0;
    [
        third + m[2] / 2.0 + m[7] / (2.0 * SQRT3),
        third - m[2] / 2.0 + m[7] / (2.0 * SQRT3),
        third - m[7] / SQRT3,
    ]
}

/// Positivity of ρ₃ with tolerance `tol` on its smallest eigenvalue.
pub fn d8_validate(m: &[f64; 8], tol: f64) -> Result<()> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Validation(
            "triplet parameters must be finite".into(),
        ));
    }
    let eig = d8_density(m).symmetric_eigenvalues();
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -tol {
        return Err(Error::Validation(format!(
            "triplet state is not positive (min eigenvalue {min:.3e})"
        )));
    }
    Ok(())
}

/// Isometry from (T0, 00, 11) into the computational basis.
fn embedding() -> SMatrix<C64, 4, 3> {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let one = C64::new(1.0, 0.0);
    let mut v = SMatrix::<C64, 4, 3>::zeros();
    v[(1, 0)] = s;
    v[(2, 0)] = s;
    v[(0, 1)] = one;
    v[(3, 2)] = one;
    v
}

/// Two-qubit polarization vector of the embedded triplet state.
pub fn d8_embed(m: &[f64; 8]) -> Result<PolarizationVector> {
    d8_validate(m, DEFAULT_POSITIVITY_TOL)?;
    let v = embedding();
    let rho4 = v * d8_density(m) * v.adjoint();
    Ok(polarization_unchecked(&rho4))
}

fn coherence_a(m: &[f64; 8]) -> f64 {
    0.5 * m[5].hypot(m[6])
}

/// 2 − √3(√3m₃ + m₈) + 3m₈(√3m₃ − m₈) = 18 p₀₀ p₁₁.
pub fn d8_radicand(m: &[f64; 8]) -> f64 {
    2.0 - SQRT3 * (SQRT3 * m[2] + m[7]) + 3.0 * m[7] * (SQRT3 * m[2] - m[7])
}

fn coherence_b(m: &[f64; 8]) -> Result<f64> {
    let r = d8_radicand(m);
    if r < -DEFAULT_POSITIVITY_TOL {
        return Err(Error::Validation(format!("negative radicand {r:.3e}")));
    }
    Ok(std::f64::consts::SQRT_2 / 6.0 * r.max(0.0).sqrt())
}

fn require_decoupled(m: &[f64; 8]) -> Result<()> {
    let c = [m[0], m[1], m[3], m[4]];
    if c.iter().any(|x| x.abs() > DEFAULT_POSITIVITY_TOL) {
        return Err(Error::Domain(format!(
            "closed-form concurrence needs zero T0 coherences, got (m1, m2, m4, m5) = {c:?}"
        )));
    }
    Ok(())
}

/// Concurrence of a T0-decoupled triplet state.
pub fn d8_concurrence(m: &[f64; 8]) -> Result<f64> {
    d8_validate(m, DEFAULT_POSITIVITY_TOL)?;
    require_decoupled(m)?;
    let a = coherence_a(m);
    let b = coherence_b(m)?;
    let p0 = d8_populations(m)[0];
    Ok((2.0 * a.min(b) - p0).max(p0 - 2.0 * a.max(b)).max(0.0))
}

/// λ₁,₂ = |a ± b| form, C = 2min(a, b); exact only when p_T0 = 0.
pub fn d8_concurrence_two_min(m: &[f64; 8]) -> Result<f64> {
    d8_validate(m, DEFAULT_POSITIVITY_TOL)?;
    let a = coherence_a(m);
    let b = coherence_b(m)?;
    let (l1, l2) = ((a + b).abs(), (a - b).abs());
    Ok((l1 - l2).max(0.0))
}

pub fn d8_separable(m: &[f64; 8]) -> Result<bool> {
    Ok(d8_concurrence(m)? <= DEFAULT_CONCURRENCE_TOL)
}

/// m₆ = m₇ = 0 or a vanishing radicand.
pub fn d8_separable_by_geometry(m: &[f64; 8], tol: f64) -> Result<bool> {
    d8_validate(m, DEFAULT_POSITIVITY_TOL)?;
    Ok(coherence_a(m) <= tol || d8_radicand(m).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::concurrence;
    use rand::{Rng, SeedableRng};

    /// Random decoupled triplet state from populations and a coherence.
    fn random_decoupled<R: Rng>(rng: &mut R, p0: Option<f64>) -> [f64; 8] {
        let p0 = p0.unwrap_or_else(|| rng.random_range(0.0..1.0));
        let s: f64 = rng.random_range(0.0..1.0);
        let (p1, p2) = ((1.0 - p0) * s, (1.0 - p0) * (1.0 - s));
        let a = rng.random_range(0.0..=1.0) * (p1 * p2).sqrt();
        let ph: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let mut m = [0.0; 8];
        m[2] = p0 - p1;
        m[7] = SQRT3 * (p0 + p1 - 2.0 * p2) / 3.0;
        m[5] = 2.0 * a * ph.cos();
        m[6] = 2.0 * a * ph.sin();
        m
    }

    #[test]
    fn gell_mann_orthonormal() {
        let l = gell_mann();
        for i in 0..8 {
            assert!((l[i] - l[i].adjoint()).norm() < 1e-15);
            assert!(l[i].trace().norm() < 1e-15);
            for j in 0..8 {
                let tr = (l[i] * l[j]).trace().re;
                assert!((tr - if i == j { 2.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn density_has_unit_trace_and_populations() {
        let m = [0.0, 0.0, 0.2, 0.0, 0.0, 0.1, -0.05, 0.3];
        let rho = d8_density(&m);
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
        let p = d8_populations(&m);
        for k in 0..3 {
            assert!((rho[(k, k)].re - p[k]).abs() < 1e-15);
        }
        assert!((18.0 * p[1] * p[2] - d8_radicand(&m)).abs() < 1e-14);
    }

    #[test]
    fn mixed_triplet_has_zero_concurrence() {
        assert_eq!(d8_concurrence(&[0.0; 8]).unwrap(), 0.0);
        assert!(d8_separable(&[0.0; 8]).unwrap());
    }

    #[test]
    fn corrected_formula_matches_wootters() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..2000 {
            let m = random_decoupled(&mut rng, None);
            let w = concurrence(&d8_embed(&m).unwrap()).unwrap().c;
            assert!((d8_concurrence(&m).unwrap() - w).abs() < 1e-9, "{m:?}");
        }
    }

    #[test]
    fn two_min_formula_exact_without_t0_population() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for _ in 0..2000 {
            let m = random_decoupled(&mut rng, Some(0.0));
            let w = concurrence(&d8_embed(&m).unwrap()).unwrap().c;
            assert!((d8_concurrence_two_min(&m).unwrap() - w).abs() < 1e-9);
            assert_eq!(
                d8_separable(&m).unwrap(),
                d8_separable_by_geometry(&m, 1e-9).unwrap()
            );
        }
    }

    #[test]
    fn two_min_formula_fails_with_t0_population() {
        // Bell-diagonal mix: p_T0 = 1/2, |Φ+⟩ weight 1/2 gives C = 0, not 1.
        let mut m = [0.0; 8];
        let (p0, p1, p2) = (0.5, 0.25, 0.25);
        m[2] = p0 - p1;
        m[7] = SQRT3 * (p0 + p1 - 2.0 * p2) / 3.0;
        m[5] = 0.5;
        assert!((d8_concurrence_two_min(&m).unwrap() - 0.5).abs() < 1e-12);
        assert!(d8_concurrence(&m).unwrap().abs() < 1e-12);
        assert!(concurrence(&d8_embed(&m).unwrap()).unwrap().c < 1e-9);
    }

    #[test]
    fn coherence_free_states_are_separable() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let mut m = random_decoupled(&mut rng, Some(0.0));
            m[5] = 0.0;
            m[6] = 0.0;
            assert!(d8_separable(&m).unwrap());
        }
    }

    #[test]
    fn errors() {
        let mut bad = [0.0; 8];
        bad[2] = 2.0;
        assert!(matches!(d8_concurrence(&bad), Err(Error::Validation(_))));
        let mut coupled = [0.0; 8];
        coupled[0] = 0.1;
        assert!(matches!(d8_concurrence(&coupled), Err(Error::Domain(_))));
    }
}
