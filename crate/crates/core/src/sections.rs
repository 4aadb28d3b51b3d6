//! Two-dimensional coordinate sections of the state space: only components
//! i and j nonzero, (n_i, n_j) = (x, y).
//!
//! Anticommuting generators give the unit disc x² + y² ≤ 1 (the binding
//! constraint is a3). Commuting generators give the square |x| + |y| ≤ 1 with
//! vertices on the axes: the eigenvalues are (1 ± x ± y)/4 and the binding
//! constraint is a4 = (R⁴ − 2R² − 4x²y² + 1)/256 ≥ 0, which factors as
//! ((1+x)² − y²)((1−x)² − y²).

use serde::{Deserialize, Serialize};

use crate::algebra::{commutation_class, Commutation, GeneratorIndex};
use crate::error::{Error, Result};
use crate::state::PolarizationVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectionKind {
    Disc,
    Square,
}

impl SectionKind {
    pub fn letter(self) -> char {
        match self {
            SectionKind::Disc => 'D',
            SectionKind::Square => 'S',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'D' => Some(SectionKind::Disc),
            'S' => Some(SectionKind::Square),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SectionKind::Disc => "disc",
            SectionKind::Square => "square",
        }
    }

    /// Analytic membership of (x, y) in the physical section.
    pub fn contains(self, x: f64, y: f64, tol: f64) -> bool {
        match self {
            SectionKind::Disc => x * x + y * y <= 1.0 + tol,
            SectionKind::Square => x.abs() + y.abs() <= 1.0 + tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectionShape {
    pub kind: SectionKind,
    pub i: GeneratorIndex,
    pub j: GeneratorIndex,
}

pub fn section_type(i: GeneratorIndex, j: GeneratorIndex) -> Result<SectionShape> {
    let kind = match commutation_class(i, j)? {
        Commutation::Anticommute => SectionKind::Disc,
        Commutation::Commute => SectionKind::Square,
    };
    Ok(SectionShape { kind, i, j })
}

/// Lower-triangular table: entry [r][c] for r > c (0-based slots), `None` elsewhere.
pub fn table1() -> [[Option<SectionKind>; 15]; 15] {
    let mut t = [[None; 15]; 15];
    for r in 0..15 {
        for c in 0..r {
            let i = GeneratorIndex::from_slot(r).expect("slot < 15");
            let j = GeneratorIndex::from_slot(c).expect("slot < 15");
            t[r][c] = Some(section_type(i, j).expect("distinct generators").kind);
        }
    }
    t
}

pub fn section_point(i: GeneratorIndex, j: GeneratorIndex, x: f64, y: f64) -> PolarizationVector {
    let mut n = PolarizationVector::zeros();
    n[i] = x;
    n[j] = y;
    n
}

/// 256·a4 on a commuting section.
pub fn square_quartic(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    r2 * r2 - 2.0 * r2 - 4.0 * x * x * y * y + 1.0
}

/// Boundary points ordered counterclockwise from the positive x axis.
pub fn section_boundary(
    i: GeneratorIndex,
    j: GeneratorIndex,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples < 8 {
        return Err(Error::Domain(format!(
            "section boundary needs at least 8 samples, got {samples}"
        )));
    }
    let shape = section_type(i, j)?;
    Ok(boundary_points(shape.kind, samples))
}

pub fn boundary_points(kind: SectionKind, samples: usize) -> Vec<(f64, f64)> {
    (0..samples)
        .map(|k| match kind {
            SectionKind::Disc => {
                let th = std::f64::consts::TAU * k as f64 / samples as f64;
                (th.cos(), th.sin())
            }
            SectionKind::Square => {
                let s = 4.0 * k as f64 / samples as f64;
                let edge = s.floor() as usize;
                let u = s - edge as f64;
                match edge {
                    0 => (1.0 - u, u),
                    1 => (-u, 1.0 - u),
                    2 => (u - 1.0, -u),
                    _ => (u, u - 1.0),
                }
            }
        })
        .collect()
}
