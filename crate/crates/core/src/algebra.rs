//! The fifteen two-qubit generators μ_i = σ_α ⊗ σ_β and their structure
//! constants.
//!
//! Indices run 1..=15 in the order IX, IY, IZ, XI, XX, ..., ZZ, i.e. the
//! lexicographic order of the Pauli pair (α, β) with (I, I) removed. Every
//! vector, matrix and file format in the crate uses this order.

use std::fmt;
use std::sync::LazyLock;

use nalgebra::{Complex, Matrix2, Matrix4};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

pub const LABELS: [&str; 15] = [
    "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ",
];

/// 1-based generator number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorIndex(u8);

impl GeneratorIndex {
    pub fn new(value: usize) -> Result<Self> {
        if (1..=15).contains(&value) {
            Ok(Self(value as u8))
        } else {
            Err(Error::Domain(format!(
                "generator index {value} outside 1..=15"
            )))
        }
    }

    /// Construct from a zero-based vector slot.
    pub fn from_slot(slot: usize) -> Result<Self> {
        Self::new(slot + 1)
    }

    pub fn from_label(label: &str) -> Result<Self> {
        LABELS
            .iter()
            .position(|l| l.eq_ignore_ascii_case(label))
            .map(|p| Self(p as u8 + 1))
            .ok_or_else(|| Error::Domain(format!("unknown generator label {label:?}")))
    }

    /// Generator for the Pauli pair (α, β), 0 = I, 1 = X, 2 = Y, 3 = Z.
    pub fn from_paulis(alpha: usize, beta: usize) -> Option<Self> {
        if alpha > 3 || beta > 3 || (alpha == 0 && beta == 0) {
            return None;
        }
        Some(Self((4 * alpha + beta) as u8))
    }

    pub fn value(self) -> usize {
        self.0 as usize
    }

    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub fn label(self) -> &'static str {
        LABELS[self.slot()]
    }

    pub fn paulis(self) -> (usize, usize) {
        (self.value() / 4, self.value() % 4)
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (1..=15u8).map(Self)
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn pauli(k: usize) -> Mat2 {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match k {
        0 => Mat2::new(o, z, z, o),
        1 => Mat2::new(z, o, o, z),
        2 => Mat2::new(z, -i, i, z),
        3 => Mat2::new(o, z, z, -o),
        _ => panic!("Pauli index {k} out of range"),
    }
}

/// Kronecker product with `a` acting on the first (left) qubit.
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

static GENERATORS: LazyLock<[Mat4; 15]> = LazyLock::new(|| {
    std::array::from_fn(|s| {
        let (a, b) = GeneratorIndex(s as u8 + 1).paulis();
        kron2(&pauli(a), &pauli(b))
    })
});

pub fn generators() -> &'static [Mat4; 15] {
    &GENERATORS
}

pub fn generator(i: GeneratorIndex) -> Mat4 {
    GENERATORS[i.slot()]
}

/// σ_y ⊗ σ_y, which is real.
pub fn spin_flip() -> Mat4 {
    generator(GeneratorIndex(10))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Commutation {
    Commute,
    Anticommute,
}

pub fn commutation_class(i: GeneratorIndex, j: GeneratorIndex) -> Result<Commutation> {
    if i == j {
        return Err(Error::Domain(format!(
            "commutation class needs distinct generators, got {i} twice"
        )));
    }
    // Single-qubit Paulis anticommute iff both are non-identity and differ.
    let (a1, b1) = i.paulis();
    let (a2, b2) = j.paulis();
    let anti = |x: usize, y: usize| x != 0 && y != 0 && x != y;
    let flips = anti(a1, a2) as u8 + anti(b1, b2) as u8;
    Ok(if flips % 2 == 0 {
        Commutation::Commute
    } else {
        Commutation::Anticommute
    })
}

/// Nonzero structure constants as listed for this basis, ascending triples.
pub const LISTED_D: [(usize, usize, usize, f64); 15] = [
    (1, 4, 5, 1.0),
    (1, 8, 9, 1.0),
    (1, 12, 13, 1.0),
    (2, 4, 6, 1.0),
    (2, 8, 10, 1.0),
    (2, 12, 14, 1.0),
    (3, 4, 7, 1.0),
    (3, 8, 11, 1.0),
    (3, 12, 15, 1.0),
    (5, 10, 15, -1.0),
    (5, 11, 14, 1.0),
    (6, 9, 15, 1.0),
    (6, 11, 13, -1.0),
    (7, 9, 14, -1.0),
    (7, 10, 13, 1.0),
];

pub const LISTED_F: [(usize, usize, usize, f64); 20] = [
    (1, 2, 3, 1.0),
    (1, 6, 7, 1.0),
    (1, 10, 11, 1.0),
    (1, 14, 15, 1.0),
    (2, 5, 7, -1.0),
    (2, 9, 11, -1.0),
    (2, 13, 15, -1.0),
    (3, 5, 6, 1.0),
    (3, 9, 10, 1.0),
    (3, 13, 14, 1.0),
    (4, 8, 12, 1.0),
    (4, 9, 13, 1.0),
    (4, 10, 14, 1.0),
    (4, 11, 15, 1.0),
    (5, 8, 13, 1.0),
    (5, 9, 12, 1.0),
    (6, 8, 14, 1.0),
    (6, 10, 12, 1.0),
    (7, 8, 15, 1.0),
    (7, 11, 12, 1.0),
];

type Table3 = [[[f64; 15]; 15]; 15];

pub struct StructureConstants {
    f: Box<Table3>,
    d: Box<Table3>,
}

impl StructureConstants {
    fn compute() -> Self {
        let g = generators();
        let mut f = Box::new([[[0.0; 15]; 15]; 15]);
        let mut d = Box::new([[[0.0; 15]; 15]; 15]);
        for i in 0..15 {
            for j in 0..15 {
                let prod = g[i] * g[j];
                let rev = g[j] * g[i];
                let comm = prod - rev;
                let anti = prod + rev;
                for k in 0..15 {
                    let fc = (comm * g[k]).trace() / C64::new(0.0, 8.0);
                    let dc = (anti * g[k]).trace() / 8.0;
                    f[i][j][k] = clean(fc.re);
                    d[i][j][k] = clean(dc.re);
                }
            }
        }
        Self { f, d }
    }

    pub fn f(&self, i: GeneratorIndex, j: GeneratorIndex, k: GeneratorIndex) -> f64 {
        self.f[i.slot()][j.slot()][k.slot()]
    }

    pub fn d(&self, i: GeneratorIndex, j: GeneratorIndex, k: GeneratorIndex) -> f64 {
        self.d[i.slot()][j.slot()][k.slot()]
    }

    /// Zero-based access for inner loops.
    pub fn f_slot(&self, i: usize, j: usize, k: usize) -> f64 {
        self.f[i][j][k]
    }

    pub fn d_slot(&self, i: usize, j: usize, k: usize) -> f64 {
        self.d[i][j][k]
    }

    /// Compare against the listed nonzero entries; returns the first mismatch.
    pub fn check_against_list(&self) -> std::result::Result<(), String> {
        let listed = |list: &[(usize, usize, usize, f64)], i, j, k| {
            list.iter()
                .find(|&&(a, b, c, _)| (a, b, c) == (i, j, k))
                .map_or(0.0, |e| e.3)
        };
        for i in 1..=15 {
            for j in i..=15 {
                for k in j..=15 {
                    let fv = self.f[i - 1][j - 1][k - 1];
                    let dv = self.d[i - 1][j - 1][k - 1];
                    let fl = listed(&LISTED_F, i, j, k);
                    let dl = listed(&LISTED_D, i, j, k);
                    if fv != fl {
                        return Err(format!("f({i},{j},{k}) = {fv}, listed {fl}"));
                    }
                    if dv != dl {
                        return Err(format!("d({i},{j},{k}) = {dv}, listed {dl}"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn clean(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-12 {
        r + 0.0
    } else {
        x
    }
}

static STRUCTURE: LazyLock<StructureConstants> = LazyLock::new(|| {
    let sc = StructureConstants::compute();
    if let Err(msg) = sc.check_against_list() {
        panic!("structure constants disagree with the reference list: {msg}");
    }
    sc
});

pub fn structure_constants() -> &'static StructureConstants {
    &STRUCTURE
}
