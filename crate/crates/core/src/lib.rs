//! Two-qubit state-space geometry in the polarization-vector picture, closed-form
//! open-system models and a topological classifier for entanglement evolutions.

// NaN inputs must fail validation, so `!(x > 0.0)` is deliberate; index loops
// mirror the matrix formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod algebra;
pub mod channels;
pub mod classifier;
mod error;
pub mod models;
pub mod montecarlo;
pub mod sections;
pub mod state;
pub mod trajectory;

pub use error::{Error, Result};
