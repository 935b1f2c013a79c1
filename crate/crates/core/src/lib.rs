//! Sparse Wiener–Hermite polynomial chaos approximation of the
//! coefficient-to-solution map of `−∇·(e^a ∇u) = f` on the torus, with
//! lognormal coefficient `a = Σ_j y_j b_j ψ_j`, `y_j ~ N(0, 1)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hermite;
pub mod indices;
pub mod pce;
pub mod report;
pub mod sampling;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use indices::{AdmissibleWeights, IndexSet, MultiIndex, SurrogateWeights, WeightModel};
pub use report::Report;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
