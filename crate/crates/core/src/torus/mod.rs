//! Periodic fields on `T^d`, homogeneous Sobolev norms, the trigonometric
//! basis and the diffusion solver.

mod basis;
mod field;
mod grid;
mod io;
mod solver;

pub use basis::{synthesize, Parity, TrigBasis};
pub use field::{hnorm, PeriodicField};
pub use grid::PeriodicGrid;
pub use io::{read_field_binary, write_field_binary, write_field_csv};
pub use rustfft::num_complex::Complex64;
pub use solver::{
    apply_operator, apply_operator_with, solve_diffusion, solve_diffusion_detailed, Relaxation, SolveOutcome,
    SolverConfig,
};
