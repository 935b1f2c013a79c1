//! Shared fixtures for the criterion benchmarks.

use std::f64::consts::PI;

use lnpc_core::indices::{surrogate_constants, AdmissibleWeights, SurrogateWeights, WeightModel};
use lnpc_core::pce::{ParametricProblem, ProblemSpec};
use lnpc_core::torus::{PeriodicField, PeriodicGrid, SolverConfig};

pub fn model() -> WeightModel {
    WeightModel::power_law(0.5, 2.0, 0.6, 1.0, 4).unwrap()
}

pub fn surrogate() -> SurrogateWeights {
    surrogate_constants(4, &AdmissibleWeights::from_model(model()), 60).unwrap()
}

/// The 1D problem `−(e^{a(y)} u')' = sin(2πx)` with `J` parameters.
pub fn problem(n: usize, j: usize) -> ParametricProblem {
    let grid = PeriodicGrid::new(1, n).unwrap();
    ParametricProblem::new(ProblemSpec {
        grid,
        basis_t: 1.0,
        model: model(),
        f: PeriodicField::from_fn(grid, |x| (2.0 * PI * x[0]).sin()),
        truncation: j,
        s_out: 1.0,
        solver: SolverConfig::default(),
    })
    .unwrap()
}
