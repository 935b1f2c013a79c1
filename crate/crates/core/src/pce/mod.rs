//! Wiener–Hermite coefficients of parametric maps, N-term error curves,
//! summability diagnostics and the exact weighted identity for polynomials.

mod analysis;
mod engine;
mod export;
mod identity;
mod map;
mod rates;

pub use analysis::{error_curve, fit_slope, summability_report, ErrorPoint, SummabilityPrefix, SummabilityReport};
pub use engine::{compute_coefficient, compute_expansion, tensor_orders, Estimator, EstimatorInfo, PCExpansion};
pub use export::{write_coefficients_csv, write_error_curve_csv};
pub use identity::{weighted_identity_check, PolySpec, MAX_POLY_DEGREE, MAX_POLY_DIM};
pub use map::{evaluate_solution, ParametricMap, ParametricProblem, ProblemSpec, VectorMap};
pub use rates::{run_rate_experiment, RateOutcome};
