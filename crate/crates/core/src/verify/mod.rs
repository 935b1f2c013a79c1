//! Numerical checks of constant-free statements: Gaussian exponential
//! moments, the solver perturbation bound, algebraic growth of `c_ν` along
//! the enumeration, and sampled strip-bound probes.

mod growth;
mod moments;
mod perturbation;
mod strip;

pub use growth::{growth_bound_check, growth_bound_check_with_rho, GrowthReport};
pub use moments::{exp_moment_closed, exp_moment_mc, McEstimate};
pub use perturbation::{perturbation_check, PerturbationReport, PERTURBATION_SLACK};
pub use strip::{strip_bound_probe, HolomorphyParams, StripReport};
