use super::{
    compute_expansion, error_curve, fit_slope, summability_report, ErrorPoint, Estimator, PCExpansion,
    ParametricProblem, SummabilityReport,
};
use crate::error::Result;
use crate::indices::{build_index_set, surrogate_constants, AdmissibleWeights, IndexSet, SurrogateWeights};

/// Everything produced by [`run_rate_experiment`].
#[derive(Clone, Debug)]
pub struct RateOutcome {
    pub weights: SurrogateWeights,
    pub ref_set: IndexSet,
    pub expansion: PCExpansion,
    pub curve: Vec<ErrorPoint>,
    pub slope: f64,
    pub summability: SummabilityReport,
}

/// Builds `Λ_ref` from the problem's weight model, computes the expansion
/// and fits the decay of `E(N)` over `ns`.
pub fn run_rate_experiment(
    problem: &ParametricProblem,
    ref_size: usize,
    ns: &[usize],
    estimator: Estimator,
    scan_limit: usize,
) -> Result<RateOutcome> {
    let model = problem.spec().model.clone();
    let (p, m) = (model.p(), model.order());
    let rho = AdmissibleWeights::from_model(model);
    let weights = surrogate_constants(m, &rho, scan_limit)?;
    let ref_set = build_index_set(ref_size, &weights, problem.spec().truncation)?;
    let expansion = compute_expansion(problem, &ref_set, estimator)?;
    let curve = error_curve(&expansion, ns)?;
    let pts: Vec<(f64, f64)> = curve.iter().map(|c| (c.n as f64, c.error)).collect();
    let slope = fit_slope(&pts)?;
    let summability = summability_report(&expansion, p, m, &rho)?;
    Ok(RateOutcome {
        weights,
        ref_set,
        expansion,
        curve,
        slope,
        summability,
    })
}
