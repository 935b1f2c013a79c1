use crate::error::{Error, Result};
use crate::indices::{AdmissibleWeights, IndexSet};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    /// `max{1, CK}²`.
    pub constant: f64,
    pub r1: f64,
    pub checked: usize,
    /// First `(N, c_{ν_N}, bound)` with `c_{ν_N}` above the bound.
    pub first_violation: Option<(usize, f64, f64)>,
    /// Largest `c_{ν_N} / bound` over the enumeration.
    pub max_ratio: f64,
}

impl GrowthReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push("status", if self.holds() { "pass" } else { "violation" })
            .push_f64("constant", self.constant)
            .push_f64("r1", self.r1)
            .push("checked", self.checked)
            .push_f64("max_ratio", self.max_ratio);
        if let Some((n, c, b)) = self.first_violation {
            r.push("violation.n", n)
                .push_f64("violation.c", c)
                .push_f64("violation.bound", b);
        }
        r
    }
}

/// Checks `c_{ν_N} ≤ max{1, CK}² N^{2 r1}` for every prefix length `N`.
pub fn growth_bound_check(set: &IndexSet, c: f64, k: f64, r1: f64) -> Result<GrowthReport> {
    if !(c > 0.0 && k > 0.0 && r1.is_finite()) {
        return Err(Error::domain("growth check needs C > 0, K > 0 and finite r1"));
    }
    if set.weights().iter().any(|w| w.is_nan()) {
        return Err(Error::domain("index set carries no c-weights"));
    }
    let constant = (c * k).max(1.0).powi(2);
    let mut first_violation = None;
    let mut max_ratio = 0.0_f64;
    for (i, &cv) in set.weights().iter().enumerate() {
        let n = i + 1;
        let bound = constant * (n as f64).powf(2.0 * r1);
        max_ratio = max_ratio.max(cv / bound);
        if first_violation.is_none() && cv > bound * (1.0 + 1e-12) {
            first_violation = Some((n, cv, bound));
        }
    }
    Ok(GrowthReport {
        constant,
        r1,
        checked: set.len(),
        first_violation,
        max_ratio,
    })
}

/// As [`growth_bound_check`], after verifying `ϱ_j ≤ C j^{r1}` on every
/// dimension the set activates.
pub fn growth_bound_check_with_rho(
    set: &IndexSet,
    c: f64,
    k: f64,
    r1: f64,
    rho: &AdmissibleWeights,
) -> Result<GrowthReport> {
    for j in 1..=set.max_dim() {
        let r = rho.rho(j)?;
        let cap = c * (j as f64).powf(r1);
        if r > cap * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "precondition fails: rho_{j} = {r} > C·j^r1 = {cap}"
            )));
        }
    }
    growth_bound_check(set, c, k, r1)
}
