use super::PCExpansion;
use crate::error::{Error, Result};
use crate::indices::{beta_weight, index_set_metrics, ls_slope, AdmissibleWeights};
use crate::report::Report;

/// One point of an N-term error curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorPoint {
    pub n: usize,
    /// `(Σ_{ν∈Λ_ref∖Λ_N} ‖u_ν‖²_X)^{1/2}`.
    pub error: f64,
    pub m_lambda: u64,
    pub d_lambda: usize,
}

/// Tail errors `E(N)` for the prefixes `Λ_N` of the reference enumeration.
pub fn error_curve(exp: &PCExpansion, ns: &[usize]) -> Result<Vec<ErrorPoint>> {
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("N values must be strictly increasing"));
    }
    let len = exp.len();
    if let Some(&n) = ns.iter().find(|&&n| n == 0 || n > len) {
        return Err(Error::domain(format!("N = {n} outside 1..={len}")));
    }
    // suffix sums accumulated from the smallest terms up
    let mut tail = vec![0.0; len + 1];
    for i in (0..len).rev() {
        tail[i] = tail[i + 1] + exp.norms()[i].powi(2);
    }
    ns.iter()
        .map(|&n| {
            let (m_lambda, d_lambda) = index_set_metrics(&exp.ref_set().prefix(n)?)?;
            Ok(ErrorPoint {
                n,
                error: tail[n].sqrt(),
                m_lambda,
                d_lambda,
            })
        })
        .collect()
}

/// Least-squares slope of `log E` against `log N`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::domain(format!(
            "slope fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(n, e)| !(n > 0.0 && e > 0.0)) {
        return Err(Error::domain("slope fit needs positive N and E"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    Ok(ls_slope(&xs, &ys))
}

/// Prefix sums at one prefix length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummabilityPrefix {
    pub n: usize,
    /// `Σ β_ν(M, ϱ) ‖u_ν‖²_X`.
    pub weighted: f64,
    /// `Σ ‖u_ν‖^p_X`.
    pub lp: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummabilityReport {
    pub p: f64,
    pub m: u32,
    pub prefixes: Vec<SummabilityPrefix>,
    /// Relative increase of the weighted sum over the last quartile.
    pub weighted_increment: f64,
    pub lp_increment: f64,
    /// Log-log slope of the decreasing rearrangement of `‖u_ν‖_X`.
    pub tail_slope: Option<f64>,
}

impl SummabilityReport {
    /// Both prefix sums grow by at most `tol` (relative) over the last quartile.
    pub fn stabilized(&self, tol: f64) -> bool {
        self.weighted_increment <= tol && self.lp_increment <= tol
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push_f64("p", self.p).push("M", self.m);
        for pre in &self.prefixes {
            r.push_f64(format!("weighted_sum.{}", pre.n), pre.weighted);
            r.push_f64(format!("lp_sum.{}", pre.n), pre.lp);
        }
        r.push_f64("weighted_increment", self.weighted_increment)
            .push_f64("lp_increment", self.lp_increment);
        match self.tail_slope {
            Some(s) => r.push_f64("tail_slope", s),
            None => r.push("tail_slope", "n/a"),
        };
        r
    }
}

fn relative_increment(full: f64, part: f64) -> f64 {
    if full == 0.0 {
        0.0
    } else {
        (full - part) / full
    }
}

/// Weighted `ℓ²` and `ℓ^p` prefix sums over the reference enumeration, and
/// the decay of the rearranged coefficient norms.
pub fn summability_report(exp: &PCExpansion, p: f64, m: u32, rho: &AdmissibleWeights) -> Result<SummabilityReport> {
    if !(p > 0.0 && p < 2.0) {
        return Err(Error::domain(format!("p = {p} must lie in (0, 2)")));
    }
    let len = exp.len();
    let members = exp.ref_set().members();
    let mut weighted = Vec::with_capacity(len + 1);
    let mut lp = Vec::with_capacity(len + 1);
    weighted.push(0.0);
    lp.push(0.0);
    for (nu, &norm) in members.iter().zip(exp.norms()) {
        let beta = beta_weight(nu, m, rho)?;
        weighted.push(weighted.last().unwrap() + beta * norm * norm);
        lp.push(lp.last().unwrap() + norm.powf(p));
    }
    let mut sizes: Vec<usize> = std::iter::successors(Some(1usize), |n| Some(n * 2))
        .take_while(|&n| n < len)
        .chain((1..=4).map(|q| q * len / 4))
        .filter(|&n| n >= 1)
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    let prefixes = sizes
        .iter()
        .map(|&n| SummabilityPrefix {
            n,
            weighted: weighted[n],
            lp: lp[n],
        })
        .collect();
    let q3 = 3 * len / 4;

    let mut sorted: Vec<f64> = exp.norms().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let lo = (len / 8).max(1);
    let pts: Vec<(f64, f64)> = (lo..len / 2)
        .filter(|&i| sorted[i] > 0.0)
        .map(|i| ((i + 1) as f64, sorted[i]))
        .collect();
    let tail_slope = fit_slope(&pts).ok();

    Ok(SummabilityReport {
        p,
        m,
        prefixes,
        weighted_increment: relative_increment(weighted[len], weighted[q3]),
        lp_increment: relative_increment(lp[len], lp[q3]),
        tail_slope,
    })
}
