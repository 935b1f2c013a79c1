use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::sampling::GaussianStream;

const MC_CHUNK: usize = 4096;

/// `∫ exp(α̃ Σ_j b_j² y_j²) dγ(y) = Π_j (1 − 2α̃ b_j²)^{−1/2}`.
pub fn exp_moment_closed(b: &[f64], alpha_tilde: f64) -> Result<f64> {
    if !alpha_tilde.is_finite() {
        return Err(Error::domain("alpha must be finite"));
    }
    let mut out = 1.0;
    for (j, &bj) in b.iter().enumerate() {
        if !bj.is_finite() {
            return Err(Error::domain(format!("b_{} is not finite", j + 1)));
        }
        let s = 1.0 - 2.0 * alpha_tilde * bj * bj;
        if s <= 0.0 {
            return Err(Error::domain(format!(
                "Gaussian integral diverges: 2·alpha·b_{}² = {} ≥ 1",
                j + 1,
                1.0 - s
            )));
        }
        out /= s.sqrt();
    }
    Ok(out)
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    /// Set when the standard error exceeds the estimate or is not finite,
    /// the signature of a divergent integrand.
    pub unstable: bool,
}

impl McEstimate {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push_f64("estimate", self.estimate)
            .push_f64("std_error", self.std_error)
            .push("samples", self.samples)
            .push("unstable", self.unstable);
        r
    }
}

/// Monte Carlo estimate of `∫ exp(α (Σ_j b_j² y_j²)^{τ/2}) dγ(y)`.
pub fn exp_moment_mc(b: &[f64], alpha: f64, tau: f64, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < 1000 {
        return Err(Error::domain(format!("need at least 1000 samples, got {samples}")));
    }
    if !(tau > 0.0 && tau <= 2.0) {
        return Err(Error::domain(format!("tau = {tau} must lie in (0, 2]")));
    }
    if !alpha.is_finite() || b.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("alpha and b must be finite"));
    }
    let b2: Vec<f64> = b.iter().map(|x| x * x).collect();
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut g = GaussianStream::new(seed, c as u64);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                let q: f64 = b2.iter().map(|w| w * g.next_normal().powi(2)).sum();
                let x = (alpha * q.powf(tau / 2.0)).exp();
                s1 += x;
                s2 += x * x;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = parts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    let std_error = (var / n).sqrt();
    Ok(McEstimate {
        estimate: mean,
        std_error,
        samples,
        unstable: !(std_error.is_finite() && mean.is_finite()) || std_error > mean.abs(),
    })
}
