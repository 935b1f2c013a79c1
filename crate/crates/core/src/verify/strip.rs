use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pce::ParametricProblem;
use crate::report::Report;
use crate::sampling::GaussianStream;
use crate::torus::{hnorm, solve_diffusion, Complex64, PeriodicField};

/// Candidate constants for `‖u(y + z)‖_X ≤ C exp(α ‖a(y)‖^τ_{Ḣ^t})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolomorphyParams {
    pub c: f64,
    pub alpha: f64,
    pub tau: f64,
    /// Strip width: shifts satisfy `Σ_j ϱ_j² b_j² ≤ θ²`, `|z_j| ≤ ϱ_j`.
    pub theta: f64,
}

impl HolomorphyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.alpha > 0.0 && self.theta > 0.0) {
            return Err(Error::domain("C, alpha and theta must be positive"));
        }
        if !(0.0..2.0).contains(&self.tau) {
            return Err(Error::domain(format!("tau = {} must lie in [0, 2)", self.tau)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StripReport {
    pub probes: usize,
    pub violations: usize,
    /// Probes where `Re e^a ≤ 0` at some grid point.
    pub out_of_strip: usize,
    /// Probes where the solver did not converge.
    pub failed: usize,
    /// Largest `‖u‖_X / (C exp(α‖a‖^τ))` over solved probes.
    pub max_ratio: f64,
}

impl StripReport {
    /// Violations over solved probes.
    pub fn violation_fraction(&self) -> f64 {
        let solved = self.probes - self.out_of_strip - self.failed;
        if solved == 0 {
            0.0
        } else {
            self.violations as f64 / solved as f64
        }
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push("status", if self.violations == 0 { "pass" } else { "violation" })
            .push("probes", self.probes)
            .push("violations", self.violations)
            .push_f64("violation_fraction", self.violation_fraction())
            .push("out_of_strip", self.out_of_strip)
            .push("failed", self.failed)
            .push_f64("max_ratio", self.max_ratio);
        r
    }
}

enum Probe {
    Solved { ratio: f64 },
    OutOfStrip,
    Failed,
}

/// Samples `y ~ γ_J` and complex shifts `z` inside the admissible polydisc,
/// solves with the complex coefficient `a(y + z)`, and counts probes that
/// exceed the candidate bound.
pub fn strip_bound_probe(
    problem: &ParametricProblem,
    params: &HolomorphyParams,
    n_probes: usize,
    seed: u64,
) -> Result<StripReport> {
    params.validate()?;
    let spec = problem.spec();
    let j = spec.truncation;
    let b: Vec<f64> = (1..=j).map(|i| spec.model.b(i)).collect();
    let t = problem.basis().smoothness();

    let run = |i: usize| -> Result<Probe> {
        let mut g = GaussianStream::new(seed, i as u64);
        let y: Vec<f64> = (0..j).map(|_| g.next_normal()).collect();
        // random ϱ with Σ ϱ_j² b_j² = θ² U
        let w: Vec<f64> = (0..j).map(|_| g.uniform()).collect();
        let total: f64 = w.iter().sum();
        let scale = params.theta * params.theta * g.uniform();
        let mut z_re = vec![0.0; j];
        let mut z_im = vec![0.0; j];
        for k in 0..j {
            let (r_disc, phase) = (g.uniform().sqrt(), 2.0 * PI * g.uniform());
            if b[k] > 0.0 {
                let rho = (scale * w[k] / total).sqrt() / b[k];
                z_re[k] = rho * r_disc * phase.cos();
                z_im[k] = rho * r_disc * phase.sin();
            }
        }
        let a_real = problem.coefficient(&y)?;
        let shifted_re: Vec<f64> = y.iter().zip(&z_re).map(|(a, b)| a + b).collect();
        let a_re = problem.coefficient(&shifted_re)?;
        let a_im = problem.coefficient(&z_im)?;
        let values: Vec<Complex64> = a_re
            .values()
            .iter()
            .zip(a_im.values())
            .map(|(r, i)| Complex64::new(r.re, i.re))
            .collect();
        let a = PeriodicField::from_values(problem.grid(), values)?;
        match solve_diffusion(&a, &spec.f, &spec.solver) {
            Ok(u) => {
                let norm = hnorm(&u, spec.s_out)?;
                let bound = params.c * (params.alpha * hnorm(&a_real, t)?.powf(params.tau)).exp();
                Ok(Probe::Solved { ratio: norm / bound })
            }
            Err(Error::Degenerate { .. }) => Ok(Probe::OutOfStrip),
            Err(Error::NonConvergence { .. }) => Ok(Probe::Failed),
            Err(e) => Err(e),
        }
    };
    let outcomes: Vec<Result<Probe>> = (0..n_probes).into_par_iter().map(run).collect();
    let mut report = StripReport {
        probes: n_probes,
        violations: 0,
        out_of_strip: 0,
        failed: 0,
        max_ratio: 0.0,
    };
    for o in outcomes {
        match o? {
            Probe::Solved { ratio } => {
                report.max_ratio = report.max_ratio.max(ratio);
                if ratio > 1.0 {
                    report.violations += 1;
                }
            }
            Probe::OutOfStrip => report.out_of_strip += 1,
            Probe::Failed => report.failed += 1,
        }
    }
    Ok(report)
}
