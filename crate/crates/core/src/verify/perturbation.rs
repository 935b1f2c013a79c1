use crate::error::{Error, Result};
use crate::report::Report;
use crate::torus::{hnorm, solve_diffusion, PeriodicField, SolverConfig};

/// Relative slack allowed on the right-hand side.
pub const PERTURBATION_SLACK: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbationReport {
    /// `‖S(e^a, f) − S(e^{a_δ}, f_δ)‖_{Ḣ¹}`.
    pub lhs: f64,
    /// `(‖f − f_δ‖_{Ḣ^{−1}} + ‖f‖_{Ḣ^{−1}} ‖e^a − e^{a_δ}‖_∞ / b_min) / b_{δ,min}`.
    pub rhs: f64,
    pub b_min: f64,
    pub b_delta_min: f64,
    pub holds: bool,
}

impl PerturbationReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push("status", if self.holds { "pass" } else { "violation" })
            .push_f64("lhs", self.lhs)
            .push_f64("rhs", self.rhs)
            .push_f64("b_min", self.b_min)
            .push_f64("b_delta_min", self.b_delta_min);
        r
    }
}

fn min_real_exp(a: &PeriodicField) -> f64 {
    a.values().iter().map(|v| v.exp().re).fold(f64::INFINITY, f64::min)
}

/// Checks the constant-free stability bound for two diffusion problems.
/// `b_min` and `b_{δ,min}` are grid-point minima of `Re e^a`, `Re e^{a_δ}`.
pub fn perturbation_check(
    a: &PeriodicField,
    a_delta: &PeriodicField,
    f: &PeriodicField,
    f_delta: &PeriodicField,
    cfg: &SolverConfig,
) -> Result<PerturbationReport> {
    a.same_grid(a_delta)?;
    a.same_grid(f)?;
    a.same_grid(f_delta)?;
    let b_min = min_real_exp(a);
    let b_delta_min = min_real_exp(a_delta);
    if !(b_min > 0.0 && b_delta_min > 0.0) {
        return Err(Error::domain("coefficients must have positive real part on the grid"));
    }
    let u = solve_diffusion(a, f, cfg)?;
    let u_delta = solve_diffusion(a_delta, f_delta, cfg)?;
    let lhs = hnorm(&u.sub(&u_delta)?, 1.0)?;
    let sup = a
        .values()
        .iter()
        .zip(a_delta.values())
        .map(|(x, y)| (x.exp() - y.exp()).norm())
        .fold(0.0, f64::max);
    let df = hnorm(&f.sub(f_delta)?, -1.0)?;
    let rhs = (df + hnorm(f, -1.0)? * sup / b_min) / b_delta_min;
    Ok(PerturbationReport {
        lhs,
        rhs,
        b_min,
        b_delta_min,
        holds: lhs <= rhs * (1.0 + PERTURBATION_SLACK),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::torus::PeriodicGrid;

    #[test]
    fn identical_problems() {
        let g = PeriodicGrid::new(1, 32).unwrap();
        let a = PeriodicField::from_fn(g, |x| 0.4 * (2.0 * PI * x[0]).cos());
        let f = PeriodicField::from_fn(g, |x| (2.0 * PI * x[0]).sin());
        let r = perturbation_check(&a, &a, &f, &f, &SolverConfig::default()).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn duality_is_sharp() {
        let g = PeriodicGrid::new(1, 32).unwrap();
        let a = PeriodicField::zeros(g);
        let f = PeriodicField::from_fn(g, |x| (2.0 * PI * x[0]).sin() + 0.5 * (6.0 * PI * x[0]).cos());
        let f2 = PeriodicField::from_fn(g, |x| 2.0 * ((2.0 * PI * x[0]).sin() + 0.5 * (6.0 * PI * x[0]).cos()));
        let r = perturbation_check(&a, &a, &f, &f2, &SolverConfig::default()).unwrap();
        let fn1 = hnorm(&f, -1.0).unwrap();
        assert!((r.lhs - fn1).abs() < 1e-9 * fn1);
        assert!((r.rhs - fn1).abs() < 1e-14 * fn1);
        assert!(r.holds);
    }
}
