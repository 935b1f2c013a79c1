use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use super::field::spectral_norm_sq;
use super::{PeriodicField, PeriodicGrid};
use crate::error::{Error, Result};

/// Step size of the residual iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Relaxation {
    /// Minimizes `max_i |1 − ω e^{a(x_i)}|` over real `ω > 0`; equals
    /// `2/(m_min + m_max)` for real coefficients.
    Automatic,
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub rel_tol: f64,
    pub max_iter: usize,
    pub relaxation: Relaxation,
    /// Apply the 2/3 rule to the pointwise product `e^a ∇u`.
    pub dealias: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_iter: 10_000,
            relaxation: Relaxation::Automatic,
            dealias: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain(format!("rel_tol = {} must be positive", self.rel_tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::domain("max_iter must be at least 1"));
        }
        if let Relaxation::Fixed(w) = self.relaxation {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::domain(format!("relaxation ω = {w} must be positive")));
            }
        }
        Ok(())
    }
}

/// Result of [`solve_diffusion_detailed`].
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub u: PeriodicField,
    pub iterations: usize,
    /// Final `‖f − Au‖_{Ḣ^{−1}} / ‖f‖_{Ḣ^{−1}}`.
    pub residual: f64,
    pub omega: f64,
    /// `max |Im u| / max |u|` before a real result is projected.
    pub imag_fraction: f64,
}

/// The discrete operator `u ↦ −Σ_i D_i(b D_i u)` with spectral derivatives
/// whose Nyquist mode is zeroed.
struct Operator {
    grid: PeriodicGrid,
    b: Vec<Complex64>,
    dealias: bool,
}

impl Operator {
    fn new(grid: PeriodicGrid, b: Vec<Complex64>, dealias: bool) -> Self {
        let mut op = Self { grid, b, dealias };
        if dealias {
            let mut spec = op.b.clone();
            grid.forward(&mut spec);
            op.truncate(&mut spec);
            grid.inverse(&mut spec);
            op.b = spec;
        }
        op
    }

    fn truncate(&self, spec: &mut [Complex64]) {
        let cut = self.grid.n() as f64 / 3.0;
        for (i, c) in spec.iter_mut().enumerate() {
            if self.grid.wavevector(i).iter().any(|&k| k.abs() as f64 > cut) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    fn derivative_symbol(&self, index: usize, axis: usize) -> Complex64 {
        let k = self.grid.wavevector(index)[axis];
        if k == -(self.grid.n() as i64) / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, 2.0 * PI * k as f64)
        }
    }

    fn apply(&self, u_hat: &[Complex64]) -> Vec<Complex64> {
        let grid = self.grid;
        let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
        for axis in 0..grid.dim() {
            let mut g: Vec<Complex64> = u_hat
                .iter()
                .enumerate()
                .map(|(i, &c)| self.derivative_symbol(i, axis) * c)
                .collect();
            if self.dealias {
                self.truncate(&mut g);
            }
            grid.inverse(&mut g);
            g.iter_mut().zip(&self.b).for_each(|(v, &b)| *v *= b);
            grid.forward(&mut g);
            if self.dealias {
                self.truncate(&mut g);
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o -= self.derivative_symbol(i, axis) * g[i];
            }
        }
        out
    }

    /// Symbol of `Σ_i D_i^* D_i`, zero on the kernel.
    fn laplace_symbol(&self, index: usize) -> f64 {
        (0..self.grid.dim())
            .map(|axis| self.derivative_symbol(index, axis).norm_sqr())
            .sum()
    }
}

/// `−∇·(e^a ∇u)` computed pseudo-spectrally without dealiasing.
pub fn apply_operator(a: &PeriodicField, u: &PeriodicField) -> Result<PeriodicField> {
    apply_operator_with(a, u, false)
}

pub fn apply_operator_with(a: &PeriodicField, u: &PeriodicField, dealias: bool) -> Result<PeriodicField> {
    a.same_grid(u)?;
    let b = a.values().iter().map(|v| v.exp()).collect();
    let op = Operator::new(a.grid(), b, dealias);
    PeriodicField::from_spectrum(a.grid(), op.apply(u.spectrum()), a.is_real() && u.is_real())
}

/// Best real `ω > 0` for the contraction bound `max_i |1 − ω b_i|`.
fn automatic_omega(b: &[Complex64]) -> f64 {
    let worst = |w: f64| {
        b.iter()
            .map(|z| (Complex64::new(1.0, 0.0) - w * z).norm())
            .fold(0.0, f64::max)
    };
    let real = b.iter().all(|z| z.im == 0.0);
    if real {
        let lo = b.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let hi = b.iter().map(|z| z.re).fold(0.0, f64::max);
        return 2.0 / (lo + hi);
    }
    // each |1 − ωb|² is a convex quadratic in ω, so the max is unimodal
    let upper = b
        .iter()
        .map(|z| 2.0 * z.re / z.norm_sqr())
        .fold(f64::INFINITY, f64::min);
    let (mut lo, mut hi) = (0.0, upper);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if worst(m1) <= worst(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// Zero-mean solution of `−∇·(e^a ∇u) = f`.
pub fn solve_diffusion(a: &PeriodicField, f: &PeriodicField, cfg: &SolverConfig) -> Result<PeriodicField> {
    solve_diffusion_detailed(a, f, cfg).map(|o| o.u)
}

/// Damped Richardson iteration preconditioned by the inverse Laplacian.
///
/// Modes in the kernel of the discrete operator (the mean, and in 2D also
/// the pure Nyquist modes) are removed from `f` and from `u`.
pub fn solve_diffusion_detailed(a: &PeriodicField, f: &PeriodicField, cfg: &SolverConfig) -> Result<SolveOutcome> {
    cfg.validate()?;
    a.same_grid(f)?;
    let grid = a.grid();
    if f.mean().norm() > 1e-12 * f.l2_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::domain(format!(
            "right-hand side must have zero mean (mean = {})",
            f.mean()
        )));
    }
    let b: Vec<Complex64> = a.values().iter().map(|v| v.exp()).collect();
    let (index, min_re) = b
        .iter()
        .enumerate()
        .map(|(i, z)| {
            (
                i,
                if z.re.is_finite() && z.im.is_finite() {
                    z.re
                } else {
                    f64::NAN
                },
            )
        })
        .fold(
            (0, f64::INFINITY),
            |acc, (i, r)| if !(r >= acc.1) { (i, r) } else { acc },
        );
    if !(min_re > 0.0) {
        return Err(Error::Degenerate {
            min_real_part: min_re,
            index,
        });
    }
    let omega = match cfg.relaxation {
        Relaxation::Automatic => automatic_omega(&b),
        Relaxation::Fixed(w) => w,
    };
    let op = Operator::new(grid, b, cfg.dealias);
    let precond: Vec<f64> = (0..grid.len())
        .map(|i| {
            let s = op.laplace_symbol(i);
            if s > 0.0 {
                1.0 / s
            } else {
                0.0
            }
        })
        .collect();
    let rhs: Vec<Complex64> = f
        .spectrum()
        .iter()
        .zip(&precond)
        .map(|(&c, &p)| if p > 0.0 { c } else { Complex64::new(0.0, 0.0) })
        .collect();
    let f_norm = spectral_norm_sq(grid, &rhs, -1.0).sqrt();
    let real = a.is_real() && f.is_real();
    let mut u_hat = vec![Complex64::new(0.0, 0.0); grid.len()];
    let finish = |u_hat: Vec<Complex64>, iterations: usize, residual: f64| -> Result<SolveOutcome> {
        let raw = PeriodicField::from_spectrum(grid, u_hat, false)?;
        let imag_fraction = raw.imag_fraction();
        let u = if real { raw.into_real() } else { raw };
        Ok(SolveOutcome {
            u,
            iterations,
            residual,
            omega,
            imag_fraction,
        })
    };
    if f_norm == 0.0 {
        return finish(u_hat, 0, 0.0);
    }

    let mut residual = f64::INFINITY;
    for iter in 0..=cfg.max_iter {
        let au = op.apply(&u_hat);
        let r: Vec<Complex64> = rhs.iter().zip(&au).map(|(f, a)| f - a).collect();
        residual = spectral_norm_sq(grid, &r, -1.0).sqrt() / f_norm;
        if !residual.is_finite() {
            break;
        }
        if residual <= cfg.rel_tol {
            return finish(u_hat, iter, residual);
        }
        if iter == cfg.max_iter {
            break;
        }
        for ((u, r), p) in u_hat.iter_mut().zip(&r).zip(&precond) {
            *u += omega * p * r;
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual,
    })
}
