use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use super::PeriodicGrid;
use crate::error::{Error, Result};

/// A function on the torus held as grid samples and Fourier coefficients
/// `v̂_k` with respect to `e^{2πik·x}`.
#[derive(Clone, Debug)]
pub struct PeriodicField {
    grid: PeriodicGrid,
    values: Vec<Complex64>,
    spectrum: Vec<Complex64>,
    real: bool,
}

impl PeriodicField {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self {
            grid,
            values: zero.clone(),
            spectrum: zero,
            real: true,
        }
    }

    /// Complex samples in row-major order.
    pub fn from_values(grid: PeriodicGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        let mut spectrum = values.clone();
        grid.forward(&mut spectrum);
        Ok(Self {
            grid,
            values,
            spectrum,
            real: false,
        })
    }

    /// Real samples in row-major order; the spectrum is symmetrized.
    pub fn from_real_values(grid: PeriodicGrid, values: &[f64]) -> Result<Self> {
        let values = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Ok(Self::from_values(grid, values)?.into_real())
    }

    /// Samples `f(x_i)` of a real function.
    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: PeriodicGrid, f: F) -> Self {
        let values: Vec<f64> = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self::from_real_values(grid, &values).expect("sample count matches grid")
    }

    /// Fourier coefficients in FFT order (see [`PeriodicGrid::wavevector`]).
    pub fn from_spectrum(grid: PeriodicGrid, spectrum: Vec<Complex64>, real: bool) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(Error::domain(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                spectrum.len()
            )));
        }
        let mut values = spectrum.clone();
        grid.inverse(&mut values);
        let field = Self {
            grid,
            values,
            spectrum,
            real: false,
        };
        Ok(if real { field.into_real() } else { field })
    }

    /// Drops the imaginary part of the samples and flags the field as real.
    pub fn into_real(mut self) -> Self {
        self.values.iter_mut().for_each(|v| v.im = 0.0);
        let mut spectrum = self.values.clone();
        self.grid.forward(&mut spectrum);
        // exact conjugate symmetry, including self-conjugate slots
        let n = self.grid.n() as i64;
        for idx in 0..spectrum.len() {
            let neg: Vec<i64> = self
                .grid
                .wavevector(idx)
                .iter()
                .map(|&k| if k == -n / 2 { k } else { -k })
                .collect();
            let j = self.grid.spectral_index(&neg).expect("mirrored wavevector on grid");
            if j >= idx {
                let avg = 0.5 * (spectrum[idx] + spectrum[j].conj());
                spectrum[idx] = avg;
                spectrum[j] = avg.conj();
            }
        }
        self.spectrum = spectrum;
        self.real = true;
        self
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// `v̂_k`, or `None` if `k` is not on the grid.
    pub fn coefficient(&self, k: &[i64]) -> Option<Complex64> {
        self.grid.spectral_index(k).map(|i| self.spectrum[i])
    }

    /// Real parts of the samples.
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// `max |Im v| / max |v|` (zero for the zero field).
    pub fn imag_fraction(&self) -> f64 {
        let scale = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / scale
    }

    /// Mean value `v̂_0`.
    pub fn mean(&self) -> Complex64 {
        self.spectrum[0]
    }

    /// `‖v‖_{L²}` via Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.spectrum.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `v ↦ g(v)` pointwise; the result is flagged real if `real` is set.
    pub fn map<G: Fn(Complex64) -> Complex64>(&self, g: G, real: bool) -> Self {
        let values = self.values.iter().map(|&v| g(v)).collect();
        let out = Self::from_values(self.grid, values).expect("same grid");
        if real {
            out.into_real()
        } else {
            out
        }
    }

    /// `α·self + β·other`.
    pub fn axpby(&self, alpha: Complex64, other: &PeriodicField, beta: Complex64) -> Result<Self> {
        self.same_grid(other)?;
        let spectrum = self
            .spectrum
            .iter()
            .zip(&other.spectrum)
            .map(|(&a, &b)| alpha * a + beta * b)
            .collect();
        let real = self.real && other.real && alpha.im == 0.0 && beta.im == 0.0;
        Self::from_spectrum(self.grid, spectrum, real)
    }

    pub fn sub(&self, other: &PeriodicField) -> Result<Self> {
        self.axpby(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub(crate) fn same_grid(&self, other: &PeriodicField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::domain(format!(
                "grid mismatch: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }
}

/// `‖v‖_{Ḣ^s} = (Σ_{k≠0} (2π|k|)^{2s} |v̂_k|²)^{1/2}`.
pub fn hnorm(v: &PeriodicField, s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::domain(format!("smoothness index {s} must be finite")));
    }
    if s < 0.0 && v.mean().norm() > 1e-12 * v.l2_norm() {
        return Err(Error::domain(format!(
            "negative-order norm s = {s} needs a zero-mean field (mean = {})",
            v.mean()
        )));
    }
    Ok(spectral_norm_sq(v.grid(), v.spectrum(), s).sqrt())
}

pub(crate) fn spectral_norm_sq(grid: PeriodicGrid, spectrum: &[Complex64], s: f64) -> f64 {
    spectrum
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let k2: i64 = grid.wavevector(i).iter().map(|k| k * k).sum();
            let omega = 2.0 * PI * (k2 as f64).sqrt();
            omega.powf(2.0 * s) * c.norm_sqr()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin1(grid: PeriodicGrid) -> PeriodicField {
        PeriodicField::from_fn(grid, |x| (2.0 * PI * x[0]).sin())
    }

    #[test]
    fn spectrum_of_sine() {
        let g = PeriodicGrid::new(1, 16).unwrap();
        let v = sin1(g);
        let c = v.coefficient(&[1]).unwrap();
        assert!((c - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((v.coefficient(&[-1]).unwrap() - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(v.is_real());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn norms_of_sine() {
        let g = PeriodicGrid::new(1, 32).unwrap();
        let v = sin1(g);
        let h0 = hnorm(&v, 0.0).unwrap();
        let h1 = hnorm(&v, 1.0).unwrap();
        assert!((h0 - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((h0 - 0.70711).abs() < 1e-5);
        assert!((h1 - 2.0 * PI * 0.5f64.sqrt()).abs() < 1e-13);
        assert!((h1 - 4.44288).abs() < 1e-5);
        assert!((hnorm(&v, -1.0).unwrap() - 0.5f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn constants_have_zero_seminorm() {
        let g = PeriodicGrid::new(2, 8).unwrap();
        let c = PeriodicField::from_fn(g, |_| 3.5);
        for s in [0.0, 0.5, 1.0, 2.0] {
            assert!(hnorm(&c, s).unwrap() < 1e-14);
        }
        assert!(hnorm(&c, -1.0).is_err());
    }

    #[test]
    fn h1_equals_gradient_norm_in_2d() {
        let g = PeriodicGrid::new(2, 16).unwrap();
        // v = cos(2π(x + 2y)): |∇v|² = 4π²·5·sin², mean 2π²·5
        let v = PeriodicField::from_fn(g, |x| (2.0 * PI * (x[0] + 2.0 * x[1])).cos());
        let expect = (2.0 * PI * PI * 5.0f64).sqrt();
        assert!((hnorm(&v, 1.0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn linear_combination_and_mismatch() {
        let g = PeriodicGrid::new(1, 8).unwrap();
        let v = sin1(g);
        let z = v.sub(&v).unwrap();
        assert!(z.l2_norm() < 1e-15);
        let other = sin1(PeriodicGrid::new(1, 16).unwrap());
        assert!(v.sub(&other).is_err());
    }
}
