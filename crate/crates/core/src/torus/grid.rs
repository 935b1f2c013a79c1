use std::cell::RefCell;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Uniform grid `x_i = i/n` on the unit torus `T^d`, `d ∈ {1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicGrid {
    d: usize,
    n: usize,
}

impl PeriodicGrid {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d != 1 && d != 2 {
            return Err(Error::domain(format!(
                "spatial dimension {d} is not supported (1 or 2)"
            )));
        }
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::domain(format!("mode count {n} must be even and at least 8")));
        }
        Ok(Self { d, n })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of grid points `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinates of the flat (row-major) point index.
    pub fn point(&self, index: usize) -> Vec<f64> {
        let h = 1.0 / self.n as f64;
        match self.d {
            1 => vec![index as f64 * h],
            _ => vec![(index / self.n) as f64 * h, (index % self.n) as f64 * h],
        }
    }

    /// Signed frequency `k ∈ {−n/2, …, n/2−1}` of an FFT-ordered slot.
    pub fn freq(&self, slot: usize) -> i64 {
        let n = self.n as i64;
        let s = slot as i64;
        if s < n / 2 {
            s
        } else {
            s - n
        }
    }

    /// Wavevector of the flat spectral index.
    pub fn wavevector(&self, index: usize) -> Vec<i64> {
        match self.d {
            1 => vec![self.freq(index)],
            _ => vec![self.freq(index / self.n), self.freq(index % self.n)],
        }
    }

    /// Flat spectral index of a wavevector, if representable.
    pub fn spectral_index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.d {
            return None;
        }
        let n = self.n as i64;
        let mut idx = 0usize;
        for &kj in k {
            if kj < -n / 2 || kj >= n / 2 {
                return None;
            }
            idx = idx * self.n + kj.rem_euclid(n) as usize;
        }
        Some(idx)
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, true);
        let scale = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }

    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    fn transform(&self, data: &mut [Complex64], forward: bool) {
        debug_assert_eq!(data.len(), self.len());
        let n = self.n;
        let fft = PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            if forward {
                p.plan_fft_forward(n)
            } else {
                p.plan_fft_inverse(n)
            }
        });
        fft.process(data);
        if self.d == 2 {
            transpose(data, n);
            fft.process(data);
            transpose(data, n);
        }
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}
