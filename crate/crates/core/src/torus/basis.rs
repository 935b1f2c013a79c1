use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use super::{PeriodicField, PeriodicGrid};
use crate::error::{Error, Result};

/// Trigonometric system on the unit torus, normalized in `Ḣ^t`.
///
/// `ψ_j = √2·cos(2πk·x)/(2π|k|)^t` for even `j` and the sine for odd `j`,
/// where `k` is the `⌈j/2⌉`-th wavevector. In one dimension that is
/// `k = ⌈j/2⌉`; in two dimensions wavevectors run over the half plane
/// (`k_1 > 0`, or `k_1 = 0 < k_2`) ordered by `|k|²`, then lexicographically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigBasis {
    t: f64,
    d: usize,
}

/// Whether a basis function is a cosine or a sine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Cos,
    Sin,
}

impl TrigBasis {
    pub fn new(t: f64, d: usize) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::domain(format!(
                "basis smoothness t = {t} must be finite and ≥ 0"
            )));
        }
        if d != 1 && d != 2 {
            return Err(Error::domain(format!(
                "spatial dimension {d} is not supported (1 or 2)"
            )));
        }
        Ok(Self { t, d })
    }

    pub fn smoothness(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn parity(j: usize) -> Parity {
        if j.is_multiple_of(2) {
            Parity::Cos
        } else {
            Parity::Sin
        }
    }

    /// Wavevectors of `ψ_1, …, ψ_count`.
    pub fn wavevectors(&self, count: usize) -> Result<Vec<Vec<i64>>> {
        let pairs = count.div_ceil(2);
        let table = match self.d {
            1 => (1..=pairs as i64).map(|k| vec![k]).collect(),
            _ => half_plane(pairs),
        };
        Ok((1..=count).map(|j| table[j.div_ceil(2) - 1].clone()).collect())
    }

    pub fn wavevector(&self, j: usize) -> Result<Vec<i64>> {
        if j == 0 {
            return Err(Error::domain("basis functions are indexed from 1"));
        }
        Ok(self.wavevectors(j)?.pop().expect("nonempty"))
    }

    /// `(2π|k|)^{−t}`.
    pub fn scale(&self, k: &[i64]) -> f64 {
        let k2: i64 = k.iter().map(|v| v * v).sum();
        (2.0 * PI * (k2 as f64).sqrt()).powf(-self.t)
    }
}

fn half_plane(count: usize) -> Vec<Vec<i64>> {
    let mut radius = 2i64;
    loop {
        let mut ks: Vec<(i64, i64)> = (0..=radius)
            .flat_map(|a| (-radius..=radius).map(move |b| (a, b)))
            .filter(|&(a, b)| a > 0 || b > 0)
            .filter(|&(a, b)| a * a + b * b <= radius * radius)
            .collect();
        if ks.len() >= count {
            ks.sort_by_key(|&(a, b)| (a * a + b * b, a, b));
            return ks.into_iter().take(count).map(|(a, b)| vec![a, b]).collect();
        }
        radius *= 2;
    }
}

/// `Σ_j coeffs_j ψ_j` as a real field.
pub fn synthesize(coeffs: &[(usize, f64)], basis: &TrigBasis, grid: PeriodicGrid) -> Result<PeriodicField> {
    if basis.dim() != grid.dim() {
        return Err(Error::domain(format!(
            "basis dimension {} differs from grid dimension {}",
            basis.dim(),
            grid.dim()
        )));
    }
    let max_j = coeffs.iter().map(|&(j, _)| j).max().unwrap_or(0);
    if coeffs.iter().any(|&(j, _)| j == 0) {
        return Err(Error::domain("basis functions are indexed from 1"));
    }
    let ks = basis.wavevectors(max_j)?;
    let mut spectrum = vec![Complex64::new(0.0, 0.0); grid.len()];
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    for &(j, c) in coeffs {
        let k = &ks[j - 1];
        let kmax = k.iter().map(|v| v.abs()).max().unwrap_or(0) as usize;
        let (plus, minus) = {
            let neg: Vec<i64> = k.iter().map(|v| -v).collect();
            match (grid.spectral_index(k), grid.spectral_index(&neg)) {
                (Some(p), Some(m)) if kmax < grid.n() / 2 => (p, m),
                _ => {
                    return Err(Error::Resolution {
                        reason: format!("basis function {j} has wavevector {k:?}"),
                        required_n: (2 * (kmax + 1)).max(8),
                    })
                }
            }
        };
        let a = c * amp * basis.scale(k);
        match TrigBasis::parity(j) {
            Parity::Cos => {
                spectrum[plus] += Complex64::new(a, 0.0);
                spectrum[minus] += Complex64::new(a, 0.0);
            }
            Parity::Sin => {
                spectrum[plus] += Complex64::new(0.0, -a);
                spectrum[minus] += Complex64::new(0.0, a);
            }
        }
    }
    PeriodicField::from_spectrum(grid, spectrum, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::hnorm;

    #[test]
    fn empty_is_zero() {
        let g = PeriodicGrid::new(1, 8).unwrap();
        let f = synthesize(&[], &TrigBasis::new(1.0, 1).unwrap(), g).unwrap();
        assert!(f.l2_norm() == 0.0);
    }

    #[test]
    fn cosine_examples() {
        let g = PeriodicGrid::new(1, 16).unwrap();
        for (t, scale) in [(0.0, 1.0), (1.0, 1.0 / (2.0 * PI))] {
            let f = synthesize(&[(2, 1.0)], &TrigBasis::new(t, 1).unwrap(), g).unwrap();
            for (i, v) in f.values().iter().enumerate() {
                let x = i as f64 / 16.0;
                let expect = 2f64.sqrt() * (2.0 * PI * x).cos() * scale;
                assert!((v.re - expect).abs() < 1e-14 && v.im == 0.0);
            }
        }
    }

    #[test]
    fn unit_norm_and_orthogonality() {
        for d in [1, 2] {
            let g = PeriodicGrid::new(d, 32).unwrap();
            let basis = TrigBasis::new(1.5, d).unwrap();
            let fields: Vec<_> = (1..=12).map(|j| synthesize(&[(j, 1.0)], &basis, g).unwrap()).collect();
            for (a, fa) in fields.iter().enumerate() {
                assert!((hnorm(fa, 1.5).unwrap() - 1.0).abs() < 1e-12, "d={d} j={}", a + 1);
                for fb in &fields[a + 1..] {
                    let ip: Complex64 = fa.spectrum().iter().zip(fb.spectrum()).map(|(x, y)| x * y.conj()).sum();
                    assert!(ip.norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn half_plane_order() {
        let b = TrigBasis::new(0.0, 2).unwrap();
        let ks = b.wavevectors(10).unwrap();
        let expect = [
            [0, 1],
            [0, 1],
            [1, 0],
            [1, 0],
            [1, -1],
            [1, -1],
            [1, 1],
            [1, 1],
            [0, 2],
            [0, 2],
        ];
        for (k, e) in ks.iter().zip(expect) {
            assert_eq!(k.as_slice(), e.as_slice());
        }
        let many = b.wavevectors(400).unwrap();
        assert_eq!(many.len(), 400);
    }

    #[test]
    fn frequency_overflow() {
        let g = PeriodicGrid::new(1, 8).unwrap();
        let b = TrigBasis::new(0.0, 1).unwrap();
        assert!(synthesize(&[(6, 1.0)], &b, g).is_ok());
        match synthesize(&[(7, 1.0)], &b, g) {
            Err(Error::Resolution { required_n, .. }) => assert_eq!(required_n, 10),
            other => panic!("expected resolution error, got {other:?}"),
        }
    }
}
