use rand::Rng;

use crate::error::{Error, Result};
use crate::indices::{beta_factor, MultiIndex};

pub const MAX_POLY_DIM: usize = 4;
pub const MAX_POLY_DEGREE: u64 = 10;

/// A polynomial `u(y) = Σ_α c_α y^α` on `R^N` in monomial form.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySpec {
    dim: usize,
    terms: Vec<(MultiIndex, f64)>,
}

impl PolySpec {
    pub fn new(dim: usize, terms: Vec<(MultiIndex, f64)>) -> Result<Self> {
        if dim == 0 || dim > MAX_POLY_DIM {
            return Err(Error::domain(format!(
                "polynomial dimension {dim} outside 1..={MAX_POLY_DIM}"
            )));
        }
        for (alpha, c) in &terms {
            if alpha.max_dim() > dim {
                return Err(Error::domain(format!("monomial {alpha} uses a dimension beyond {dim}")));
            }
            if alpha.norm1() > MAX_POLY_DEGREE {
                return Err(Error::domain(format!(
                    "monomial {alpha} exceeds total degree {MAX_POLY_DEGREE}"
                )));
            }
            if !c.is_finite() {
                return Err(Error::domain("polynomial coefficients must be finite"));
            }
        }
        Ok(Self { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(MultiIndex, f64)] {
        &self.terms
    }

    pub fn evaluate(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(alpha, c)| c * alpha.iter().map(|(j, e)| y[j - 1].powi(e as i32)).product::<f64>())
            .sum()
    }

    /// A random polynomial with `terms` monomials of total degree ≤ `degree`.
    pub fn random<R: Rng>(rng: &mut R, dim: usize, degree: u32, terms: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(terms);
        for _ in 0..terms {
            let mut budget = rng.random_range(0..=degree);
            let mut exps = vec![0u32; dim];
            while budget > 0 {
                exps[rng.random_range(0..dim)] += 1;
                budget -= 1;
            }
            out.push((MultiIndex::from_dense(&exps), rng.random_range(-2.0..2.0)));
        }
        Self::new(dim, out)
    }
}

/// Dense coefficient table over `{0..=deg}^dim`.
#[derive(Clone)]
struct Dense {
    dim: usize,
    deg: usize,
    c: Vec<f64>,
}

impl Dense {
    fn zeros(dim: usize, deg: usize) -> Self {
        Self {
            dim,
            deg,
            c: vec![0.0; (deg + 1).pow(dim as u32)],
        }
    }

    fn exps(&self, mut idx: usize) -> Vec<usize> {
        let mut e = vec![0; self.dim];
        for slot in e.iter_mut() {
            *slot = idx % (self.deg + 1);
            idx /= self.deg + 1;
        }
        e
    }

    fn index(&self, e: &[usize]) -> usize {
        e.iter().rev().fold(0, |acc, &x| acc * (self.deg + 1) + x)
    }

    fn from_poly(poly: &PolySpec) -> Self {
        let deg = poly.terms.iter().map(|(a, _)| a.norm_inf() as usize).max().unwrap_or(0);
        let mut d = Self::zeros(poly.dim, deg);
        for (alpha, c) in &poly.terms {
            let e: Vec<usize> = (1..=poly.dim).map(|j| alpha.get(j) as usize).collect();
            let i = d.index(&e);
            d.c[i] += c;
        }
        d
    }

    /// `∂^order` applied exactly to the monomial form.
    fn derivative(&self, order: &[usize]) -> Self {
        let mut out = Self::zeros(self.dim, self.deg);
        for (i, &c) in self.c.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let e = self.exps(i);
            if e.iter().zip(order).any(|(a, k)| a < k) {
                continue;
            }
            let factor: f64 = e
                .iter()
                .zip(order)
                .map(|(&a, &k)| ((a - k + 1)..=a).map(|v| v as f64).product::<f64>())
                .product();
            let shifted: Vec<usize> = e.iter().zip(order).map(|(a, k)| a - k).collect();
            let j = out.index(&shifted);
            out.c[j] += c * factor;
        }
        out
    }

    /// `E[p(y)²]` for `y ~ N(0, I)` from the moments `E[y^k] = (k−1)!!`.
    fn gaussian_norm_sq(&self) -> f64 {
        let nz: Vec<(Vec<usize>, f64)> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, &c)| (self.exps(i), c))
            .collect();
        let mut total = 0.0;
        for (a, ca) in &nz {
            for (b, cb) in &nz {
                let m: f64 = a.iter().zip(b).map(|(x, y)| gaussian_moment(x + y)).product();
                total += ca * cb * m;
            }
        }
        total
    }
}

fn gaussian_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        (1..k).step_by(2).map(|v| v as f64).product()
    }
}

fn factorial_f(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

/// `y^n = Σ_m n!/(2^m m!(n−2m)!) He_{n−2m}` with `He_k = √(k!) h_k`,
/// as `(k, coefficient of h_k)` pairs.
fn monomial_in_hermite(n: usize) -> Vec<(usize, f64)> {
    (0..=n / 2)
        .map(|m| {
            let k = n - 2 * m;
            let c = factorial_f(n) / (2f64.powi(m as i32) * factorial_f(m) * factorial_f(k));
            (k, c * factorial_f(k).sqrt())
        })
        .collect()
}

/// Exact coefficients of the polynomial in the orthonormal basis `H_ν`.
fn hermite_coefficients(poly: &PolySpec) -> Dense {
    let mono = Dense::from_poly(poly);
    let mut out = Dense::zeros(mono.dim, mono.deg);
    for (i, &c) in mono.c.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let e = mono.exps(i);
        let factors: Vec<Vec<(usize, f64)>> = e.iter().map(|&n| monomial_in_hermite(n)).collect();
        // tensor product of the per-dimension expansions
        let mut stack: Vec<(Vec<usize>, f64)> = vec![(Vec::new(), c)];
        for f in &factors {
            stack = stack
                .into_iter()
                .flat_map(|(k, w)| {
                    f.iter().map(move |&(kj, cj)| {
                        let mut k = k.clone();
                        k.push(kj);
                        (k, w * cj)
                    })
                })
                .collect();
        }
        for (k, w) in stack {
            let j = out.index(&k);
            out.c[j] += w;
        }
    }
    out
}

/// Both sides of
/// `Σ_ν β_ν(M, ϱ)|u_ν|² = Σ_{‖ν‖_∞≤M} ϱ^{2ν}/ν! ‖∂^ν u‖²_{L²_γ}`.
///
/// The left side uses the exact Hermite coefficients of `u`, the right side
/// exact derivatives of the monomial form and Gaussian moments.
pub fn weighted_identity_check(poly: &PolySpec, m: u32, rho: &[f64]) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(Error::domain("M must be at least 1"));
    }
    if rho.len() != poly.dim() {
        return Err(Error::domain(format!(
            "rho has {} entries for a polynomial in {} variables",
            rho.len(),
            poly.dim()
        )));
    }
    if rho.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::domain("rho entries must be positive"));
    }
    let herm = hermite_coefficients(poly);
    let lhs: f64 = herm
        .c
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, c)| {
            let beta: f64 = herm
                .exps(i)
                .iter()
                .zip(rho)
                .map(|(&k, r)| beta_factor(k as u32, m, r * r))
                .product();
            beta * c * c
        })
        .sum();

    let mono = Dense::from_poly(poly);
    let cap = (m as usize).min(mono.deg);
    let orders = Dense::zeros(mono.dim, cap);
    let mut rhs = 0.0;
    for i in 0..orders.c.len() {
        let nu = orders.exps(i);
        let weight: f64 = nu
            .iter()
            .zip(rho)
            .map(|(&k, r)| r.powi(2 * k as i32) / factorial_f(k))
            .product();
        rhs += weight * mono.derivative(&nu).gaussian_norm_sq();
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn poly(dim: usize, terms: &[(&[u32], f64)]) -> PolySpec {
        PolySpec::new(
            dim,
            terms.iter().map(|(e, c)| (MultiIndex::from_dense(e), *c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn square_example() {
        let (l, r) = weighted_identity_check(&poly(1, &[(&[2], 1.0)]), 2, &[1.0]).unwrap();
        assert!((l - 9.0).abs() < 1e-12 && (r - 9.0).abs() < 1e-12);
    }

    #[test]
    fn constant_example() {
        for m in [1, 3] {
            let (l, r) = weighted_identity_check(&poly(2, &[(&[0, 0], 1.0)]), m, &[0.3, 1.7]).unwrap();
            assert!((l - 1.0).abs() < 1e-15 && (r - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn product_example() {
        let (l, r) = weighted_identity_check(&poly(2, &[(&[1, 1], 1.0)]), 1, &[1.0, 1.0]).unwrap();
        assert!((l - 4.0).abs() < 1e-14 && (r - 4.0).abs() < 1e-14);
    }

    #[test]
    fn hermite_conversion() {
        // y^4 = 3 + 6 He_2 + He_4
        let h = monomial_in_hermite(4);
        assert_eq!(h[0].0, 4);
        assert!((h[0].1 - 24f64.sqrt()).abs() < 1e-12);
        assert!((h[1].1 - 6.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((h[2].1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_battery() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..50 {
            let dim = rng.random_range(1..=3);
            let p = PolySpec::random(&mut rng, dim, 6, 4).unwrap();
            let m = rng.random_range(1..=4);
            let rho: Vec<f64> = (0..dim).map(|_| rng.random_range(0.01..=2.0)).collect();
            let (l, r) = weighted_identity_check(&p, m, &rho).unwrap();
            assert!((l - r).abs() <= 1e-10 * l.abs().max(1e-300), "{p:?}: {l} vs {r}");
        }
    }

    #[test]
    fn caps_enforced() {
        assert!(PolySpec::new(5, vec![]).is_err());
        assert!(PolySpec::new(1, vec![(MultiIndex::from_dense(&[11]), 1.0)]).is_err());
        assert!(PolySpec::new(1, vec![(MultiIndex::from_dense(&[0, 1]), 1.0)]).is_err());
        let p = poly(1, &[(&[1], 1.0)]);
        assert!(weighted_identity_check(&p, 1, &[1.0, 2.0]).is_err());
    }
}
