//! Weight sequences attached to multi-indices.
//!
//! * `ϱ_j` from the decay sequence `b` (the admissible weights),
//! * `β_ν(M, ϱ) = Π_j Σ_{ℓ≤M} C(ν_j, ℓ) ϱ_j^{2ℓ}`,
//! * the surrogate `c_ν = Π_{j∈supp ν} max{1, Kϱ_j}² ν_j^M` with its
//!   constants `K` and `C_β`.

use std::f64::consts::E;

use super::MultiIndex;
use crate::error::{Error, Result};

/// Largest `M` for which `M!` is computed exactly in `u64`.
pub const MAX_ORDER: u32 = 20;

/// `n!` for `n ≤ 20`.
pub fn factorial(n: u32) -> Result<u64> {
    if n > MAX_ORDER {
        return Err(Error::domain(format!("factorial order {n} exceeds {MAX_ORDER}")));
    }
    Ok((1..=u64::from(n)).product())
}

/// Riemann zeta function for real `s > 1` (Euler–Maclaurin summation).
pub fn riemann_zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta requires s > 1");
    const N: usize = 24;
    // B_{2i} / (2i)!
    const B_OVER_FACT: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let head: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    let n = N as f64;
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising product s (s+1) ... (s+2i-2)
    let mut rising = s;
    let mut npow = n.powf(-s - 1.0);
    for (i, c) in B_OVER_FACT.iter().enumerate() {
        tail += c * rising * npow;
        let k = 2.0 * i as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        npow /= n * n;
    }
    head + tail
}

/// The decay sequence `b`.
#[derive(Clone, Debug, PartialEq)]
pub enum DecaySequence {
    /// `b_j = c0 · j^{-θ}`.
    PowerLaw { c0: f64, theta: f64 },
    /// `b_1, ..., b_L` followed by zeros.
    Explicit(Vec<f64>),
}

/// Input data `(b, p, ξ, M)` for the admissible weight sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightModel {
    b: DecaySequence,
    p: f64,
    xi: f64,
    m: u32,
    b_norm: f64,
}

impl WeightModel {
    pub fn new(b: DecaySequence, p: f64, xi: f64, m: u32) -> Result<Self> {
        if !(p > 0.0 && p < 2.0) {
            return Err(Error::domain(format!(
                "summability exponent p = {p} must lie in (0, 2)"
            )));
        }
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::domain(format!("xi = {xi} must be finite and nonnegative")));
        }
        let m_min = (2.0 / p).ceil() as u32;
        if m < m_min {
            return Err(Error::domain(format!("M = {m} must be at least ceil(2/p) = {m_min}")));
        }
        if m > MAX_ORDER {
            return Err(Error::domain(format!("M = {m} exceeds {MAX_ORDER}")));
        }
        match &b {
            DecaySequence::PowerLaw { c0, theta } => {
                if !(*c0 > 0.0 && c0.is_finite()) {
                    return Err(Error::domain("power-law prefactor c0 must be positive"));
                }
                if !(*theta > 0.5) {
                    return Err(Error::domain("power-law exponent theta must exceed 1/2"));
                }
                if !(p * theta > 1.0) {
                    return Err(Error::domain(format!(
                        "p * theta = {} must exceed 1 for b to be p-summable",
                        p * theta
                    )));
                }
            }
            DecaySequence::Explicit(values) => {
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::domain("explicit b entries must be finite and nonnegative"));
                }
                if !values.iter().any(|v| *v > 0.0) {
                    return Err(Error::domain("explicit b needs at least one positive entry"));
                }
            }
        }
        let b_norm = match &b {
            DecaySequence::PowerLaw { c0, theta } => c0 * riemann_zeta(p * theta).powf(1.0 / p),
            DecaySequence::Explicit(v) => v.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p),
        };
        Ok(Self { b, p, xi, m, b_norm })
    }

    pub fn power_law(c0: f64, theta: f64, p: f64, xi: f64, m: u32) -> Result<Self> {
        Self::new(DecaySequence::PowerLaw { c0, theta }, p, xi, m)
    }

    pub fn explicit(values: Vec<f64>, p: f64, xi: f64, m: u32) -> Result<Self> {
        Self::new(DecaySequence::Explicit(values), p, xi, m)
    }

    pub fn decay(&self) -> &DecaySequence {
        &self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    /// `b_j` (zero beyond an explicit list).
    pub fn b(&self, j: usize) -> f64 {
        assert!(j >= 1, "dimensions are 1-based");
        match &self.b {
            DecaySequence::PowerLaw { c0, theta } => c0 * (j as f64).powf(-theta),
            DecaySequence::Explicit(v) => v.get(j - 1).copied().unwrap_or(0.0),
        }
    }

    /// Number of dimensions with `b_j > 0` counted from `j = 1` up to the
    /// first zero; `None` for an infinite power law.
    pub fn active_prefix(&self) -> Option<usize> {
        match &self.b {
            DecaySequence::PowerLaw { .. } => None,
            DecaySequence::Explicit(v) => Some(v.iter().take_while(|x| **x > 0.0).count()),
        }
    }

    /// `‖b‖_{ℓ^p}`: closed form `c0 ζ(pθ)^{1/p}` for a power law.
    pub fn b_norm(&self) -> f64 {
        self.b_norm
    }

    /// `ξ² / (8 e M!)`, the value of `Σ_j ϱ_j² b_j²`.
    pub fn weighted_budget(&self) -> f64 {
        let mfact = factorial(self.m).expect("validated order") as f64;
        self.xi * self.xi / (8.0 * E * mfact)
    }

    /// Returns a copy with an explicit `b` list sorted in decreasing order,
    /// which makes the resulting `ϱ` nondecreasing.
    pub fn sorted_descending(&self) -> Self {
        let mut out = self.clone();
        if let DecaySequence::Explicit(v) = &mut out.b {
            v.sort_by(|a, b| b.total_cmp(a));
        }
        out
    }
}

/// `ϱ_j` with `ϱ_j² b_j² = (b_j/‖b‖_{ℓ^p})^p · ξ²/(8eM!)`.
pub fn rho_from_b(model: &WeightModel, j: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::domain("dimensions are 1-based"));
    }
    let bj = model.b(j);
    if bj <= 0.0 {
        return Err(Error::domain(format!("b_{j} = 0: rho_{j} is undefined")));
    }
    let ratio = (bj / model.b_norm()).powf(model.p);
    Ok((ratio * model.weighted_budget()).sqrt() / bj)
}

/// A weight sequence `ϱ`, either derived from a [`WeightModel`] or given
/// explicitly.
#[derive(Clone, Debug, PartialEq)]
pub enum AdmissibleWeights {
    Model(WeightModel),
    Explicit(Vec<f64>),
}

impl AdmissibleWeights {
    pub fn from_model(model: WeightModel) -> Self {
        Self::Model(model)
    }

    pub fn explicit(rho: Vec<f64>) -> Result<Self> {
        if rho.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::domain("explicit rho entries must be finite and nonnegative"));
        }
        Ok(Self::Explicit(rho))
    }

    /// `ϱ_j`.
    pub fn rho(&self, j: usize) -> Result<f64> {
        match self {
            Self::Model(m) => rho_from_b(m, j),
            Self::Explicit(v) => {
                if j == 0 || j > v.len() {
                    return Err(Error::domain(format!(
                        "rho_{j} requested beyond the explicit list of length {}",
                        v.len()
                    )));
                }
                Ok(v[j - 1])
            }
        }
    }

    /// Number of dimensions for which `ϱ_j` is defined; `None` if unbounded.
    pub fn available_dims(&self) -> Option<usize> {
        match self {
            Self::Model(m) => m.active_prefix(),
            Self::Explicit(v) => Some(v.len()),
        }
    }

    /// `ϱ_1, ..., ϱ_n` (truncated to the available dimensions).
    pub fn values(&self, n: usize) -> Result<Vec<f64>> {
        let n = self.available_dims().map_or(n, |a| a.min(n));
        (1..=n).map(|j| self.rho(j)).collect()
    }

    /// `Σ_j ϱ_j² b_j²` over the first `n` dimensions (requires a model).
    pub fn weighted_sum(&self, n: usize) -> Option<f64> {
        let Self::Model(m) = self else { return None };
        let n = m.active_prefix().map_or(n, |a| a.min(n));
        Some(
            (1..=n)
                .map(|j| {
                    let r = rho_from_b(m, j).expect("b_j > 0 on active prefix");
                    r * r * m.b(j) * m.b(j)
                })
                .sum(),
        )
    }

    /// Power-law models produce nondecreasing `ϱ`.
    pub fn is_monotone_by_construction(&self) -> bool {
        matches!(self, Self::Model(m) if matches!(m.decay(), DecaySequence::PowerLaw { .. }))
    }
}

/// Binomial coefficient `C(n, k)` as a float; zero for `k > n`.
fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `β_ν(M, ϱ) = Π_{j∈supp ν} Σ_{ℓ=0}^{M} C(ν_j, ℓ) ϱ_j^{2ℓ}`.
pub fn beta_weight(nu: &MultiIndex, m: u32, rho: &AdmissibleWeights) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("beta weight requires M >= 1"));
    }
    let mut beta = 1.0;
    for (j, e) in nu.iter() {
        let r2 = rho.rho(j)?.powi(2);
        beta *= beta_factor(e, m, r2);
    }
    Ok(beta)
}

/// One factor `Σ_{ℓ≤M} C(n, ℓ) r2^ℓ` of `β`.
pub(crate) fn beta_factor(n: u32, m: u32, r2: f64) -> f64 {
    let mut pow = 1.0;
    let mut sum = 0.0;
    for l in 0..=m.min(n) {
        sum += binomial(n, l) * pow;
        pow *= r2;
    }
    sum
}

/// `c_ν = Π_{j∈supp ν} max{1, Kϱ_j}² ν_j^M`.
pub fn c_weight(nu: &MultiIndex, m: u32, k: f64, rho: &AdmissibleWeights) -> Result<f64> {
    let mut c = 1.0;
    for (j, e) in nu.iter() {
        let scale = (k * rho.rho(j)?).max(1.0);
        c *= scale * scale * f64::from(e).powi(m as i32);
    }
    Ok(c)
}

/// The surrogate-weight data `(K, C_β, M, ϱ)`.
///
/// `C_β` can be far below the smallest positive double for realistic
/// models (it is a product of many factors `(Kϱ_j)² ≪ 1`), so it is held
/// as its natural logarithm.
#[derive(Clone, Debug)]
pub struct SurrogateWeights {
    k: f64,
    ln_c_beta: f64,
    m: u32,
    rho: AdmissibleWeights,
    scan_limit: usize,
    warning: Option<String>,
}

impl SurrogateWeights {
    /// Builds surrogate weights with a caller-chosen `K`; `C_β` is the
    /// product of `(Kϱ_j)²` over scanned `j` with `Kϱ_j < 1`.
    pub fn from_parts(k: f64, m: u32, rho: AdmissibleWeights, scan_limit: usize) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::domain("K must be positive"));
        }
        if m == 0 || m > MAX_ORDER {
            return Err(Error::domain(format!("M = {m} must lie in 1..={MAX_ORDER}")));
        }
        let values = rho.values(scan_limit)?;
        let ln_c_beta = values
            .iter()
            .map(|r| k * r)
            .filter(|kr| *kr < 1.0)
            .map(|kr| 2.0 * kr.ln())
            .sum();
        Ok(Self {
            k,
            ln_c_beta,
            m,
            rho,
            scan_limit,
            warning: None,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    /// `ln C_β`.
    pub fn ln_c_beta(&self) -> f64 {
        self.ln_c_beta
    }

    /// `C_β` (may underflow to zero).
    pub fn c_beta(&self) -> f64 {
        self.ln_c_beta.exp()
    }

    pub fn rho(&self) -> &AdmissibleWeights {
        &self.rho
    }

    pub fn scan_limit(&self) -> usize {
        self.scan_limit
    }

    /// Set when the minimum of `ϱ` may lie beyond the scanned range.
    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    /// `c_ν` under these weights.
    pub fn c(&self, nu: &MultiIndex) -> Result<f64> {
        c_weight(nu, self.m, self.k, &self.rho)
    }

    /// `max{1, Kϱ_j}`.
    pub fn scaled(&self, j: usize) -> Result<f64> {
        Ok((self.k * self.rho.rho(j)?).max(1.0))
    }
}

/// `K = (ϱ₀^{2M} / (M! M^{2M}))^{1/2}` with `ϱ₀ = min{1, min_{j≤scan} ϱ_j}`,
/// and `C_β = Π_{j≤scan, Kϱ_j<1} (Kϱ_j)²`.
pub fn surrogate_constants(m: u32, rho: &AdmissibleWeights, scan_limit: usize) -> Result<SurrogateWeights> {
    if scan_limit == 0 {
        return Err(Error::domain("scan limit must be positive"));
    }
    let values = rho.values(scan_limit)?;
    if values.is_empty() {
        return Err(Error::domain("no dimensions available for rho"));
    }
    let rho0 = values.iter().copied().fold(1.0_f64, f64::min);
    let mfact = factorial(m)? as f64;
    let mf = f64::from(m);
    // (ϱ₀^{2M} / (M! M^{2M}))^{1/2} = ϱ₀^M / (sqrt(M!) M^M)
    let k = rho0.powi(m as i32) / (mfact.sqrt() * mf.powi(m as i32));
    let mut out = SurrogateWeights::from_parts(k, m, rho.clone(), scan_limit)?;
    let truncated = rho.available_dims().is_none_or(|a| a > scan_limit);
    if truncated && !rho.is_monotone_by_construction() {
        let monotone = values.windows(2).all(|w| w[0] <= w[1]);
        if !monotone {
            out.warning = Some(format!(
                "rho is not monotone within the first {scan_limit} dimensions; \
                 its minimum may lie beyond the scan limit"
            ));
        }
    }
    Ok(out)
}
