//! Normalized probabilists' Hermite polynomials and Gauss–Hermite rules for
//! the standard Gaussian measure.
//!
//! `h_k` is orthonormal in `L²(N(0,1))`; rules integrate against the
//! probability measure, so their weights sum to one.

use crate::error::{Error, Result};
use crate::indices::MultiIndex;

/// Largest node count accepted by [`gauss_hermite_rule`].
pub const MAX_RULE_NODES: usize = 64;

/// Default cap on the number of tensor nodes.
pub const DEFAULT_TENSOR_BUDGET: u128 = 20_000_000;

/// `h_k(y)` via `h_{k+1} = (y h_k − √k h_{k−1}) / √(k+1)`.
pub fn hermite_eval(k: usize, y: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, y);
    for i in 1..k {
        let next = (y * cur - (i as f64).sqrt() * prev) / ((i + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// `[h_0(y), ..., h_kmax(y)]`.
pub fn hermite_table(kmax: usize, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax >= 1 {
        out.push(y);
    }
    for i in 1..kmax {
        let next = (y * out[i] - (i as f64).sqrt() * out[i - 1]) / ((i + 1) as f64).sqrt();
        out.push(next);
    }
    out
}

/// `H_ν(y) = Π_{j∈supp ν} h_{ν_j}(y_j)`.
pub fn hermite_multi_eval(nu: &MultiIndex, y: &[f64]) -> Result<f64> {
    if nu.max_dim() > y.len() {
        return Err(Error::domain(format!(
            "multi-index uses dimension {} but the point has {} coordinates",
            nu.max_dim(),
            y.len()
        )));
    }
    Ok(nu.iter().map(|(j, e)| hermite_eval(e as usize, y[j - 1])).product())
}

/// A Gauss–Hermite rule for `N(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussHermiteRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermiteRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in increasing order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_i w_i f(y_i)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&y, &w)| w * f(y)).sum()
    }
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix (implicit QL with Wilkinson-type shifts).
///
/// `diag` has length n; `off[i]` couples rows i and i+1 (length n−1).
fn tridiagonal_eigen(mut diag: Vec<f64>, off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z0 = vec![0.0; n];
    z0[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Internal(format!(
                    "tridiagonal eigen-iteration did not converge for row {l}"
                )));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let zf = z0[i + 1];
                z0[i + 1] = s * z0[i] + c * zf;
                z0[i] = c * z0[i] - s * zf;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((diag, z0))
}

/// The `n`-node Gauss–Hermite rule (Golub–Welsch).
///
/// Nodes are the eigenvalues of the Jacobi matrix with zero diagonal and
/// off-diagonal `√1, ..., √(n−1)`; weights are the squared first
/// components of the normalized eigenvectors.
pub fn gauss_hermite_rule(n: usize) -> Result<GaussHermiteRule> {
    if n == 0 || n > MAX_RULE_NODES {
        return Err(Error::domain(format!(
            "Gauss-Hermite node count {n} must lie in 1..={MAX_RULE_NODES}"
        )));
    }
    let off: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    let (vals, first) = tridiagonal_eigen(vec![0.0; n], &off)?;
    let mut pairs: Vec<(f64, f64)> = vals.into_iter().zip(first.into_iter().map(|z| z * z)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    // enforce the exact symmetry of the rule
    let mut nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    for i in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[n - 1 - i]);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ok(GaussHermiteRule { nodes, weights })
}

/// A tensor-product Gauss–Hermite rule with per-dimension orders.
///
/// Nodes are visited in odometer order with the last dimension fastest.
#[derive(Clone, Debug)]
pub struct TensorQuadrature {
    rules: Vec<GaussHermiteRule>,
    total: usize,
}

impl TensorQuadrature {
    pub fn orders(&self) -> Vec<usize> {
        self.rules.iter().map(GaussHermiteRule::len).collect()
    }

    pub fn dims(&self) -> usize {
        self.rules.len()
    }

    /// Total node count `Π q_j`.
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn rule(&self, j: usize) -> &GaussHermiteRule {
        &self.rules[j]
    }

    /// Per-dimension node indices of the `index`-th tensor node.
    pub fn multi_index_of(&self, mut index: usize, out: &mut [usize]) {
        for (slot, rule) in out.iter_mut().zip(&self.rules).rev() {
            *slot = index % rule.len();
            index /= rule.len();
        }
    }

    /// The `index`-th tensor node and its product weight.
    pub fn node(&self, index: usize) -> (Vec<f64>, f64) {
        let mut idx = vec![0; self.rules.len()];
        self.multi_index_of(index, &mut idx);
        let mut weight = 1.0;
        let point = idx
            .iter()
            .zip(&self.rules)
            .map(|(&i, rule)| {
                weight *= rule.weights()[i];
                rule.nodes()[i]
            })
            .collect();
        (point, weight)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<f64>, f64)> + '_ {
        (0..self.total).map(move |i| self.node(i))
    }
}

/// Tensor rule with the given orders, rejecting products above `budget`.
pub fn tensor_nodes(orders: &[usize], budget: u128) -> Result<TensorQuadrature> {
    if orders.contains(&0) {
        return Err(Error::domain("tensor orders must be at least 1"));
    }
    let product = orders.iter().fold(1u128, |acc, &q| acc.saturating_mul(q as u128));
    if product > budget {
        return Err(Error::Resource {
            what: format!("tensor node count for orders {orders:?}"),
            requested: product,
            budget,
        });
    }
    let rules = orders
        .iter()
        .map(|&q| gauss_hermite_rule(q))
        .collect::<Result<Vec<_>>>()?;
    Ok(TensorQuadrature {
        rules,
        total: product as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_factorial_odd(k: u32) -> f64 {
        // (k-1)!! for even k
        (1..k).step_by(2).map(f64::from).product()
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite_eval(0, 3.7), 1.0);
        assert!((hermite_eval(2, 0.0) + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((hermite_eval(3, 1.0) + 2.0 / 6f64.sqrt()).abs() < 1e-15);
        let y = 0.37;
        let table = hermite_table(6, y);
        for (k, v) in table.iter().enumerate() {
            assert_eq!(*v, hermite_eval(k, y));
        }
        let h4 = (y.powi(4) - 6.0 * y * y + 3.0) / 24f64.sqrt();
        assert!((table[4] - h4).abs() < 1e-14);
    }

    #[test]
    fn multi_eval() {
        let y = [0.0, 3.0];
        assert_eq!(hermite_multi_eval(&MultiIndex::zero(), &y).unwrap(), 1.0);
        let v = hermite_multi_eval(&MultiIndex::from_dense(&[2, 1]), &y).unwrap();
        assert!((v + 3.0 / 2f64.sqrt()).abs() < 1e-14);
        assert!((v + 2.12132).abs() < 1e-5);
        assert_eq!(hermite_multi_eval(&MultiIndex::unit(1), &[0.25]).unwrap(), 0.25);
        assert!(hermite_multi_eval(&MultiIndex::unit(3), &y).is_err());
    }

    #[test]
    fn small_rules() {
        let r = gauss_hermite_rule(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert_eq!(r.weights(), &[1.0]);

        let r = gauss_hermite_rule(2).unwrap();
        assert!((r.nodes()[0] + 1.0).abs() < 1e-14 && (r.nodes()[1] - 1.0).abs() < 1e-14);
        assert!(r.weights().iter().all(|w| (w - 0.5).abs() < 1e-14));

        let r = gauss_hermite_rule(3).unwrap();
        let s3 = 3f64.sqrt();
        for (x, e) in r.nodes().iter().zip([-s3, 0.0, s3]) {
            assert!((x - e).abs() < 1e-12);
        }
        for (w, e) in r.weights().iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
            assert!((w - e).abs() < 1e-12);
        }
        assert!((r.integrate(|y| y.powi(4)) - 3.0).abs() < 1e-12);
        assert!(gauss_hermite_rule(0).is_err());
        assert!(gauss_hermite_rule(65).is_err());
    }

    #[test]
    fn moment_exactness() {
        for n in [4, 9, 16, 33, 64] {
            let r = gauss_hermite_rule(n).unwrap();
            assert!((r.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for k in (0..=(2 * n - 1) as u32).step_by(2).take(12) {
                let m = r.integrate(|y| y.powi(k as i32));
                let exact = double_factorial_odd(k);
                assert!(((m - exact) / exact).abs() < 1e-12, "n={n} k={k}: {m} vs {exact}");
            }
            assert!(r.integrate(|y| y.powi(5)).abs() < 1e-12);
        }
    }

    #[test]
    fn orthonormal_gram_matrix() {
        let r = gauss_hermite_rule(16).unwrap();
        for j in 0..=10 {
            for k in 0..=10 {
                let g = r.integrate(|y| hermite_eval(j, y) * hermite_eval(k, y));
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((g - expect).abs() < 1e-10, "G[{j}][{k}] = {g}");
            }
        }
    }

    #[test]
    fn recurrence_stays_bounded() {
        let mut worst: f64 = 0.0;
        for k in 0..=200 {
            for i in 0..=200 {
                let y = -10.0 + 0.1 * i as f64;
                let v = hermite_eval(k, y) * (-y * y / 4.0).exp();
                assert!(v.is_finite());
                worst = worst.max(v.abs());
            }
        }
        assert!(worst < 10.0, "worst scaled value {worst}");
    }

    #[test]
    fn tensor_rules() {
        let t = tensor_nodes(&[1, 1, 1], 10).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.node(0), (vec![0.0, 0.0, 0.0], 1.0));

        let t = tensor_nodes(&[2, 2], 10).unwrap();
        let nodes: Vec<_> = t.iter().collect();
        assert_eq!(nodes.len(), 4);
        for (p, w) in &nodes {
            assert!(p.iter().all(|x| (x.abs() - 1.0).abs() < 1e-14));
            assert!((w - 0.25).abs() < 1e-14);
        }
        // last dimension fastest
        assert!(nodes[0].0[1] < 0.0 && nodes[1].0[1] > 0.0 && nodes[0].0[0] == nodes[1].0[0]);

        let t = tensor_nodes(&[3, 1], 10).unwrap();
        let nodes: Vec<_> = t.iter().collect();
        let s3 = 3f64.sqrt();
        assert!((nodes[0].0[0] + s3).abs() < 1e-12 && (nodes[0].1 - 1.0 / 6.0).abs() < 1e-12);
        assert!(nodes[1].0[0].abs() < 1e-12 && (nodes[1].1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((nodes[2].0[0] - s3).abs() < 1e-12 && (nodes[2].1 - 1.0 / 6.0).abs() < 1e-12);
        let total: f64 = nodes.iter().map(|n| n.1).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tensor_budget() {
        match tensor_nodes(&[10, 10, 10], 999) {
            Err(Error::Resource { requested, .. }) => assert_eq!(requested, 1000),
            other => panic!("expected resource error, got {other:?}"),
        }
        assert!(tensor_nodes(&[2, 0], 10).is_err());
    }
}
