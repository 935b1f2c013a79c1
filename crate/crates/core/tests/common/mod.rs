//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use lnpc_core::indices::{enumeration_cmp, MultiIndex, SurrogateWeights};
use lnpc_core::sampling::GaussianStream;
use lnpc_core::torus::{PeriodicField, PeriodicGrid};

/// Every multi-index in `dims` dimensions with `‖ν‖₁ ≤ max_norm`.
pub fn all_indices(dims: usize, max_norm: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; dims];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if pos == cur.len() {
            out.push(MultiIndex::from_dense(cur));
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, max_norm, &mut cur, &mut out);
    out
}

/// `c_ν` computed directly from its product formula.
pub fn c_direct(nu: &MultiIndex, sw: &SurrogateWeights) -> f64 {
    nu.iter()
        .map(|(j, e)| {
            let s = (sw.k() * sw.rho().rho(j).unwrap()).max(1.0);
            s * s * f64::from(e).powi(sw.order() as i32)
        })
        .product()
}

/// The first `n` indices of the brute-force sorted enumeration, plus the
/// smallest `c` among indices of norm `max_norm + 1` (validity witness).
pub fn brute_force(sw: &SurrogateWeights, dims: usize, max_norm: u32, n: usize) -> (Vec<(MultiIndex, f64)>, f64) {
    let mut all: Vec<(MultiIndex, f64)> = all_indices(dims, max_norm)
        .into_iter()
        .map(|nu| {
            let c = c_direct(&nu, sw);
            (nu, c)
        })
        .collect();
    all.sort_by(|a, b| enumeration_cmp((a.1, &a.0), (b.1, &b.0)));
    all.truncate(n);
    let next_min = all_indices(dims, max_norm + 1)
        .into_iter()
        .filter(|nu| nu.norm1() == u64::from(max_norm + 1))
        .map(|nu| c_direct(&nu, sw))
        .fold(f64::INFINITY, f64::min);
    (all, next_min)
}

/// A random smooth real field `Σ_k (α_k cos + β_k sin)(2πk·x)` with
/// coefficients decaying like `e^{−|k|}`, optionally with zero mean, scaled
/// to sup norm `amp` on the grid.
pub fn random_smooth_field(grid: PeriodicGrid, g: &mut GaussianStream, amp: f64, zero_mean: bool) -> PeriodicField {
    let kmax: i64 = 4;
    let mut terms = Vec::new();
    let range: Vec<Vec<i64>> = match grid.dim() {
        1 => (0..=kmax).map(|k| vec![k]).collect(),
        _ => (0..=kmax)
            .flat_map(|a| (-kmax..=kmax).map(move |b| vec![a, b]))
            .collect(),
    };
    for k in range {
        let norm = (k.iter().map(|v| v * v).sum::<i64>() as f64).sqrt();
        if zero_mean && norm == 0.0 {
            continue;
        }
        let damp = (-norm).exp();
        terms.push((k, damp * g.next_normal(), damp * g.next_normal()));
    }
    let raw = PeriodicField::from_fn(grid, |x| {
        terms
            .iter()
            .map(|(k, a, b)| {
                let ph = 2.0 * PI * k.iter().zip(x).map(|(k, x)| *k as f64 * x).sum::<f64>();
                a * ph.cos() + b * ph.sin()
            })
            .sum()
    });
    let sup = raw.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = if sup > 0.0 { amp / sup } else { 0.0 };
    let vals: Vec<f64> = raw.values().iter().map(|v| v.re * scale).collect();
    let f = PeriodicField::from_real_values(grid, &vals).unwrap();
    if zero_mean {
        let m = f.mean().re;
        let vals: Vec<f64> = f.values().iter().map(|v| v.re - m).collect();
        PeriodicField::from_real_values(grid, &vals).unwrap()
    } else {
        f
    }
}
