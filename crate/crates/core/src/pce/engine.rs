use rayon::prelude::*;

use super::ParametricMap;
use crate::error::{Error, Result};
use crate::hermite::{hermite_table, tensor_nodes, TensorQuadrature, DEFAULT_TENSOR_BUDGET};
use crate::indices::{check_downward_closed, IndexSet, MultiIndex};
use crate::sampling::GaussianStream;

/// Nodes per work item. Fixed so that the reduction tree does not depend on
/// the number of threads.
const CHUNK: usize = 256;

/// How the Gaussian integrals `∫ u H_ν dγ` are approximated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Estimator {
    /// Tensor Gauss–Hermite with `q_j = ν̄_j + pad` nodes in dimensions used
    /// by the reference set and one node (`y_j = 0`) elsewhere.
    Tensor {
        pad: u32,
        budget: u128,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
}

impl Estimator {
    pub fn tensor(pad: u32) -> Self {
        Self::Tensor {
            pad,
            budget: DEFAULT_TENSOR_BUDGET,
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self::MonteCarlo { samples, seed }
    }
}

/// What was actually run.
#[derive(Clone, Debug, PartialEq)]
pub enum EstimatorInfo {
    Tensor { orders: Vec<usize>, nodes: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

/// Wiener–Hermite coefficients over a reference index set.
#[derive(Clone, Debug)]
pub struct PCExpansion {
    ref_set: IndexSet,
    coefficients: Vec<Vec<f64>>,
    norms: Vec<f64>,
    std_errors: Option<Vec<f64>>,
    second_moment: Option<(f64, f64)>,
    info: EstimatorInfo,
}

impl PCExpansion {
    pub fn ref_set(&self) -> &IndexSet {
        &self.ref_set
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// Coefficient vectors parallel to the reference set.
    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coefficients
    }

    /// `‖u_ν‖_X` parallel to the reference set.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn coefficient(&self, nu: &MultiIndex) -> Option<(&[f64], f64)> {
        self.ref_set
            .position(nu)
            .map(|i| (self.coefficients[i].as_slice(), self.norms[i]))
    }

    /// Monte Carlo standard errors of each `u_ν` in the `X` norm.
    pub fn std_errors(&self) -> Option<&[f64]> {
        self.std_errors.as_deref()
    }

    /// Monte Carlo estimate of `E‖u‖²_X` with its standard error.
    pub fn second_moment(&self) -> Option<(f64, f64)> {
        self.second_moment
    }

    pub fn estimator(&self) -> &EstimatorInfo {
        &self.info
    }
}

/// Per-chunk partial sums.
struct Accum {
    coef: Vec<f64>,
    sq: Vec<f64>,
    m2: f64,
    m4: f64,
}

impl Accum {
    fn new(members: usize, len: usize, second: bool) -> Self {
        Self {
            coef: vec![0.0; members * len],
            sq: if second { vec![0.0; members] } else { Vec::new() },
            m2: 0.0,
            m4: 0.0,
        }
    }

    fn add(&mut self, other: &Accum) {
        self.coef.iter_mut().zip(&other.coef).for_each(|(a, b)| *a += b);
        self.sq.iter_mut().zip(&other.sq).for_each(|(a, b)| *a += b);
        self.m2 += other.m2;
        self.m4 += other.m4;
    }
}

enum Nodes<'a> {
    Tensor(&'a TensorQuadrature),
    MonteCarlo { seed: u64, samples: usize },
}

struct Job<'a, M: ParametricMap + ?Sized> {
    map: &'a M,
    members: &'a [MultiIndex],
    kmax: Vec<u32>,
    nodes: Nodes<'a>,
    second: bool,
}

impl<M: ParametricMap + ?Sized> Job<'_, M> {
    fn total(&self) -> usize {
        match self.nodes {
            Nodes::Tensor(q) => q.len(),
            Nodes::MonteCarlo { samples, .. } => samples,
        }
    }

    fn run_chunk(&self, chunk: usize) -> Result<Accum> {
        let len = self.map.output_len();
        let dim = self.map.dim();
        let mut acc = Accum::new(self.members.len(), len, self.second);
        let start = chunk * CHUNK;
        let end = (start + CHUNK).min(self.total());
        let mut stream = match self.nodes {
            Nodes::MonteCarlo { seed, .. } => Some(GaussianStream::new(seed, chunk as u64)),
            Nodes::Tensor(_) => None,
        };
        let mc_weight = 1.0 / self.total() as f64;
        let mut y = vec![0.0; dim];
        for i in start..end {
            let w = match (&self.nodes, stream.as_mut()) {
                (Nodes::Tensor(q), _) => {
                    let (p, w) = q.node(i);
                    y[..p.len()].copy_from_slice(&p);
                    w
                }
                (Nodes::MonteCarlo { .. }, Some(s)) => {
                    s.fill(&mut y);
                    mc_weight
                }
                _ => unreachable!(),
            };
            let u = self.map.evaluate(&y).map_err(|e| Error::AtNode {
                point: y.clone(),
                source: Box::new(e),
            })?;
            let tables: Vec<Vec<f64>> = self
                .kmax
                .iter()
                .zip(&y)
                .map(|(&k, &yj)| hermite_table(k as usize, yj))
                .collect();
            let nrm2 = if self.second { self.map.norm(&u)?.powi(2) } else { 0.0 };
            for (idx, nu) in self.members.iter().enumerate() {
                let h: f64 = nu.iter().map(|(j, e)| tables[j - 1][e as usize]).product();
                let wh = w * h;
                let slot = &mut acc.coef[idx * len..(idx + 1) * len];
                slot.iter_mut().zip(&u).for_each(|(a, v)| *a += wh * v);
                if self.second {
                    acc.sq[idx] += w * h * h * nrm2;
                }
            }
            acc.m2 += w * nrm2;
            acc.m4 += w * nrm2 * nrm2;
        }
        Ok(acc)
    }

    fn run(&self) -> Result<Accum> {
        let len = self.map.output_len();
        let chunks = self.total().div_ceil(CHUNK);
        let batch = 4 * rayon::current_num_threads().max(1);
        let mut total = Accum::new(self.members.len(), len, self.second);
        let mut first = 0;
        while first < chunks {
            let last = (first + batch).min(chunks);
            let parts: Vec<Result<Accum>> = (first..last).into_par_iter().map(|c| self.run_chunk(c)).collect();
            for part in parts {
                total.add(&part?);
            }
            first = last;
        }
        Ok(total)
    }
}

/// Tensor orders for a reference set: `ν̄_j + pad` on used dimensions, 1 elsewhere.
pub fn tensor_orders(set: &IndexSet, dim: usize, pad: u32) -> Vec<usize> {
    set.max_exponents(dim)
        .iter()
        .map(|&m| if m == 0 { 1 } else { (m + pad).max(1) as usize })
        .collect()
}

fn project<M: ParametricMap + ?Sized>(map: &M, set: &IndexSet, estimator: Estimator) -> Result<PCExpansion> {
    let dim = map.dim();
    if set.is_empty() {
        return Err(Error::domain("reference set is empty"));
    }
    if set.max_dim() > dim {
        return Err(Error::domain(format!(
            "reference set uses dimension {} but the map has J = {dim}",
            set.max_dim()
        )));
    }
    let kmax = set.max_exponents(dim);
    let quad;
    let (nodes, info) = match estimator {
        Estimator::Tensor { pad, budget } => {
            let orders = tensor_orders(set, dim, pad);
            quad = tensor_nodes(&orders, budget)?;
            let info = EstimatorInfo::Tensor {
                nodes: quad.len(),
                orders,
            };
            (Nodes::Tensor(&quad), info)
        }
        Estimator::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::domain("Monte Carlo needs at least 2 samples"));
            }
            (
                Nodes::MonteCarlo { seed, samples },
                EstimatorInfo::MonteCarlo { samples, seed },
            )
        }
    };
    let second = matches!(nodes, Nodes::MonteCarlo { .. });
    let job = Job {
        map,
        members: set.members(),
        kmax,
        nodes,
        second,
    };
    let acc = job.run()?;
    let len = map.output_len();
    let coefficients: Vec<Vec<f64>> = acc.coef.chunks(len).map(<[f64]>::to_vec).collect();
    let norms = coefficients.iter().map(|c| map.norm(c)).collect::<Result<Vec<_>>>()?;
    let (std_errors, second_moment) = if second {
        let n = job.total() as f64;
        let se = acc
            .sq
            .iter()
            .zip(&norms)
            .map(|(s, m)| ((s - m * m).max(0.0) / (n - 1.0)).sqrt())
            .collect();
        let se2 = ((acc.m4 - acc.m2 * acc.m2).max(0.0) / (n - 1.0)).sqrt();
        (Some(se), Some((acc.m2, se2)))
    } else {
        (None, None)
    };
    Ok(PCExpansion {
        ref_set: set.clone(),
        coefficients,
        norms,
        std_errors,
        second_moment,
        info,
    })
}

/// Coefficients `u_ν ≈ ∫ u(y) H_ν(y) γ_J(dy)` for every `ν` in a downward
/// closed reference set. One map evaluation per node is shared by all `ν`.
pub fn compute_expansion<M: ParametricMap + ?Sized>(
    map: &M,
    ref_set: &IndexSet,
    estimator: Estimator,
) -> Result<PCExpansion> {
    if !check_downward_closed(ref_set) {
        return Err(Error::domain("reference set is not downward closed"));
    }
    project(map, ref_set, estimator)
}

/// A single coefficient: `(u_ν, ‖u_ν‖_X, standard error)`.
pub fn compute_coefficient<M: ParametricMap + ?Sized>(
    map: &M,
    nu: &MultiIndex,
    estimator: Estimator,
) -> Result<(Vec<f64>, f64, Option<f64>)> {
    let set = IndexSet::from_members(vec![nu.clone()], None)?;
    let mut exp = project(map, &set, estimator)?;
    let se = exp.std_errors.as_ref().map(|s| s[0]);
    Ok((exp.coefficients.swap_remove(0), exp.norms[0], se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pce::VectorMap;

    fn dense(v: &[u32]) -> MultiIndex {
        MultiIndex::from_dense(v)
    }

    #[test]
    fn linear_map_recovered() {
        let g = [0.5, -1.0, 2.0];
        let map = VectorMap::new(2, 3, |y: &[f64]| g.iter().map(|v| y[0] * v).collect());
        let (c, n, se) = compute_coefficient(&map, &dense(&[1]), Estimator::tensor(2)).unwrap();
        for (a, b) in c.iter().zip(&g) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!((n - (0.25f64 + 1.0 + 4.0).sqrt()).abs() < 1e-10);
        assert!(se.is_none());

        let set = IndexSet::from_members(
            vec![dense(&[0]), dense(&[1]), dense(&[0, 1]), dense(&[2]), dense(&[1, 1])],
            None,
        )
        .unwrap();
        let exp = compute_expansion(&map, &set, Estimator::tensor(2)).unwrap();
        let nonzero = exp.norms().iter().filter(|n| **n > 1e-12).count();
        assert_eq!(nonzero, 1);
        assert!(exp.coefficient(&dense(&[1])).unwrap().1 > 1.0);
    }

    #[test]
    fn constant_and_quadratic_maps() {
        let map = VectorMap::new(1, 2, |_: &[f64]| vec![3.0, 4.0]);
        let set = IndexSet::from_members(vec![MultiIndex::zero()], None).unwrap();
        let exp = compute_expansion(&map, &set, Estimator::tensor(2)).unwrap();
        assert!((exp.norms()[0] - 5.0).abs() < 1e-14);

        let sq = VectorMap::new(1, 1, |y: &[f64]| vec![y[0] * y[0]]);
        let set = IndexSet::from_members(vec![dense(&[0]), dense(&[1]), dense(&[2])], None).unwrap();
        let exp = compute_expansion(&sq, &set, Estimator::tensor(2)).unwrap();
        let c: Vec<f64> = exp.coefficients().iter().map(|v| v[0]).collect();
        assert!((c[0] - 1.0).abs() < 1e-13);
        assert!(c[1].abs() < 1e-13);
        assert!((c[2] - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn tensor_orders_follow_reference_set() {
        let set = IndexSet::from_members(vec![dense(&[0]), dense(&[1]), dense(&[2])], None).unwrap();
        assert_eq!(tensor_orders(&set, 3, 2), vec![4, 1, 1]);
    }

    #[test]
    fn monte_carlo_is_reproducible_and_consistent() {
        let map = VectorMap::new(2, 1, |y: &[f64]| vec![1.0 + y[0] + 0.5 * y[0] * y[1]]);
        let set = IndexSet::from_members(vec![dense(&[0]), dense(&[1]), dense(&[0, 1]), dense(&[1, 1])], None).unwrap();
        let est = Estimator::monte_carlo(20_000, 11);
        let a = compute_expansion(&map, &set, est).unwrap();
        let b = compute_expansion(&map, &set, est).unwrap();
        assert_eq!(a.norms(), b.norms());
        let exact = [1.0, 1.0, 0.0, 0.5];
        let se = a.std_errors().unwrap();
        for i in 0..4 {
            let err = (a.coefficients()[i][0] - exact[i]).abs();
            assert!(err <= 3.0 * se[i] + 1e-12, "ν {i}: err {err}, se {}", se[i]);
        }
        let (m2, se2) = a.second_moment().unwrap();
        assert!((m2 - 2.25).abs() < 3.0 * se2);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let map = VectorMap::new(2, 1, |y: &[f64]| vec![(0.3 * y[0] - 0.2 * y[1]).exp()]);
        let set = IndexSet::from_members(vec![dense(&[0]), dense(&[1]), dense(&[0, 1])], None).unwrap();
        let run = |threads: usize, est: Estimator| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| compute_expansion(&map, &set, est).unwrap().norms().to_vec())
        };
        for est in [Estimator::monte_carlo(3000, 5), Estimator::tensor(30)] {
            assert_eq!(run(1, est), run(3, est));
        }
    }

    #[test]
    fn errors() {
        let map = VectorMap::new(1, 1, |y: &[f64]| vec![y[0]]);
        let gap = IndexSet::from_members(vec![dense(&[0]), dense(&[2])], None).unwrap();
        assert!(compute_expansion(&map, &gap, Estimator::tensor(2)).is_err());
        let wide = IndexSet::from_members(vec![dense(&[0]), dense(&[0, 1])], None).unwrap();
        assert!(compute_expansion(&map, &wide, Estimator::tensor(2)).is_err());
        let budget = Estimator::Tensor { pad: 2, budget: 2 };
        let set = IndexSet::from_members(vec![dense(&[0]), dense(&[1])], None).unwrap();
        assert!(matches!(
            compute_expansion(&map, &set, budget),
            Err(Error::Resource { .. })
        ));
    }
}
