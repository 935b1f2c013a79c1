use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};

use super::{MultiIndex, SurrogateWeights};
use crate::error::{Error, Result};

/// An ordered set of multi-indices with their surrogate weights.
///
/// Sets produced by [`build_index_set`] are listed in enumeration order
/// (nondecreasing `c_ν`) and are downward closed.
#[derive(Clone, Debug)]
pub struct IndexSet {
    members: Vec<MultiIndex>,
    weights: Vec<f64>,
    position: HashMap<MultiIndex, usize>,
}

impl IndexSet {
    /// Wraps an explicit list; weights default to NaN when unknown.
    pub fn from_members(members: Vec<MultiIndex>, weights: Option<Vec<f64>>) -> Result<Self> {
        let weights = weights.unwrap_or_else(|| vec![f64::NAN; members.len()]);
        if weights.len() != members.len() {
            return Err(Error::domain("index set weights and members differ in length"));
        }
        let mut position = HashMap::with_capacity(members.len());
        for (i, nu) in members.iter().enumerate() {
            if position.insert(nu.clone(), i).is_some() {
                return Err(Error::domain(format!("duplicate member {nu:?} in index set")));
            }
        }
        Ok(Self {
            members,
            weights,
            position,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[MultiIndex] {
        &self.members
    }

    /// `c_ν` values parallel to [`IndexSet::members`].
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn contains(&self, nu: &MultiIndex) -> bool {
        self.position.contains_key(nu)
    }

    pub fn position(&self, nu: &MultiIndex) -> Option<usize> {
        self.position.get(nu).copied()
    }

    /// The first `n` members as a new set.
    pub fn prefix(&self, n: usize) -> Result<IndexSet> {
        if n > self.len() {
            return Err(Error::domain(format!(
                "prefix length {n} exceeds set size {}",
                self.len()
            )));
        }
        IndexSet::from_members(self.members[..n].to_vec(), Some(self.weights[..n].to_vec()))
    }

    /// Largest dimension used by any member.
    pub fn max_dim(&self) -> usize {
        self.members.iter().map(MultiIndex::max_dim).max().unwrap_or(0)
    }

    /// `ν̄_j = max_{ν∈Λ} ν_j` for `j = 1..=dims`.
    pub fn max_exponents(&self, dims: usize) -> Vec<u32> {
        let mut out = vec![0; dims];
        for nu in &self.members {
            for (j, e) in nu.iter() {
                if j <= dims {
                    out[j - 1] = out[j - 1].max(e);
                }
            }
        }
        out
    }
}

/// `(m(Λ), d(Λ)) = (max ‖ν‖₁, max ‖ν‖₀)`.
pub fn index_set_metrics(set: &IndexSet) -> Result<(u64, usize)> {
    if set.is_empty() {
        return Err(Error::domain("metrics of an empty index set"));
    }
    let m = set.members.iter().map(MultiIndex::norm1).max().unwrap_or(0);
    let d = set.members.iter().map(MultiIndex::norm0).max().unwrap_or(0);
    Ok((m, d))
}

/// True iff `ν − e_j ∈ Λ` for every member `ν` and every `j ∈ supp ν`.
pub fn check_downward_closed(set: &IndexSet) -> bool {
    set.members
        .iter()
        .all(|nu| nu.backward_neighbors().all(|mu| set.contains(&mu)))
}

/// Total order of the enumeration: `c_ν`, then `‖ν‖₁`, then
/// [`MultiIndex::cmp_enumeration`].
pub fn enumeration_cmp(a: (f64, &MultiIndex), b: (f64, &MultiIndex)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then_with(|| a.1.norm1().cmp(&b.1.norm1()))
        .then_with(|| a.1.cmp_enumeration(b.1))
}

struct Candidate {
    c: f64,
    nu: MultiIndex,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        enumeration_cmp((other.c, &other.nu), (self.c, &self.nu))
    }
}

/// The first `n` multi-indices of the `c_ν`-enumeration, restricted to the
/// dimensions `1..=dim_cap`.
///
/// Best-first frontier expansion: the cheapest admissible candidate is
/// popped and inserted, then each successor `ν + e_j` whose backward
/// neighbours are all present is queued. Dimension `j + 1` becomes
/// available once `e_j` has been inserted, which requires `ϱ` to be
/// nondecreasing over the capped dimensions.
pub fn build_index_set(n: usize, weights: &SurrogateWeights, dim_cap: usize) -> Result<IndexSet> {
    if n == 0 {
        return Err(Error::domain("index set size must be at least 1"));
    }
    let rho = weights.rho();
    let dims = rho.available_dims().map_or(dim_cap, |a| a.min(dim_cap));
    let rho_values = rho.values(dims)?;
    if let Some(j) = rho_values.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::domain(format!(
            "rho must be nondecreasing: rho_{} = {} > rho_{} = {}",
            j + 1,
            rho_values[j],
            j + 2,
            rho_values[j + 1]
        )));
    }

    let mut heap = BinaryHeap::new();
    let mut queued: HashSet<MultiIndex> = HashSet::new();
    let mut inserted: HashSet<MultiIndex> = HashSet::with_capacity(n);
    let mut members = Vec::with_capacity(n);
    let mut cvals = Vec::with_capacity(n);
    let mut active = 0usize;

    let zero = MultiIndex::zero();
    queued.insert(zero.clone());
    heap.push(Candidate { c: 1.0, nu: zero });

    while members.len() < n {
        let Some(Candidate { c, nu }) = heap.pop() else {
            return Err(Error::domain(format!(
                "only {} multi-indices are available within {dims} dimension(s); requested {n}",
                members.len()
            )));
        };
        inserted.insert(nu.clone());

        let mut push = |mu: MultiIndex, heap: &mut BinaryHeap<Candidate>| -> Result<()> {
            if queued.insert(mu.clone()) {
                let c = weights.c(&mu)?;
                heap.push(Candidate { c, nu: mu });
            }
            Ok(())
        };

        if (nu.is_zero() || (nu.norm1() == 1 && nu.max_dim() == active)) && active < dims {
            active += 1;
            push(MultiIndex::unit(active), &mut heap)?;
        }
        for j in 1..=active {
            let mu = nu.incremented(j);
            if mu.norm1() == 1 {
                continue;
            }
            if mu.backward_neighbors().all(|b| inserted.contains(&b)) {
                push(mu, &mut heap)?;
            }
        }
        members.push(nu);
        cvals.push(c);
    }
    IndexSet::from_members(members, Some(cvals))
}
