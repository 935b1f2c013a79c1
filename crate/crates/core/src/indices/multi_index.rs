use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A finitely supported multi-index `ν ∈ ℕ₀^ℕ`.
///
/// Stored sparsely as `(dimension, exponent)` pairs sorted by dimension.
/// Dimensions are 1-based and exponents are strictly positive; zero entries
/// are never stored, so two equal multi-indices always have equal storage.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<(usize, u32)>,
}

impl MultiIndex {
    /// The zero multi-index.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit multi-index `e_j`.
    pub fn unit(j: usize) -> Self {
        assert!(j >= 1, "dimensions are 1-based");
        Self { entries: vec![(j, 1)] }
    }

    /// Builds a multi-index from sparse `(dimension, exponent)` pairs.
    /// Zero exponents are dropped; dimensions must be ≥ 1 and unique.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Result<Self> {
        let mut entries: Vec<(usize, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        entries.sort_unstable_by_key(|&(j, _)| j);
        if entries.first().is_some_and(|&(j, _)| j == 0) {
            return Err(Error::domain("multi-index dimensions are 1-based"));
        }
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::domain("repeated dimension in multi-index"));
        }
        Ok(Self { entries })
    }

    /// Builds a multi-index from a dense exponent vector `(ν_1, ν_2, ...)`.
    pub fn from_dense(exponents: &[u32]) -> Self {
        let entries = exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i + 1, e))
            .collect();
        Self { entries }
    }

    /// Dense exponent vector of length `len` (entries beyond `len` must be zero).
    pub fn to_dense(&self, len: usize) -> Result<Vec<u32>> {
        if self.max_dim() > len {
            return Err(Error::domain(format!(
                "multi-index uses dimension {} beyond {len}",
                self.max_dim()
            )));
        }
        let mut out = vec![0; len];
        for &(j, e) in &self.entries {
            out[j - 1] = e;
        }
        Ok(out)
    }

    /// Exponent `ν_j` (zero off the support).
    pub fn get(&self, j: usize) -> u32 {
        self.entries
            .binary_search_by_key(&j, |&(d, _)| d)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// Sparse `(dimension, exponent)` pairs in increasing dimension order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `‖ν‖₁ = Σ ν_j`.
    pub fn norm1(&self) -> u64 {
        self.entries.iter().map(|&(_, e)| u64::from(e)).sum()
    }

    /// `‖ν‖₀ = |supp ν|`.
    pub fn norm0(&self) -> usize {
        self.entries.len()
    }

    /// `‖ν‖_∞`.
    pub fn norm_inf(&self) -> u32 {
        self.entries.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }

    /// Largest dimension in the support, 0 for the zero index.
    pub fn max_dim(&self) -> usize {
        self.entries.last().map_or(0, |&(j, _)| j)
    }

    /// `ν + e_j`.
    pub fn incremented(&self, j: usize) -> Self {
        assert!(j >= 1, "dimensions are 1-based");
        let mut entries = self.entries.clone();
        match entries.binary_search_by_key(&j, |&(d, _)| d) {
            Ok(i) => entries[i].1 += 1,
            Err(i) => entries.insert(i, (j, 1)),
        }
        Self { entries }
    }

    /// `ν − e_j`, or `None` if `j ∉ supp ν`.
    pub fn decremented(&self, j: usize) -> Option<Self> {
        let i = self.entries.binary_search_by_key(&j, |&(d, _)| d).ok()?;
        let mut entries = self.entries.clone();
        if entries[i].1 == 1 {
            entries.remove(i);
        } else {
            entries[i].1 -= 1;
        }
        Some(Self { entries })
    }

    /// All backward neighbours `ν − e_j`, `j ∈ supp ν`.
    pub fn backward_neighbors(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        self.entries.iter().filter_map(|&(j, _)| self.decremented(j))
    }

    /// Componentwise `self ≤ other`.
    pub fn le_componentwise(&self, other: &MultiIndex) -> bool {
        self.entries.iter().all(|&(j, e)| other.get(j) >= e)
    }

    /// Tie-break order used by the index-set enumeration: compares the dense
    /// exponent vectors `(ν_1, ν_2, ...)` at the first differing dimension,
    /// with the *larger* exponent ordered first. This places `e_1` before
    /// `e_2` before `e_3`, matching the order in which dimensions activate.
    pub fn cmp_enumeration(&self, other: &MultiIndex) -> Ordering {
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                // self has a nonzero exponent at a dimension where other is zero
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&&(ja, ea)), Some(&&(jb, eb))) => {
                    if ja < jb {
                        return Ordering::Less;
                    }
                    if jb < ja {
                        return Ordering::Greater;
                    }
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }

    /// Compact text form: semicolon-joined `j:exp` pairs, empty for zero.
    pub fn to_key(&self) -> String {
        self.entries
            .iter()
            .map(|(j, e)| format!("{j}:{e}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses the form produced by [`MultiIndex::to_key`].
    pub fn parse_key(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::zero());
        }
        let pairs = s
            .split(';')
            .map(|tok| {
                let (j, e) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::domain(format!("bad multi-index token '{tok}'")))?;
                let j = j
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::domain(format!("bad dimension in '{tok}'")))?;
                let e = e
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::domain(format!("bad exponent in '{tok}'")))?;
                Ok((j, e))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ν[{}]", self.to_key())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_key())
    }
}
