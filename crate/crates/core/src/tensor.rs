//! Index arithmetic for tensor-product spaces.
//!
//! Flat indices are row-major with the first factor most significant, so a
//! product vector `u ⊗ v` has amplitude `u[a] * v[b]` at `a * d_B + b`.
//! Multisets and wedge tuples are enumerated lexicographically; the order is
//! what fixes the column and row layout of every hierarchy matrix.

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Ordered list of local dimensions `d_A, d_B, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorSpace {
    dims: Vec<usize>,
}

impl TensorSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return domain("a tensor space needs at least one factor");
        }
        if let Some(p) = dims.iter().position(|&d| d == 0) {
            return domain(format!("local dimension of factor {p} is zero"));
        }
        if dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).is_none() {
            return domain("total dimension overflows usize");
        }
        Ok(Self { dims })
    }

    pub fn bipartite(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(vec![d_a, d_b])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn flatten(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.dims.len() {
            return domain(format!("multi-index has {} entries, space has {} factors", multi.len(), self.dims.len()));
        }
        let mut flat = 0;
        for (p, (&i, &d)) in multi.iter().zip(&self.dims).enumerate() {
            if i >= d {
                return domain(format!("local index {i} out of range for factor {p} (dim {d})"));
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }

    pub fn unflatten(&self, flat: usize) -> Result<Vec<usize>> {
        if flat >= self.total_dim() {
            return domain(format!("flat index {flat} out of range (total dim {})", self.total_dim()));
        }
        let mut multi = vec![0; self.dims.len()];
        let mut rest = flat;
        for (slot, &d) in multi.iter_mut().zip(&self.dims).rev() {
            *slot = rest % d;
            rest /= d;
        }
        Ok(multi)
    }

    /// Splits the parties into `left_parties` and the rest, returning the
    /// bipartite `(d_left, d_right)` space and a gather permutation: the
    /// regrouped vector is `y[n] = x[perm[n]]`. Both groups keep the original
    /// relative party order.
    pub fn regroup_bipartition(&self, left_parties: &[usize]) -> Result<(TensorSpace, Vec<usize>)> {
        let p = self.parties();
        let mut is_left = vec![false; p];
        for &q in left_parties {
            if q >= p {
                return domain(format!("party {q} out of range for a {p}-party space"));
            }
            is_left[q] = true;
        }
        let n_left = is_left.iter().filter(|&&b| b).count();
        if n_left == 0 || n_left == p {
            return domain("bipartition needs a nonempty proper subset of parties");
        }
        let left: Vec<usize> = (0..p).filter(|&q| is_left[q]).collect();
        let right: Vec<usize> = (0..p).filter(|&q| !is_left[q]).collect();
        let d_left: usize = left.iter().map(|&q| self.dims[q]).product();
        let d_right: usize = right.iter().map(|&q| self.dims[q]).product();
        let order: Vec<usize> = left.iter().chain(&right).copied().collect();
        let permuted = TensorSpace::new(order.iter().map(|&q| self.dims[q]).collect())?;

        let mut perm = vec![0; self.total_dim()];
        let mut multi = vec![0; p];
        for (n, slot) in perm.iter_mut().enumerate() {
            let local = permuted.unflatten(n)?;
            for (pos, &q) in order.iter().enumerate() {
                multi[q] = local[pos];
            }
            *slot = self.flatten(&multi)?;
        }
        Ok((TensorSpace::bipartite(d_left, d_right)?, perm))
    }
}

/// Nondecreasing tuple `j_1 <= ... <= j_L` labelling one hierarchy column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultisetIndex(Vec<usize>);

impl MultisetIndex {
    /// Sorts `entries`; any ordering of the same multiset gives the same index.
    pub fn from_unsorted(mut entries: Vec<usize>) -> Self {
        entries.sort_unstable();
        Self(entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Strictly increasing tuple labelling a basis vector of an antisymmetric power.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WedgeIndex(Vec<usize>);

impl WedgeIndex {
    pub fn entries(&self) -> &[usize] {
        &self.0
    }
}

/// All nondecreasing tuples of `length` values in `[0, d_s)`, in lexicographic order.
pub fn enumerate_multisets(d_s: usize, length: usize) -> Vec<MultisetIndex> {
    if d_s == 0 || length == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; length];
    loop {
        out.push(MultisetIndex(cur.clone()));
        // rightmost entry that can still grow
        let Some(pos) = cur.iter().rposition(|&v| v + 1 < d_s) else {
            break;
        };
        let next = cur[pos] + 1;
        for slot in &mut cur[pos..] {
            *slot = next;
        }
    }
    out
}

/// All strictly increasing tuples of `length` values in `[0, d)`, in
/// lexicographic order. Empty when `length > d`.
pub fn enumerate_wedge(d: usize, length: usize) -> Vec<WedgeIndex> {
    if length == 0 || length > d {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..length).collect();
    loop {
        out.push(WedgeIndex(cur.clone()));
        let Some(pos) = (0..length).rev().find(|&i| cur[i] < d - length + i) else {
            break;
        };
        cur[pos] += 1;
        for i in pos + 1..length {
            cur[i] = cur[i - 1] + 1;
        }
    }
    out
}

/// Every distinct ordering of the multiset, lexicographically, each carrying
/// weight `1 / (number of distinct orderings)`. This is the symmetrizer's
/// action on `x_{j_1} ⊗ ... ⊗ x_{j_L}` grouped by equal terms.
pub fn permutations_of_multiset(m: &MultisetIndex) -> Vec<(Vec<usize>, Ratio<u64>)> {
    let orderings = distinct_orderings(m.entries());
    let w = Ratio::new(1, orderings.len() as u64);
    orderings.into_iter().map(|t| (t, w)).collect()
}

pub(crate) fn distinct_orderings(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// All permutations of `0..n` paired with their signs, in lexicographic order.
pub(crate) fn signed_permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push((cur.clone(), is_odd(&cur)));
        if !next_permutation(&mut cur) {
            break;
        }
    }
    out
}

fn is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// `binomial` narrowed to `usize`, or `None` when it does not fit.
pub fn binomial_usize(n: usize, k: usize) -> Option<usize> {
    usize::try_from(binomial(n, k)).ok()
}
