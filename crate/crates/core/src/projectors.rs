//! Implicit antisymmetric projectors, the symmetrizer, and the multipartite
//! CES projector.
//!
//! No projector is ever stored as a matrix. The antisymmetric pair
//! `P∧_A ⊗ P∧_B` is evaluated through small determinants: its image is fully
//! described by the amplitudes on the representative basis states
//! `|i_1 < ... < i_t>_A |j_1 < ... < j_t>_B`, and those amplitudes are the
//! row coordinates used throughout. For `t` copies,
//!
//! ```text
//! coord(I, J) = (1/t!)^2 * Σ_σ sgn(σ) det[ X_l(I_σ(l), J_m) ]_{l,m}
//! ```
//!
//! where `X_l` is the `d_A x d_B` reshape of the `l`-th input vector. When
//! all inputs are one vector this collapses to `det X(I, J) / t!`.
//!
//! The symmetrizer is applied by averaging over distinct orderings of a
//! multiset of basis labels.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{domain, Error, Result};
use crate::linalg::{det, independent_columns, Mode, Scalar, C64};
use crate::tensor::{
    binomial, distinct_orderings, enumerate_wedge, signed_permutations, MultisetIndex, TensorSpace, WedgeIndex,
};

/// Relative cutoff for dropping directions while orthonormalizing the CES span.
pub const CES_RANK_TOL: f64 = 1e-12;

/// Level-`k` map for `r`-entanglement on `C^{d_A} ⊗ C^{d_B}`, with the wedge
/// index sets it needs precomputed.
#[derive(Clone, Debug)]
pub struct BipartiteLevelShape {
    d_a: usize,
    d_b: usize,
    r: usize,
    k: usize,
    wedge_a: Vec<WedgeIndex>,
    wedge_b: Vec<WedgeIndex>,
    perms: Vec<(Vec<usize>, bool)>,
}

impl BipartiteLevelShape {
    pub fn new(d_a: usize, d_b: usize, r: usize, k: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return domain("local dimensions must be positive");
        }
        if r == 0 || k == 0 {
            return domain("r and k must both be at least 1");
        }
        let t = r + 1;
        Ok(Self {
            d_a,
            d_b,
            r,
            k,
            wedge_a: enumerate_wedge(d_a, t),
            wedge_b: enumerate_wedge(d_b, t),
            perms: if t <= d_a.min(d_b) { signed_permutations(t) } else { Vec::new() },
        })
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `r + 1 > min(d_A, d_B)`: the antisymmetric powers are zero and every
    /// column vanishes.
    pub fn is_trivial(&self) -> bool {
        self.r + 1 > self.d_a.min(self.d_b)
    }

    pub fn wedge_rows(&self) -> usize {
        self.wedge_a.len() * self.wedge_b.len()
    }

    pub fn tail_dim(&self) -> usize {
        (self.d_a * self.d_b).pow((self.k - 1) as u32)
    }

    /// `C(d_A, r+1) C(d_B, r+1) (d_A d_B)^{k-1}`.
    pub fn nominal_rows(&self) -> BigUint {
        binomial(self.d_a, self.r + 1)
            * binomial(self.d_b, self.r + 1)
            * BigUint::from(self.d_a * self.d_b).pow((self.k - 1) as u32)
    }

    /// `C(d_S + r + k - 1, r + k)`.
    pub fn nominal_cols(&self, d_s: usize) -> BigUint {
        binomial(d_s + self.r + self.k - 1, self.r + self.k)
    }

    /// Representative-amplitude coordinates of `(P∧ ⊗ P∧)(x_1 ⊗ ... ⊗ x_t)`
    /// with `x_l = basis[idx[l]]`, row `a * |wedge_B| + b`.
    fn wedge_coords<T: Scalar>(&self, basis: &[Vec<T>], idx: &[usize]) -> Vec<T> {
        if self.is_trivial() {
            return Vec::new();
        }
        let t = idx.len();
        let fact = (1..=t as i64).product::<i64>();
        let all_same = idx.windows(2).all(|w| w[0] == w[1]);
        let x = |l: usize, a: usize, b: usize| basis[idx[l]][a * self.d_b + b].clone();

        let mut out = Vec::with_capacity(self.wedge_rows());
        let scale_same = T::from_ratio(1, fact);
        let scale_mixed = T::from_ratio(1, fact * fact);
        for wa in &self.wedge_a {
            let ia = wa.entries();
            for wb in &self.wedge_b {
                let jb = wb.entries();
                let value = if all_same {
                    let m = (0..t).map(|l| (0..t).map(|c| x(0, ia[l], jb[c])).collect()).collect();
                    det(m) * scale_same.clone()
                } else {
                    let mut acc = T::zero();
                    for (sigma, odd) in &self.perms {
                        let m = (0..t).map(|l| (0..t).map(|c| x(l, ia[sigma[l]], jb[c])).collect()).collect();
                        let d = det(m);
                        acc = if *odd { acc - d } else { acc + d };
                    }
                    acc * scale_mixed.clone()
                };
                out.push(value);
            }
        }
        out
    }
}

/// Coordinates of `(P∧_{A,t} ⊗ P∧_{B,t})(x_1 ⊗ ... ⊗ x_t)` indexed by pairs of
/// wedge tuples, `t = xs.len()`. Empty when `t > min(d_A, d_B)`.
pub fn apply_antisym_pair<T: Scalar>(d_a: usize, d_b: usize, xs: &[&[T]]) -> Result<Vec<T>> {
    if xs.is_empty() {
        return domain("need at least one vector");
    }
    if let Some(x) = xs.iter().find(|x| x.len() != d_a * d_b) {
        return domain(format!("vector of length {} in a {d_a}x{d_b} space", x.len()));
    }
    let shape = BipartiteLevelShape::new(d_a, d_b, xs.len() - 1, 1)?;
    let basis: Vec<Vec<T>> = xs.iter().map(|x| x.to_vec()).collect();
    // identical slices get identical labels so the single-vector shortcut applies
    let idx: Vec<usize> = (0..xs.len()).map(|l| (0..=l).find(|&e| basis[e] == basis[l]).unwrap()).collect();
    Ok(shape.wedge_coords(&basis, &idx))
}

/// One column of a hierarchy matrix, as sorted `(row, value)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelColumn<T> {
    pub entries: Vec<(usize, T)>,
    /// Set when the antisymmetric part is trivial, so the column is zero for
    /// every input.
    pub antisym_trivial: bool,
}

/// Column of `Φ_r^k` for the basis product labelled by `m`, laid out as
/// `(wedge_A, wedge_B, flat_1, ..., flat_{k-1})` in row-major order.
pub fn phi_rk_column<T: Scalar>(
    shape: &BipartiteLevelShape,
    basis: &[Vec<T>],
    m: &MultisetIndex,
) -> Result<LevelColumn<T>> {
    let t = shape.r + 1;
    check_column_inputs(basis, m, shape.r + shape.k, shape.d_a * shape.d_b)?;
    if shape.is_trivial() {
        return Ok(LevelColumn { entries: Vec::new(), antisym_trivial: true });
    }
    let entries = symmetrized_column(basis, m, t, shape.tail_dim(), |head| shape.wedge_coords(basis, head));
    Ok(LevelColumn { entries, antisym_trivial: false })
}

fn check_column_inputs<T>(basis: &[Vec<T>], m: &MultisetIndex, len: usize, dim: usize) -> Result<()> {
    if m.len() != len {
        return domain(format!("multiset has length {}, expected {len}", m.len()));
    }
    if let Some(&j) = m.entries().iter().find(|&&j| j >= basis.len()) {
        return domain(format!("multiset label {j} exceeds basis size {}", basis.len()));
    }
    if let Some(v) = basis.iter().find(|v| v.len() != dim) {
        return domain(format!("basis vector of length {}, expected {dim}", v.len()));
    }
    Ok(())
}

/// `(H ⊗ I_{tail}) P∨` applied to `x_{m_1} ⊗ ... ⊗ x_{m_L}`, where `head_coords`
/// evaluates `H` on the first `head_len` factors given as sorted labels.
/// `H` must be invariant under permuting its own factors.
fn symmetrized_column<T, F>(
    basis: &[Vec<T>],
    m: &MultisetIndex,
    head_len: usize,
    tail_dim: usize,
    head_coords: F,
) -> Vec<(usize, T)>
where
    T: Scalar,
    F: Fn(&[usize]) -> Vec<T>,
{
    let orderings = distinct_orderings(m.entries());
    let total = orderings.len() as i64;

    // orderings that differ only inside the head contribute identically
    let mut groups: HashMap<(Vec<usize>, Vec<usize>), i64> = HashMap::new();
    for o in orderings {
        let mut head = o[..head_len].to_vec();
        head.sort_unstable();
        *groups.entry((head, o[head_len..].to_vec())).or_default() += 1;
    }
    let mut groups: Vec<_> = groups.into_iter().collect();
    groups.sort_unstable_by(|a, b| a.0.cmp(&b.0));

    let mut head_cache: HashMap<Vec<usize>, Vec<T>> = HashMap::new();
    let mut acc: Vec<(usize, T)> = Vec::new();
    for ((head, tail), count) in groups {
        let coords = head_cache.entry(head.clone()).or_insert_with(|| head_coords(&head));
        let w = T::from_ratio(count, total);
        let tail_entries = sparse_kron(basis, &tail);
        for (ri, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let wc = w.clone() * c.clone();
            for (ti, v) in &tail_entries {
                acc.push((ri * tail_dim + ti, wc.clone() * v.clone()));
            }
        }
    }
    merge_sorted(acc)
}

fn sparse_kron<T: Scalar>(basis: &[Vec<T>], labels: &[usize]) -> Vec<(usize, T)> {
    let mut out = vec![(0usize, T::one())];
    for &j in labels {
        let v = &basis[j];
        let d = v.len();
        let nz: Vec<(usize, &T)> = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        out =
            out.iter().flat_map(|(i, a)| nz.iter().map(move |(q, b)| (i * d + q, a.clone() * (*b).clone()))).collect();
    }
    out
}

fn merge_sorted<T: Scalar>(mut acc: Vec<(usize, T)>) -> Vec<(usize, T)> {
    acc.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, T)> = Vec::with_capacity(acc.len());
    for (r, v) in acc {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => {
                let s = std::mem::replace(lv, T::zero()) + v;
                *lv = s;
            }
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Spanning set of the range of `P^CES` on `(H_1 ⊗ ... ⊗ H_p)^{⊗2}`.
///
/// Float mode holds an orthonormal basis. Rational mode holds a linearly
/// independent subset of the integer spanning vectors instead; taking inner
/// products against it has the same kernel as the orthogonal projector, which
/// is all the certification uses.
#[derive(Clone, Debug)]
pub struct CesProjectorBasis<T> {
    space: TensorSpace,
    cuts: Vec<Vec<usize>>,
    columns: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> CesProjectorBasis<T> {
    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    /// Left party sets of the bipartitions whose wedge products are summed.
    pub fn cuts(&self) -> &[Vec<usize>] {
        &self.cuts
    }

    /// Dimension of the range.
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<(usize, T)>] {
        &self.columns
    }

    pub fn is_orthonormal(&self) -> bool {
        T::MODE == Mode::Float
    }

    /// Inner products of every basis column with `x ⊗ y`.
    pub fn apply_pair(&self, x: &[T], y: &[T]) -> Vec<T> {
        let d = self.space.total_dim();
        self.columns
            .iter()
            .map(|col| {
                col.iter().fold(T::zero(), |acc, (idx, s)| {
                    let (i, j) = (idx / d, idx % d);
                    if x[i].is_zero() || y[j].is_zero() {
                        acc
                    } else {
                        acc + s.conj() * x[i].clone() * y[j].clone()
                    }
                })
            })
            .collect()
    }
}

/// Bipartitions (as left party sets) whose wedge-product summands make up the
/// CES range: `A|BC, AB|C` for three parties, and the single-party cuts
/// `{0}, {1}, ..., {p-2}` from four parties on.
pub fn ces_cuts(parties: usize) -> Vec<Vec<usize>> {
    match parties {
        3 => vec![vec![0], vec![0, 1]],
        p => (0..p - 1).map(|q| vec![q]).collect(),
    }
}

pub fn build_ces_projector<T: Scalar>(dims: &[usize]) -> Result<CesProjectorBasis<T>> {
    if dims.len() < 3 {
        return domain(format!("CES projector needs at least 3 parties, got {}", dims.len()));
    }
    if let Some(p) = dims.iter().position(|&d| d < 2) {
        return domain(format!("party {p} has dimension {} (degenerate party)", dims[p]));
    }
    let space = TensorSpace::new(dims.to_vec())?;
    let d = space.total_dim();
    let cuts = ces_cuts(dims.len());

    let mut spanning: Vec<Vec<(usize, i64)>> = Vec::new();
    for left in &cuts {
        let (bi, perm) = space.regroup_bipartition(left)?;
        let (dl, dr) = (bi.dims()[0], bi.dims()[1]);
        let g = |a: usize, b: usize| perm[a * dr + b];
        for a in 0..dl {
            for a2 in a + 1..dl {
                for b in 0..dr {
                    for b2 in b + 1..dr {
                        let mut v = vec![
                            (g(a, b) * d + g(a2, b2), 1),
                            (g(a2, b) * d + g(a, b2), -1),
                            (g(a, b2) * d + g(a2, b), -1),
                            (g(a2, b2) * d + g(a, b), 1),
                        ];
                        v.sort_unstable();
                        spanning.push(v);
                    }
                }
            }
        }
    }

    let columns = match T::MODE {
        Mode::Float => orthonormalize(&spanning, d * d)
            .into_iter()
            .map(|col| {
                col.into_iter()
                    .enumerate()
                    .filter(|(_, v)| *v != 0.0)
                    .map(|(i, v)| (i, T::from_c64(C64::new(v, 0.0)).unwrap()))
                    .collect()
            })
            .collect(),
        Mode::Rational => {
            let dense: Vec<Vec<T>> = spanning
                .iter()
                .map(|s| {
                    let mut v = vec![T::zero(); d * d];
                    for &(i, x) in s {
                        v[i] = T::from_ratio(x, 1);
                    }
                    v
                })
                .collect();
            independent_columns(&dense, 0.0)
                .into_iter()
                .map(|c| spanning[c].iter().map(|&(i, x)| (i, T::from_ratio(x, 1))).collect())
                .collect()
        }
    };
    Ok(CesProjectorBasis { space, cuts, columns })
}

/// Modified Gram–Schmidt with one reorthogonalization pass; vectors whose
/// residual falls below `CES_RANK_TOL` of their norm are dropped. The spanning
/// vectors are real, so the basis is real.
fn orthonormalize(spanning: &[Vec<(usize, i64)>], dim: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for s in spanning {
        let mut v = vec![0.0; dim];
        for &(i, x) in s {
            v[i] = x as f64;
        }
        let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for _ in 0..2 {
            for q in &basis {
                let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                if dot != 0.0 {
                    v.iter_mut().zip(q).for_each(|(x, qi)| *x -= dot * qi);
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > CES_RANK_TOL * norm0 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

/// Column of `Φ_CES^k = (P^CES ⊗ I_{k-1}) P∨_{k+1}` for the basis product
/// labelled by `m`, rows `(ces coordinate, flat_1, ..., flat_{k-1})`.
pub fn phi_ces_column<T: Scalar>(
    ces: &CesProjectorBasis<T>,
    basis: &[Vec<T>],
    m: &MultisetIndex,
    k: usize,
) -> Result<LevelColumn<T>> {
    if k == 0 {
        return domain("level k must be at least 1");
    }
    let d = ces.space.total_dim();
    check_column_inputs(basis, m, k + 1, d)?;
    let tail_dim = d.checked_pow((k - 1) as u32).ok_or_else(|| Error::Resource("row index overflows usize".into()))?;
    let entries = symmetrized_column(basis, m, 2, tail_dim, |head| ces.apply_pair(&basis[head[0]], &basis[head[1]]));
    Ok(LevelColumn { entries, antisym_trivial: false })
}
