//! Scalars, sparse matrices and rank determination.
//!
//! Float rank is the number of singular values above a tolerance. Matrices
//! with both sides at most [`DENSE_LIMIT`] go straight to a dense SVD. Larger
//! ones are reduced to their `n x n` triangular factor by a Householder QR
//! that streams sparse rows in blocks, and the SVD runs on that factor. Exact
//! rank uses fraction-free elimination over the Gaussian integers.

mod dense;
mod exact;
mod scalar;
mod sparse;

pub use dense::{det, independent_columns};
pub use exact::exact_rank;
pub use scalar::{gaussian, GaussianRational, Mode, Scalar, C64};
pub use sparse::SparseMatrix;

use nalgebra::{ComplexField, DMatrix, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Float entries smaller than this times the largest entry are structural zeros.
pub const STRUCTURAL_ZERO: f64 = 1e-14;

/// Largest side handled by a direct dense SVD.
pub const DENSE_LIMIT: usize = 2000;

/// Largest `min(nrows, ncols)` the streaming QR path will accept.
pub const STREAMING_LIMIT: usize = 6000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TolPolicy {
    /// `max(nrows, ncols) * eps * sigma_ref`.
    #[default]
    Default,
    /// `value * sigma_ref`.
    Relative(f64),
    /// `value`.
    Absolute(f64),
}

impl TolPolicy {
    /// Singular-value cutoff. `sigma_ref` is the larger of `sigma_max` and the
    /// scale of the data the matrix was computed from, so a matrix made only
    /// of rounding noise is not mistaken for a full-rank one.
    pub fn threshold(&self, sigma_ref: f64, nrows: usize, ncols: usize) -> f64 {
        match *self {
            TolPolicy::Default => nrows.max(ncols) as f64 * f64::EPSILON * sigma_ref,
            TolPolicy::Relative(t) => t * sigma_ref,
            TolPolicy::Absolute(t) => t,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    DenseSvd,
    StreamingQrSvd,
    FractionFree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub nrows: usize,
    pub ncols: usize,
    pub full_column_rank: bool,
    pub mode: Mode,
    pub method: RankMethod,
    /// Singular-value cutoff actually applied (float mode only).
    pub tolerance: Option<f64>,
    pub sigma_max: Option<f64>,
    /// Scale of the input data entering `sigma_ref` (float mode only).
    pub data_scale: Option<f64>,
    pub smallest_retained_singular_value: Option<f64>,
    pub largest_discarded_singular_value: Option<f64>,
}

impl RankResult {
    fn exact(rank: usize, nrows: usize, ncols: usize) -> Self {
        Self {
            rank,
            nrows,
            ncols,
            full_column_rank: rank == ncols,
            mode: Mode::Rational,
            method: RankMethod::FractionFree,
            tolerance: None,
            sigma_max: None,
            data_scale: None,
            smallest_retained_singular_value: None,
            largest_discarded_singular_value: None,
        }
    }

    /// `largest_discarded / smallest_retained`; zero when nothing was discarded.
    pub fn gap_ratio(&self) -> Option<f64> {
        let kept = self.smallest_retained_singular_value?;
        let dropped = self.largest_discarded_singular_value.unwrap_or(0.0);
        Some(if kept > 0.0 { dropped / kept } else { f64::INFINITY })
    }

    /// `smallest_retained / sigma_max`: how far the weakest kept direction is
    /// from the cutoff's scale.
    pub fn relative_margin(&self) -> Option<f64> {
        Some(self.smallest_retained_singular_value? / self.sigma_max?)
    }
}

/// Numerical rank of a float matrix from its singular values.
pub fn numerical_rank(m: &SparseMatrix<C64>, tol: TolPolicy) -> Result<RankResult> {
    numerical_rank_scaled(m, tol, 0.0)
}

/// Like [`numerical_rank`], with the cutoff measured against
/// `max(sigma_max, data_scale)`.
pub fn numerical_rank_scaled(m: &SparseMatrix<C64>, tol: TolPolicy, data_scale: f64) -> Result<RankResult> {
    let (nrows, ncols) = (m.nrows(), m.ncols());
    let is_real = m.triplets().all(|(_, _, v)| v.im == 0.0);
    let (sv, method) = if is_real { singular_values(m, |z| z.re)? } else { singular_values(m, |z| z)? };
    Ok(rank_from_singular_values(&sv, nrows, ncols, tol, method, data_scale))
}

fn rank_from_singular_values(
    sv: &[f64],
    nrows: usize,
    ncols: usize,
    tol: TolPolicy,
    method: RankMethod,
    data_scale: f64,
) -> RankResult {
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    let tau = tol.threshold(sigma_max.max(data_scale), nrows, ncols);
    let kept: Vec<f64> = sv.iter().copied().filter(|&s| s > tau).collect();
    let dropped =
        sv.iter().copied().filter(|&s| s <= tau).fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.max(s))));
    let rank = kept.len();
    RankResult {
        rank,
        nrows,
        ncols,
        full_column_rank: rank == ncols,
        mode: Mode::Float,
        method,
        tolerance: Some(tau),
        sigma_max: Some(sigma_max),
        data_scale: (data_scale > 0.0).then_some(data_scale),
        smallest_retained_singular_value: kept.iter().copied().reduce(f64::min),
        largest_discarded_singular_value: dropped,
    }
}

fn singular_values<N>(m: &SparseMatrix<C64>, convert: fn(C64) -> N) -> Result<(Vec<f64>, RankMethod)>
where
    N: ComplexField<RealField = f64> + Copy,
{
    let (nrows, ncols) = (m.nrows(), m.ncols());
    if nrows == 0 || ncols == 0 || m.nnz() == 0 {
        return Ok((vec![0.0; nrows.min(ncols)], RankMethod::DenseSvd));
    }
    if nrows <= DENSE_LIMIT && ncols <= DENSE_LIMIT {
        let mut dense = DMatrix::<N>::zeros(nrows, ncols);
        for (r, c, v) in m.triplets() {
            dense[(r, c)] = convert(*v);
        }
        return Ok((svd_values(dense)?, RankMethod::DenseSvd));
    }

    let n = nrows.min(ncols);
    if n > STREAMING_LIMIT {
        return Err(Error::Resource(format!(
            "{nrows}x{ncols} system: min dimension {n} exceeds the streaming QR limit {STREAMING_LIMIT}"
        )));
    }
    // rank(M) = rank(M^H); stream the rows of whichever is tall
    let rows = if nrows >= ncols { m.nonempty_rows() } else { m.conj_transpose().nonempty_rows() };
    let r = streaming_qr_r(
        rows.into_iter().map(|row| row.into_iter().map(|(c, v)| (c, convert(v))).collect::<Vec<_>>()),
        n,
    );
    Ok((svd_values(DMatrix::from_vec(n, n, r))?, RankMethod::StreamingQrSvd))
}

fn svd_values<N>(m: DMatrix<N>) -> Result<Vec<f64>>
where
    N: ComplexField<RealField = f64> + Copy,
{
    let (nr, nc) = m.shape();
    let max_iter = 100 * nr.max(nc).max(10);
    let svd = SVD::try_new(m, false, false, f64::EPSILON, max_iter)
        .ok_or_else(|| Error::Convergence(format!("SVD of a {nr}x{nc} matrix did not converge")))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Upper-triangular factor `R` (column-major, `n x n`) of the matrix whose
/// rows are given sparsely. Each block of rows is folded into `R` by
/// Householder reflections acting on `[R; block]`; only `R` and one dense
/// block are ever held.
fn streaming_qr_r<N, I>(rows: I, n: usize) -> Vec<N>
where
    N: ComplexField<RealField = f64> + Copy,
    I: Iterator<Item = Vec<(usize, N)>>,
{
    let cap = n.clamp(64, 2048);
    let mut r = vec![N::zero(); n * n];
    let mut block = vec![N::zero(); cap * n];
    let mut filled = 0;
    for row in rows {
        for (c, v) in row {
            block[c * cap + filled] = v;
        }
        filled += 1;
        if filled == cap {
            absorb_block(&mut r, &mut block, cap, filled, n);
            filled = 0;
        }
    }
    if filled > 0 {
        absorb_block(&mut r, &mut block, cap, filled, n);
    }
    r
}

fn absorb_block<N>(r: &mut [N], block: &mut [N], cap: usize, nb: usize, n: usize)
where
    N: ComplexField<RealField = f64> + Copy,
{
    for j in 0..n {
        let (head, rest) = block.split_at_mut((j + 1) * cap);
        let bj = &mut head[j * cap..j * cap + nb];
        let tail_sq: f64 = bj.iter().map(|v| v.modulus_squared()).sum();
        if tail_sq == 0.0 {
            continue;
        }
        let x0 = r[j + j * n];
        let a = x0.modulus();
        let norm = (a * a + tail_sq).sqrt();
        let phase = if a == 0.0 { N::one() } else { x0.unscale(a) };
        let alpha = -phase.scale(norm);
        let v0 = x0 - alpha;
        let tau = 2.0 / (v0.modulus_squared() + tail_sq);
        r[j + j * n] = alpha;

        for c in j + 1..n {
            let bc = &mut rest[(c - j - 1) * cap..(c - j - 1) * cap + nb];
            let mut w = v0.conjugate() * r[j + c * n];
            for (vi, bi) in bj.iter().zip(bc.iter()) {
                w += vi.conjugate() * *bi;
            }
            if w == N::zero() {
                continue;
            }
            let w = w.scale(tau);
            r[j + c * n] -= v0 * w;
            for (vi, bi) in bj.iter().zip(bc.iter_mut()) {
                *bi -= *vi * w;
            }
        }
        bj.iter_mut().for_each(|v| *v = N::zero());
    }
    // rows past `nb` were never written; the block is all zero again
}

/// Singular values of the `d_left x d_right` reshape of `x`, nonincreasing.
pub fn singular_values_reshaped(x: &[C64], d_left: usize, d_right: usize) -> Result<Vec<f64>> {
    if x.len() != d_left * d_right {
        return domain(format!("vector of length {} cannot be reshaped to {d_left}x{d_right}", x.len()));
    }
    svd_values(DMatrix::from_row_slice(d_left, d_right, x))
}
