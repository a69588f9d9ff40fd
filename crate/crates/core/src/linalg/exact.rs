use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{GaussianRational, RankResult, SparseMatrix};
use crate::error::{Error, Result};

/// Dense entry budget for exact elimination.
pub const EXACT_ENTRY_LIMIT: usize = 4_000_000;

type GaussInt = Complex<BigInt>;

/// Exact rank by fraction-free (Bareiss) elimination over `Z[i]`.
///
/// Each column is first scaled by the lcm of its denominators, which leaves
/// the rank unchanged. Every intermediate entry is then a minor of the scaled
/// matrix, so division by the previous pivot is always exact.
pub fn exact_rank(m: &SparseMatrix<GaussianRational>) -> Result<RankResult> {
    let (nrows, ncols) = (m.nrows(), m.ncols());
    if nrows.saturating_mul(ncols) > EXACT_ENTRY_LIMIT {
        return Err(Error::Resource(format!(
            "exact elimination on a {nrows}x{ncols} system exceeds {EXACT_ENTRY_LIMIT} dense entries; \
             use float mode"
        )));
    }
    let mut a = integral_rows(m);
    let rank = bareiss_rank(&mut a, ncols);
    Ok(RankResult::exact(rank, nrows, ncols))
}

#[allow(clippy::needless_range_loop)]
fn integral_rows(m: &SparseMatrix<GaussianRational>) -> Vec<Vec<GaussInt>> {
    let mut rows: Vec<Vec<GaussInt>> = vec![vec![GaussInt::zero(); m.ncols()]; m.nrows()];
    for c in 0..m.ncols() {
        let (idx, vals) = m.column(c);
        let scale = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.re.denom()).lcm(v.im.denom()));
        for (&r, v) in idx.iter().zip(vals) {
            let re = v.re.numer() * (&scale / v.re.denom());
            let im = v.im.numer() * (&scale / v.im.denom());
            rows[r][c] = Complex::new(re, im);
        }
    }
    rows.retain(|row| row.iter().any(|v| !v.is_zero()));
    rows
}

fn norm_sqr(z: &GaussInt) -> BigInt {
    &z.re * &z.re + &z.im * &z.im
}

fn div_exact(x: &GaussInt, d: &GaussInt) -> GaussInt {
    let n = norm_sqr(d);
    let re = &x.re * &d.re + &x.im * &d.im;
    let im = &x.im * &d.re - &x.re * &d.im;
    debug_assert!((&re % &n).is_zero() && (&im % &n).is_zero(), "inexact Bareiss step");
    Complex::new(re / &n, im / n)
}

fn mul(a: &GaussInt, b: &GaussInt) -> GaussInt {
    Complex::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
}

fn bareiss_rank(a: &mut [Vec<GaussInt>], ncols: usize) -> usize {
    let nrows = a.len();
    let mut prev = GaussInt::one();
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        // largest |.|^2 pivot in this column
        let pivot = (rank..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .max_by(|&i, &j| norm_sqr(&a[i][c]).abs().cmp(&norm_sqr(&a[j][c]).abs()));
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        let piv = prow[c].clone();
        for row in bottom.iter_mut() {
            let lead = std::mem::replace(&mut row[c], GaussInt::zero());
            for j in c + 1..ncols {
                let mut v = mul(&piv, &row[j]);
                if !lead.is_zero() && !prow[j].is_zero() {
                    v -= mul(&lead, &prow[j]);
                }
                row[j] = if v.is_zero() { v } else { div_exact(&v, &prev) };
            }
        }
        prev = piv;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gaussian;
    use crate::linalg::scalar::Scalar;

    fn dense(rows: &[&[i64]]) -> SparseMatrix<GaussianRational> {
        let trip = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, gaussian(v, 0))))
            .collect();
        SparseMatrix::assemble(rows.len(), rows[0].len(), trip).unwrap()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(exact_rank(&dense(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])).unwrap().rank, 2);
        let r = exact_rank(&dense(&[&[2, 1], &[4, 2], &[6, 3]])).unwrap();
        assert_eq!(r.rank, 1);
        assert!(!r.full_column_rank);
        assert_eq!(exact_rank(&dense(&[&[1, 2], &[3, 4]])).unwrap().rank, 2);
    }

    #[test]
    fn gaussian_and_fractional_entries() {
        // columns (1, i) and (i, -1) are dependent: second = i * first
        let m = SparseMatrix::assemble(
            2,
            2,
            vec![(0, 0, gaussian(1, 0)), (1, 0, gaussian(0, 1)), (0, 1, gaussian(0, 1)), (1, 1, gaussian(-1, 0))],
        )
        .unwrap();
        assert_eq!(exact_rank(&m).unwrap().rank, 1);

        let half = GaussianRational::from_ratio(1, 2);
        let third = GaussianRational::from_ratio(1, 3);
        let m = SparseMatrix::assemble(
            2,
            2,
            vec![
                (0, 0, half.clone()),
                (1, 0, third.clone()),
                (0, 1, half * gaussian(3, 0)),
                (1, 1, third * gaussian(3, 0)),
            ],
        )
        .unwrap();
        assert_eq!(exact_rank(&m).unwrap().rank, 1);
    }

    /// Hilbert-like matrices stress coefficient growth; they are nonsingular.
    #[test]
    fn hilbert_matrix_full_rank() {
        let n = 12;
        let trip = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j, GaussianRational::from_ratio(1, (i + j + 1) as i64))))
            .collect();
        let m = SparseMatrix::assemble(n, n, trip).unwrap();
        assert_eq!(exact_rank(&m).unwrap().rank, n);
    }

    #[test]
    fn oversized_systems_are_refused() {
        let m = SparseMatrix::<GaussianRational>::assemble(3000, 2000, vec![]).unwrap();
        assert!(matches!(exact_rank(&m), Err(Error::Resource(_))));
    }
}
