use super::scalar::Scalar;
use crate::error::{domain, Result};

/// Compressed-column sparse matrix.
///
/// Entries are sorted by (column, row) with no duplicates; exact zeros and,
/// in float mode, structural zeros are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    /// Builds a matrix from `(row, col, value)` triplets. Repeated positions
    /// are summed. Float entries below `1e-14 * max |entry|` are dropped.
    pub fn assemble(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, T)>) -> Result<Self> {
        if let Some((r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= nrows || *c >= ncols) {
            return domain(format!("triplet ({r}, {c}) out of bounds for a {nrows}x{ncols} matrix"));
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (c, r));

        let mut merged: Vec<(usize, usize, T)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some((lr, lc, lv)) if *lr == r && *lc == c => {
                    let sum = std::mem::replace(lv, T::zero()) + v;
                    *lv = sum;
                }
                _ => merged.push((r, c, v)),
            }
        }

        let scale = merged.iter().map(|(_, _, v)| v.magnitude()).fold(0.0f64, f64::max);

        let mut col_ptr = vec![0usize; ncols + 1];
        let mut row_idx = Vec::with_capacity(merged.len());
        let mut values = Vec::with_capacity(merged.len());
        for (r, c, v) in merged {
            if v.negligible(scale) {
                continue;
            }
            col_ptr[c + 1] += 1;
            row_idx.push(r);
            values.push(v);
        }
        for c in 0..ncols {
            col_ptr[c + 1] += col_ptr[c];
        }
        Ok(Self { nrows, ncols, col_ptr, row_idx, values })
    }

    /// Builds a matrix whose `c`-th column holds `columns[c]` as
    /// `(row, value)` pairs.
    pub fn from_columns(nrows: usize, columns: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let ncols = columns.len();
        let triplets =
            columns.into_iter().enumerate().flat_map(|(c, col)| col.into_iter().map(move |(r, v)| (r, c, v))).collect();
        Self::assemble(nrows, ncols, triplets)
    }

    pub fn from_dense_columns(nrows: usize, columns: &[Vec<T>]) -> Result<Self> {
        let cols = columns
            .iter()
            .map(|col| col.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(r, v)| (r, v.clone())).collect())
            .collect();
        Self::from_columns(nrows, cols)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Row indices and values stored in column `c`.
    pub fn column(&self, c: usize) -> (&[usize], &[T]) {
        let span = self.col_ptr[c]..self.col_ptr[c + 1];
        (&self.row_idx[span.clone()], &self.values[span])
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let (rows, vals) = self.column(c);
        match rows.binary_search(&r) {
            Ok(i) => vals[i].clone(),
            Err(_) => T::zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        (0..self.ncols).flat_map(move |c| {
            let (rows, vals) = self.column(c);
            rows.iter().zip(vals).map(move |(&r, v)| (r, c, v))
        })
    }

    pub fn transpose(&self) -> Self {
        let triplets = self.triplets().map(|(r, c, v)| (c, r, v.clone())).collect();
        Self::assemble(self.ncols, self.nrows, triplets).expect("transpose stays in bounds")
    }

    pub fn conj_transpose(&self) -> Self {
        let triplets = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::assemble(self.ncols, self.nrows, triplets).expect("transpose stays in bounds")
    }

    /// Rows as `(col, value)` lists, skipping empty rows.
    pub(crate) fn nonempty_rows(&self) -> Vec<Vec<(usize, T)>> {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.nrows];
        for (r, c, v) in self.triplets() {
            rows[r].push((c, v.clone()));
        }
        rows.retain(|r| !r.is_empty());
        rows
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn max_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }
}
