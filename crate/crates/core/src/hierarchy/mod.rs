//! Certification drivers.
//!
//! Every driver builds one or more hierarchy matrices whose columns are
//! indexed by multisets of basis labels, and certifies when each matrix has
//! full column rank. A negative answer at level `k` is never a separability
//! claim: the test is one-sided below the (astronomical) completeness level.

mod bipartite;
mod certificate;
mod mixed;
mod multipartite;
mod subspace;

pub use bipartite::{
    bipartite_level_cap, certify_bipartite, certify_bipartite_auto, max_level1_dimension, schmidt_rank,
};
pub use certificate::{Certificate, RangeExtraction, SkipReason, SystemReport, Target, Verdict};
pub use mixed::{schmidt_number_bound, MixedState, RANGE_CUTOFF};
pub use multipartite::{
    bipartitions, certify_ces, certify_ces_auto, certify_ges, certify_ges_auto, multipartite_level_cap,
};
pub use subspace::Subspace;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Scalar, SparseMatrix, TolPolicy};
use crate::projectors::LevelColumn;
use crate::tensor::{enumerate_multisets, MultisetIndex};

/// Default ceiling on the nominal row count of a single system.
pub const DEFAULT_GUARDRAIL_ROWS: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    pub tol: TolPolicy,
    pub guardrail_rows: u64,
    /// GES only: stop at the first bipartition that fails.
    pub short_circuit: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { tol: TolPolicy::Default, guardrail_rows: DEFAULT_GUARDRAIL_ROWS, short_circuit: false }
    }
}

fn saturating_u64(v: &BigUint) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// Bound on the size of any column built from `len` basis vectors:
/// `max_j |x_j|^len`.
fn input_scale<T: Scalar>(basis: &[Vec<T>], len: usize) -> f64 {
    let norm = basis.iter().map(|v| v.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()).fold(0.0, f64::max);
    norm.powi(len as i32)
}

/// Builds and ranks one hierarchy system with columns labelled by the
/// multisets of length `len` over the basis. Float entries below
/// `STRUCTURAL_ZERO` times the input scale are dropped as rounding noise.
#[allow(clippy::too_many_arguments)]
fn run_system<T, F>(
    label: String,
    rows: BigUint,
    cols: BigUint,
    basis: &[Vec<T>],
    len: usize,
    level_cap: &BigUint,
    opts: &CertifyOptions,
    column: F,
) -> Result<SystemReport>
where
    T: Scalar,
    F: Fn(&MultisetIndex) -> Result<LevelColumn<T>> + Sync,
{
    let mut report =
        SystemReport { label, rows: saturating_u64(&rows), cols: saturating_u64(&cols), rank: None, skipped: None };
    if cols > rows {
        report.skipped = Some(SkipReason::ColumnsExceedRows);
        return Ok(report);
    }
    if report.rows > opts.guardrail_rows {
        report.skipped = Some(SkipReason::RowsExceedGuardrail {
            message: format!(
                "{rows} nominal rows exceed the guardrail of {}; the hierarchy is only \
                 guaranteed complete at level {level_cap}",
                opts.guardrail_rows
            ),
        });
        return Ok(report);
    }
    let scale = input_scale(basis, len);
    let multisets = enumerate_multisets(basis.len(), len);
    let columns = multisets
        .par_iter()
        .map(|m| column(m).map(|c| c.entries.into_iter().filter(|(_, v)| !v.negligible(scale)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let nrows = usize::try_from(report.rows).map_err(|_| Error::Resource("row count overflows usize".into()))?;
    let matrix = SparseMatrix::from_columns(nrows, columns)?;
    match T::rank(&matrix, opts.tol, scale) {
        Ok(r) => report.rank = Some(r),
        Err(e @ (Error::Resource(_) | Error::Convergence(_))) => {
            report.skipped = Some(SkipReason::ResourceLimit { message: e.to_string() })
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}
