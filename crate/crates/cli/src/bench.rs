//! Benchmark tables: runs the certification experiments and compares the
//! dimension and level columns with the reference values.

use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Result;
use entcert_core::constructions::{bhat_ces, random_subspace};
use entcert_core::hierarchy::{certify_bipartite, certify_ces, certify_ces_auto, max_level1_dimension};
use entcert_core::linalg::gaussian;
use entcert_core::{CertifyOptions, GaussianRational, Subspace, TensorSpace, C64};

/// Reference level-1 maximum dimensions: `(d, r = 1, r = 2)`.
pub const TABLE1: &[(usize, usize, usize)] =
    &[(3, 3, 1), (4, 8, 3), (5, 13, 7), (6, 20, 12), (7, 29, 18), (8, 39, 25), (9, 50, 33), (10, 63, 43)];

/// Reference level-2 dimensions: `(d, r = 1, r = 2)`.
pub const TABLE2: &[(usize, usize, usize)] = &[(3, 4, 1), (4, 9, 4), (5, 16, 9), (6, 25, 16), (7, 36, 25)];

/// Reference CES rows: `(dims, d_S, level)`.
pub const TABLE3: &[([usize; 3], usize, usize)] = &[
    ([2, 2, 2], 4, 2),
    ([2, 2, 3], 7, 2),
    ([2, 2, 4], 10, 2),
    ([2, 2, 5], 13, 2),
    ([2, 2, 6], 16, 2),
    ([2, 2, 7], 19, 2),
    ([2, 2, 8], 22, 2),
    ([2, 2, 9], 25, 2),
    ([2, 3, 3], 12, 3),
    ([2, 3, 4], 17, 3),
    ([2, 3, 5], 22, 3),
    ([3, 3, 3], 20, 4),
];

/// Exact confirmations run only for local dimensions up to this size.
pub const RATIONAL_LOCAL_DIM: usize = 4;

pub fn default_max_dim(table: u8) -> usize {
    match table {
        1 => 6,
        2 => 4,
        _ => 12,
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub dims: Vec<usize>,
    pub r: Option<usize>,
    pub d_s: usize,
    pub expected_d_s: usize,
    /// Level at which certification succeeded, if any.
    pub k: Option<usize>,
    pub expected_k: usize,
    /// Exact-arithmetic confirmation, when run.
    pub rational: Option<bool>,
    pub seconds: f64,
}

impl BenchRow {
    pub fn matches(&self) -> bool {
        self.d_s == self.expected_d_s && self.k == Some(self.expected_k) && self.rational != Some(false)
    }
}

pub struct BenchConfig {
    pub table: u8,
    pub max_dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub opts: CertifyOptions,
}

pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    match cfg.table {
        1 => bipartite_table(cfg, TABLE1, 1),
        2 => bipartite_table(cfg, TABLE2, 2),
        _ => ces_table(cfg),
    }
}

fn bipartite_table(cfg: &BenchConfig, table: &[(usize, usize, usize)], k: usize) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &(d, r1, r2) in table.iter().filter(|row| row.0 <= cfg.max_dim) {
        for (r, expected) in [(1, r1), (2, r2)] {
            let d_s = if k == 1 { max_level1_dimension(d, d, r)? } else { (d - r) * (d - r) };
            let space = TensorSpace::bipartite(d, d)?;
            let start = Instant::now();
            let mut certified = true;
            for t in 0..cfg.trials.max(1) {
                let s = random_subspace(&space, d_s, cfg.seed + t as u64)?;
                certified &= certify_bipartite(&s, r, k, &cfg.opts)?.is_certified();
            }
            let seconds = start.elapsed().as_secs_f64() / cfg.trials.max(1) as f64;
            let rational = if d <= RATIONAL_LOCAL_DIM {
                let s = gaussian_integer_subspace(&space, d_s, cfg.seed)?;
                Some(certify_bipartite(&s, r, k, &cfg.opts)?.is_certified())
            } else {
                None
            };
            rows.push(BenchRow {
                dims: vec![d, d],
                r: Some(r),
                d_s,
                expected_d_s: expected,
                k: certified.then_some(k),
                expected_k: k,
                rational,
                seconds,
            });
        }
    }
    Ok(rows)
}

fn ces_table(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &(dims, expected_d_s, expected_k) in TABLE3.iter().filter(|row| row.0.iter().product::<usize>() <= cfg.max_dim)
    {
        let exact = bhat_ces(dims)?;
        let s = exact.to_float();
        let start = Instant::now();
        let cert = certify_ces_auto(&s, expected_k, &cfg.opts)?;
        let seconds = start.elapsed().as_secs_f64();
        let k = if cert.is_certified() { cert.level_used } else { None };
        let rational = match k {
            Some(level) if dims.iter().all(|&d| d <= RATIONAL_LOCAL_DIM) => {
                Some(certify_ces(&exact, level, &cfg.opts)?.is_certified())
            }
            _ => None,
        };
        rows.push(BenchRow {
            dims: dims.to_vec(),
            r: None,
            d_s: s.dim(),
            expected_d_s,
            k,
            expected_k,
            rational,
            seconds,
        });
    }
    Ok(rows)
}

/// A Haar-random subspace rounded to Gaussian integers, for exact runs.
fn gaussian_integer_subspace(space: &TensorSpace, d_s: usize, seed: u64) -> Result<Subspace<GaussianRational>> {
    let s = random_subspace(space, d_s, seed)?;
    let round = |z: &C64| gaussian((16.0 * z.re).round() as i64, (16.0 * z.im).round() as i64);
    let basis = s.basis().iter().map(|v| v.iter().map(round).collect()).collect();
    Ok(Subspace::new(space.clone(), basis)?)
}

pub fn render(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>3} {:>5} {:>8} {:>5} {:>6} {:>9} {:>10}  status",
        "dims", "r", "d_S", "expected", "k", "wanted", "rational", "time (s)"
    );
    for row in rows {
        let dims = row.dims.iter().map(ToString::to_string).collect::<Vec<_>>().join("x");
        let r = row.r.map_or("-".into(), |r| r.to_string());
        let k = row.k.map_or("none".into(), |k| k.to_string());
        let rational = match row.rational {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        let _ = writeln!(
            out,
            "{:<10} {:>3} {:>5} {:>8} {:>5} {:>6} {:>9} {:>10.3}  {}",
            dims,
            r,
            row.d_s,
            row.expected_d_s,
            k,
            row.expected_k,
            rational,
            row.seconds,
            if row.matches() { "ok" } else { "MISMATCH" }
        );
    }
    out
}

/// One line per row that disagrees with the reference values.
pub fn diff(rows: &[BenchRow]) -> Vec<String> {
    rows.iter()
        .filter(|row| !row.matches())
        .map(|row| {
            let mut parts = Vec::new();
            if row.d_s != row.expected_d_s {
                parts.push(format!("d_S {} != {}", row.d_s, row.expected_d_s));
            }
            if row.k != Some(row.expected_k) {
                parts.push(format!("certified at {:?}, expected level {}", row.k, row.expected_k));
            }
            if row.rational == Some(false) {
                parts.push("exact confirmation failed".into());
            }
            format!("{:?} r={:?}: {}", row.dims, row.r, parts.join("; "))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level1_dimensions_match_reference_values() {
        for &(d, r1, r2) in TABLE1 {
            assert_eq!(max_level1_dimension(d, d, 1).unwrap(), r1, "d = {d}");
            assert_eq!(max_level1_dimension(d, d, 2).unwrap(), r2, "d = {d}");
        }
    }

    #[test]
    fn level2_dimensions_are_squares() {
        for &(d, r1, r2) in TABLE2 {
            assert_eq!((d - 1) * (d - 1), r1);
            assert_eq!((d - 2) * (d - 2), r2);
        }
    }

    #[test]
    fn small_table3_rows_match() {
        let cfg = BenchConfig { table: 3, max_dim: 8, trials: 1, seed: 0, opts: CertifyOptions::default() };
        let rows = run(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].matches(), "{}", render(&rows));
        assert_eq!(rows[0].rational, Some(true));
    }
}
