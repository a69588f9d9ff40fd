use serde::{Deserialize, Serialize};

use crate::linalg::{Mode, RankResult, TolPolicy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// Every nonzero vector has Schmidt rank at least `r + 1`.
    REntangled {
        r: usize,
    },
    /// The mixed state has Schmidt number at least `bound`.
    SchmidtNumberAtLeast {
        bound: usize,
    },
    CompletelyEntangled,
    GenuinelyEntangled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    /// Not shown at this level. Says nothing about separability.
    NotCertifiedAtLevel {
        level: usize,
    },
    SystemTooLarge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum SkipReason {
    /// More columns than rows: independence is impossible.
    ColumnsExceedRows,
    RowsExceedGuardrail {
        message: String,
    },
    ResourceLimit {
        message: String,
    },
}

/// One linear system of a certification run. Row and column counts saturate
/// at `u64::MAX`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub label: String,
    pub rows: u64,
    pub cols: u64,
    pub rank: Option<RankResult>,
    pub skipped: Option<SkipReason>,
}

impl SystemReport {
    pub fn full_column_rank(&self) -> bool {
        self.rank.as_ref().is_some_and(|r| r.full_column_rank)
    }

    /// The system decided "not certified" (size bound or rank deficiency).
    pub fn failed(&self) -> bool {
        matches!(self.skipped, Some(SkipReason::ColumnsExceedRows))
            || self.rank.as_ref().is_some_and(|r| !r.full_column_rank)
    }
}

/// How the range of a mixed state was extracted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeExtraction {
    pub rank: usize,
    /// Eigenvalue cutoff relative to the largest eigenvalue.
    pub relative_cutoff: f64,
    /// Eigenvalues treated as zero (float estimates in rational mode).
    pub discarded_eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub target: Target,
    pub level_used: Option<usize>,
    pub verdict: Verdict,
    pub systems: Vec<SystemReport>,
    pub mode: Mode,
    pub tolerance: TolPolicy,
    /// Level at which the hierarchy is guaranteed complete, in decimal.
    pub level_cap: String,
    pub levels_tried: Vec<usize>,
    pub range: Option<RangeExtraction>,
}

impl Certificate {
    pub(crate) fn from_systems(
        target: Target,
        level: usize,
        systems: Vec<SystemReport>,
        mode: Mode,
        tolerance: TolPolicy,
        level_cap: String,
    ) -> Self {
        let verdict = if systems.iter().any(SystemReport::failed) {
            Verdict::NotCertifiedAtLevel { level }
        } else if systems.iter().all(SystemReport::full_column_rank) {
            Verdict::Certified
        } else {
            Verdict::SystemTooLarge
        };
        Self {
            target,
            level_used: Some(level),
            verdict,
            systems,
            mode,
            tolerance,
            level_cap,
            levels_tried: vec![level],
            range: None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn system_dims(&self) -> Vec<(u64, u64)> {
        self.systems.iter().map(|s| (s.rows, s.cols)).collect()
    }

    pub fn rank_results(&self) -> Vec<&RankResult> {
        self.systems.iter().filter_map(|s| s.rank.as_ref()).collect()
    }
}
