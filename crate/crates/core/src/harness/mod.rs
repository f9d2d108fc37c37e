//! Seeded Monte-Carlo campaigns and their reports.
//!
//! Realization `r` of a campaign always draws from stream `r` of the base
//! seed, and per-realization results are reduced in index order, so a report
//! does not depend on how many worker threads produced it.

mod experiments;
mod format;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deployment::{DeploymentSpec, RNG_NAME};
use crate::error::{Error, Result};

pub use experiments::{
    cumulative_coverage, intersection_point, run_coverage_curve, run_intersection_sweep, run_kbarrier,
    run_multi_gap, run_single_failure,
};
pub use format::format_g6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    #[serde(alias = "CoverageCurve")]
    CoverageCurve,
    #[serde(alias = "IntersectionSweep")]
    IntersectionSweep,
    #[serde(alias = "KBarrier")]
    KBarrier,
    #[serde(alias = "SingleFailure")]
    SingleFailure,
    #[serde(alias = "MultiGap")]
    MultiGap,
}

/// A campaign description, read from JSON.
///
/// `sweep` holds sensor counts for every experiment except `multi_gap`,
/// where it holds the number of simultaneous failures and the sensor count
/// comes from `deployment.n`. `deployment.seed` is ignored in favour of
/// `base_seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub deployment: DeploymentSpec,
    pub sweep: Vec<usize>,
    pub realizations: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Barrier multiplicities compared by `k_barrier`.
    #[serde(default = "default_k_values")]
    pub k_values: Vec<usize>,
}

fn default_k_values() -> Vec<usize> {
    vec![2, 4]
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.realizations < 1 {
            return Err(Error::param("realizations must be at least 1"));
        }
        if self.sweep.is_empty() {
            return Err(Error::param("sweep must not be empty"));
        }
        if self.experiment == ExperimentKind::KBarrier && (self.k_values.is_empty() || self.k_values.contains(&0)) {
            return Err(Error::param("k_values must be non-empty and every K at least 1"));
        }
        self.deployment.validate()
    }

    /// Deployment for a sweep point with `n` sensors.
    fn deployment_with(&self, n: usize) -> DeploymentSpec {
        DeploymentSpec { n, seed: self.base_seed, ..self.deployment.clone() }
    }
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub x: usize,
    pub metrics: BTreeMap<String, f64>,
    /// Per-step curves, for experiments that produce them.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config: ExperimentConfig,
    pub version: String,
    pub rng: String,
    /// Realizations where a cross-method sanity check failed (for example a
    /// fresh OGA run selecting more sensors than the mended selection).
    pub invariant_violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// Metric names in CSV column order.
    pub columns: Vec<String>,
    pub records: Vec<Record>,
    pub metadata: Metadata,
}

impl ExperimentReport {
    fn new(config: &ExperimentConfig, columns: Vec<String>) -> Self {
        ExperimentReport {
            columns,
            records: Vec::new(),
            metadata: Metadata {
                config: config.clone(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                rng: RNG_NAME.to_string(),
                invariant_violations: 0,
            },
        }
    }

    /// Header `sweep,<columns>` then one row per record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sweep");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.x.to_string());
            for c in &self.columns {
                out.push(',');
                out.push_str(&format_g6(r.metrics.get(c).copied().unwrap_or(f64::NAN)));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Looks up one metric of the record for sweep value `x`.
    pub fn metric(&self, x: usize, name: &str) -> Option<f64> {
        self.records.iter().find(|r| r.x == x)?.metrics.get(name).copied()
    }

    fn check_finite(&self) -> Result<()> {
        for r in &self.records {
            for (name, v) in &r.metrics {
                if !v.is_finite() {
                    return Err(Error::Invariant(format!("metric {name} at sweep {} is not finite", r.x)));
                }
            }
        }
        Ok(())
    }
}

/// Runs the campaign on the current rayon pool.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let report = match config.experiment {
        ExperimentKind::CoverageCurve => run_coverage_curve(config),
        ExperimentKind::IntersectionSweep => run_intersection_sweep(config),
        ExperimentKind::KBarrier => run_kbarrier(config),
        ExperimentKind::SingleFailure => run_single_failure(config),
        ExperimentKind::MultiGap => run_multi_gap(config),
    }?;
    report.check_finite()?;
    Ok(report)
}

/// Runs the campaign with at most `jobs` realizations in flight.
pub fn run_with_jobs(config: &ExperimentConfig, jobs: usize) -> Result<ExperimentReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run(config))
}

/// Evaluates `f` for realizations `0..count` in parallel and returns the
/// results in realization order; the first error by index wins.
fn per_realization<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let results: Vec<Result<T>> = (0..count as u64).into_par_iter().map(f).collect();
    results.into_iter().collect()
}
