use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;

use crate::algorithms::{find_gaps, k_oga, logm, oga_continuous, SelectionResult};
use crate::baselines::{build_barrier_graph, build_k_barrier_graph, greedy_max_coverage, k_disjoint_paths};
use crate::deployment::{generate_with, realization_rng};
use crate::error::{Error, Result};
use crate::model::{coverage_fraction, discretize, Domain, ProjectedInterval, SensorField, SensorId, TargetSet};

use super::{per_realization, ExperimentConfig, ExperimentReport, Record};

/// Resampling attempts per realization before a multi-gap run gives up.
const MAX_RESAMPLES: u64 = 64;

/// Uniform targets added for the max-coverage greedy in coverage experiments.
const GREEDY_GRID: usize = 10_000;

fn field_for(config: &ExperimentConfig, n: usize, stream: u64) -> Result<(SensorField, ChaCha8Rng)> {
    let spec = config.deployment_with(n);
    let mut rng = realization_rng(config.base_seed, stream);
    let field = generate_with(&spec, &mut rng)?;
    Ok((field, rng))
}

/// Discretized targets, or the domain midpoint when there are no sensors.
fn targets_for(field: &SensorField) -> Result<TargetSet> {
    if field.is_empty() {
        let d = field.domain();
        TargetSet::new(vec![d.start + d.width() / 2.0])
    } else {
        discretize(field)
    }
}

/// Targets for the max-coverage greedy: every elementary segment's midpoint
/// plus a uniform grid, so that target counts track covered length.
fn coverage_targets(field: &SensorField) -> Result<TargetSet> {
    let d = field.domain();
    let mut xs = discretize(field)?.xs().to_vec();
    let step = d.width() / GREEDY_GRID as f64;
    xs.extend((0..=GREEDY_GRID).map(|i| d.start + step * i as f64));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    TargetSet::new(xs)
}

/// Covered fraction of `domain` after each prefix of `selected`, starting
/// with 0 for the empty prefix. Gap sensors add nothing.
pub fn cumulative_coverage(selected: &[ProjectedInterval], domain: &Domain) -> Result<Vec<f64>> {
    let mut curve = Vec::with_capacity(selected.len() + 1);
    curve.push(0.0);
    for i in 1..=selected.len() {
        curve.push(coverage_fraction(&selected[..i], domain)?);
    }
    Ok(curve)
}

/// First sensor count beyond 0 at which the greedy curve no longer lies
/// above the OGA curve, linearly interpolated between integer counts.
/// A curve that has ended stays at its final value.
pub fn intersection_point(oga: &[f64], greedy: &[f64]) -> f64 {
    const EPS: f64 = 1e-12;
    let last = oga.len().max(greedy.len());
    if last <= 1 {
        return 0.0;
    }
    let at = |c: &[f64], i: usize| c.get(i).or(c.last()).copied().unwrap_or(0.0);
    let diff = |i: usize| at(greedy, i) - at(oga, i);
    for i in 1..last {
        let d = diff(i);
        if d <= EPS {
            if i == 1 {
                return 1.0;
            }
            let prev = diff(i - 1);
            return (i - 1) as f64 + prev / (prev - d);
        }
    }
    (last - 1) as f64
}

struct Curves {
    oga: Vec<f64>,
    greedy: Vec<f64>,
    fully_covered: bool,
}

impl Curves {
    fn oga_total(&self) -> usize {
        self.oga.len() - 1
    }

    fn greedy_total(&self) -> usize {
        self.greedy.len() - 1
    }

    /// OGA using more real sensors than greedy on a gap-free field.
    fn violates(&self) -> bool {
        self.fully_covered && self.oga_total() > self.greedy_total()
    }
}

fn coverage_curves(field: &SensorField) -> Result<Curves> {
    let domain = field.domain();
    if field.is_empty() {
        return Ok(Curves { oga: vec![0.0], greedy: vec![0.0], fully_covered: false });
    }
    let o = oga_continuous(field, &domain)?;
    o.validate()?;
    let oga_ivs: Vec<ProjectedInterval> = o.intervals(field)?.into_iter().filter(|iv| !iv.is_virtual).collect();
    let g = greedy_max_coverage(field, &coverage_targets(field)?)?;
    g.validate()?;
    Ok(Curves {
        oga: cumulative_coverage(&oga_ivs, &domain)?,
        greedy: cumulative_coverage(&g.intervals(field)?, &domain)?,
        fully_covered: o.fully_covered,
    })
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn record(x: usize, metrics: impl IntoIterator<Item = (String, f64)>) -> Record {
    Record { x, metrics: metrics.into_iter().collect(), series: BTreeMap::new() }
}

/// Coverage against number of selected sensors, OGA versus max-coverage
/// greedy, for the first realization of each sensor count in the sweep.
pub fn run_coverage_curve(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let columns = names(&["oga_total", "greedy_total", "oga_coverage", "greedy_coverage", "intersection"]);
    let mut report = ExperimentReport::new(config, columns.clone());
    for &n in &config.sweep {
        let (field, _) = field_for(config, n, 0)?;
        let c = coverage_curves(&field)?;
        report.metadata.invariant_violations += u64::from(c.violates());
        let values = [
            c.oga_total() as f64,
            c.greedy_total() as f64,
            *c.oga.last().unwrap(),
            *c.greedy.last().unwrap(),
            intersection_point(&c.oga, &c.greedy),
        ];
        let mut rec = record(n, columns.iter().cloned().zip(values));
        rec.series.insert("oga".into(), c.oga);
        rec.series.insert("greedy".into(), c.greedy);
        report.records.push(rec);
    }
    Ok(report)
}

/// Mean intersection point and cost difference (greedy minus OGA real
/// sensors) per sensor count.
pub fn run_intersection_sweep(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let columns = names(&[
        "intersection",
        "cost_difference",
        "oga_total",
        "greedy_total",
        "fully_coverable",
        "oga_fewer",
    ]);
    let mut report = ExperimentReport::new(config, columns.clone());
    for &n in &config.sweep {
        let runs = per_realization(config.realizations, |r| {
            let (field, _) = field_for(config, n, r)?;
            let c = coverage_curves(&field)?;
            Ok((intersection_point(&c.oga, &c.greedy), c.oga_total(), c.greedy_total(), c.fully_covered, c.violates()))
        })?;
        let count = runs.len() as f64;
        let mut sums = [0.0; 4];
        let (mut fully, mut fewer) = (0u32, 0u32);
        for &(x, o, g, full, bad) in &runs {
            sums[0] += x;
            sums[1] += g as f64 - o as f64;
            sums[2] += o as f64;
            sums[3] += g as f64;
            if full {
                fully += 1;
                fewer += u32::from(o < g);
            }
            report.metadata.invariant_violations += u64::from(bad);
        }
        let values = [
            sums[0] / count,
            sums[1] / count,
            sums[2] / count,
            sums[3] / count,
            f64::from(fully),
            f64::from(fewer),
        ];
        report.records.push(record(n, columns.iter().cloned().zip(values)));
    }
    Ok(report)
}

const KBARRIER_METRICS: [&str; 8] = [
    "koga",
    "bench",
    "diff",
    "koga_real",
    "koga_virtual",
    "bench_real",
    "bench_virtual",
    "anygap_bench",
];

/// Mean selected sensors (real plus gap) of K-OGA and the disjoint-path
/// benchmark per sensor count and K. `anygap_bench` is the benchmark on the
/// complete graph that lets one gap sensor bridge any two sensors.
pub fn run_kbarrier(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let columns: Vec<String> = config
        .k_values
        .iter()
        .flat_map(|k| KBARRIER_METRICS.iter().map(move |m| format!("{m}_k{k}")))
        .collect();
    let mut report = ExperimentReport::new(config, columns.clone());
    for &n in &config.sweep {
        let runs = per_realization(config.realizations, |r| {
            let (field, _) = field_for(config, n, r)?;
            let targets = targets_for(&field)?;
            let graph = build_barrier_graph(&field, &field.domain());
            let mut values = Vec::with_capacity(columns.len());
            for &k in &config.k_values {
                let a = k_oga(&field, &targets, k)?;
                a.validate()?;
                let b = k_disjoint_paths(&build_k_barrier_graph(&field, &targets, k)?, k)?;
                b.validate()?;
                let lit = k_disjoint_paths(&graph, k)?;
                values.extend([
                    a.count as f64,
                    b.count as f64,
                    b.count as f64 - a.count as f64,
                    a.real_count() as f64,
                    a.virtual_count() as f64,
                    b.real_count() as f64,
                    b.virtual_count() as f64,
                    lit.count as f64,
                ]);
            }
            Ok(values)
        })?;
        let mut sums = vec![0.0; columns.len()];
        for values in &runs {
            for (s, v) in sums.iter_mut().zip(values) {
                *s += v;
            }
        }
        let count = runs.len() as f64;
        report.records.push(record(n, columns.iter().cloned().zip(sums.into_iter().map(|s| s / count))));
    }
    Ok(report)
}

/// Outcome of failing one set of sensors in one realization.
///
/// `diff` counts real sensors only. Gap sensors are bookkeeping: LOGM keeps
/// adopted gap sensors next to new ones where a fresh run would emit a
/// single merged one, so `total_diff` can exceed `diff`.
struct Mending {
    diff: i64,
    total_diff: i64,
    gaps: usize,
}

/// Mends `failed` with LOGM and compares against a fresh continuous OGA run
/// on the field without the failed sensors.
fn mend_and_compare(field: &SensorField, previous: &SelectionResult, failed: BTreeSet<SensorId>) -> Result<Mending> {
    let domain = field.domain();
    let gaps = find_gaps(previous, &failed, field, &domain)?;
    let mended = logm(previous, &failed, &gaps, field)?;
    mended.validate()?;
    let removed: Vec<SensorId> = failed.into_iter().collect();
    let fresh = oga_continuous(&field.without(&removed), &domain)?;
    Ok(Mending {
        diff: real_ids(&mended).len() as i64 - real_ids(&fresh).len() as i64,
        total_diff: mended.count as i64 - fresh.count as i64,
        gaps: gaps.len(),
    })
}

fn real_ids(result: &SelectionResult) -> Vec<SensorId> {
    let virtuals: BTreeSet<SensorId> = result.virtual_ids.iter().copied().collect();
    result.selected_ids.iter().copied().filter(|id| !virtuals.contains(id)).collect()
}

/// Every real sensor of the initial OGA selection fails in turn; records the
/// extra sensors LOGM needs over a fresh OGA run.
pub fn run_single_failure(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let columns = names(&[
        "max_diff",
        "mean_diff",
        "trials",
        "bound_violations",
        "mean_oga",
        "max_total_diff",
        "mean_total_diff",
    ]);
    let mut report = ExperimentReport::new(config, columns.clone());
    for &n in &config.sweep {
        let runs = per_realization(config.realizations, |r| {
            let (field, _) = field_for(config, n, r)?;
            let previous = oga_continuous(&field, &field.domain())?;
            let mut diffs = Vec::new();
            for id in real_ids(&previous) {
                let mending = mend_and_compare(&field, &previous, BTreeSet::from([id]))?;
                diffs.push((mending.diff, mending.total_diff));
            }
            Ok((diffs, previous.count))
        })?;
        let (mut max, mut sum, mut trials, mut over) = (0i64, 0i64, 0u64, 0u64);
        let (mut total_max, mut total_sum) = (i64::MIN, 0i64);
        let mut oga_sum = 0.0;
        for (diffs, oga_count) in &runs {
            oga_sum += *oga_count as f64;
            for &(d, total) in diffs {
                max = max.max(d);
                sum += d;
                total_max = total_max.max(total);
                total_sum += total;
                trials += 1;
                over += u64::from(d > 1);
                report.metadata.invariant_violations += u64::from(d < 0);
            }
        }
        let per_trial = |x: i64| if trials == 0 { 0.0 } else { x as f64 / trials as f64 };
        let values = [
            max as f64,
            per_trial(sum),
            trials as f64,
            over as f64,
            oga_sum / runs.len() as f64,
            if trials == 0 { 0.0 } else { total_max as f64 },
            per_trial(total_sum),
        ];
        report.records.push(record(n, columns.iter().cloned().zip(values)));
    }
    Ok(report)
}

/// `m` sensors of the initial OGA selection fail at once, drawn uniformly
/// without replacement. A realization whose selection has fewer than `m`
/// real sensors is redrawn from a fresh stream.
pub fn run_multi_gap(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let columns = names(&[
        "max_diff",
        "mean_diff",
        "bound",
        "bound_violations",
        "mean_gaps",
        "resampled",
        "max_total_diff",
        "mean_total_diff",
    ]);
    let mut report = ExperimentReport::new(config, columns.clone());
    let n = config.deployment.n;
    for &m in &config.sweep {
        let runs = per_realization(config.realizations, |r| {
            for attempt in 0..MAX_RESAMPLES {
                let (field, mut rng) = field_for(config, n, r | (attempt << 32))?;
                let previous = oga_continuous(&field, &field.domain())?;
                let reals = real_ids(&previous);
                if reals.len() < m {
                    log::warn!(
                        "realization {r}: {} real sensors selected, fewer than m = {m}; resampling",
                        reals.len()
                    );
                    continue;
                }
                let failed: BTreeSet<SensorId> = sample(&mut rng, reals.len(), m).into_iter().map(|i| reals[i]).collect();
                return Ok((mend_and_compare(&field, &previous, failed)?, attempt));
            }
            Err(Error::param(format!(
                "realization {r}: no field with at least {m} selected sensors after {MAX_RESAMPLES} draws"
            )))
        })?;
        let bound = (2 * m as i64 - 1).max(0);
        let (mut max, mut sum, mut over, mut gaps, mut resampled) = (0i64, 0i64, 0u64, 0usize, 0u64);
        let (mut total_max, mut total_sum) = (i64::MIN, 0i64);
        for (mending, attempts) in &runs {
            total_max = total_max.max(mending.total_diff);
            total_sum += mending.total_diff;
            max = max.max(mending.diff);
            sum += mending.diff;
            over += u64::from(mending.diff > bound);
            gaps += mending.gaps;
            resampled += attempts;
            report.metadata.invariant_violations += u64::from(mending.diff < 0);
        }
        let count = runs.len() as f64;
        let values = [
            max as f64,
            sum as f64 / count,
            bound as f64,
            over as f64,
            gaps as f64 / count,
            resampled as f64,
            total_max as f64,
            total_sum as f64 / count,
        ];
        report.records.push(record(m, columns.iter().cloned().zip(values)));
    }
    Ok(report)
}
