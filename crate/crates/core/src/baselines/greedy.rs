use crate::algorithms::{SelectionBuilder, SelectionResult, SelectionStep};
use crate::error::{Error, Result};
use crate::model::{SensorField, TargetSet};

/// Max-coverage greedy: repeatedly take the sensor covering the most still
/// uncovered targets (ties: lowest field index) until every target is
/// covered or no sensor adds anything. Gap sensors are never used.
pub fn greedy_max_coverage(field: &SensorField, targets: &TargetSet) -> Result<SelectionResult> {
    if targets.is_empty() {
        return Err(Error::param("target set is empty"));
    }
    let intervals = field.intervals();
    let ranges: Vec<(usize, usize)> = intervals
        .iter()
        .map(|iv| if iv.is_virtual { (0, 0) } else { targets.covered_range(iv) })
        .collect();
    let m = targets.len();
    let mut uncovered = vec![true; m];
    let mut remaining = m;
    let mut used = vec![false; intervals.len()];
    let mut prefix = vec![0usize; m + 1];
    let mut out = SelectionBuilder::default();

    while remaining > 0 {
        for t in 0..m {
            prefix[t + 1] = prefix[t] + usize::from(uncovered[t]);
        }
        let mut best: Option<(usize, usize)> = None;
        let mut candidates = Vec::new();
        for (i, &(lo, hi)) in ranges.iter().enumerate() {
            out.comparisons += 1;
            if used[i] {
                continue;
            }
            let gain = prefix[hi] - prefix[lo];
            if gain == 0 {
                continue;
            }
            candidates.push(intervals[i].sensor_id);
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((i, gain));
            }
        }
        let Some((i, gain)) = best else { break };
        used[i] = true;
        let (lo, hi) = ranges[i];
        for flag in &mut uncovered[lo..hi] {
            *flag = false;
        }
        remaining -= gain;
        let iv = &intervals[i];
        out.select(
            iv,
            SelectionStep {
                current: targets.xs()[lo],
                current_target: Some(lo),
                candidate_ids: candidates,
                chosen_id: iv.sensor_id,
                reach: targets.xs()[hi - 1],
                reach_target: Some(hi - 1),
                round: None,
                gap: false,
            },
        );
    }
    let mut result = out.finish();
    result.fully_covered = remaining == 0;
    Ok(result)
}
