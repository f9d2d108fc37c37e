use crate::error::{Error, Result};
use crate::model::{ProjectedInterval, SensorField, SensorId, TargetSet};

/// Per-target coverage multiplicity by the intervals of `field`.
pub(crate) fn multiplicity(field: &SensorField, targets: &TargetSet) -> Vec<usize> {
    let mut diff = vec![0isize; targets.len() + 1];
    for iv in field.intervals() {
        let (lo, hi) = targets.covered_range(iv);
        if lo < hi {
            diff[lo] += 1;
            diff[hi] -= 1;
        }
    }
    let mut running = 0isize;
    diff[..targets.len()]
        .iter()
        .map(|d| {
            running += d;
            running as usize
        })
        .collect()
}

/// Adds gap sensors so that every target can be covered `k` times.
///
/// Each maximal run of consecutive targets covered fewer than `k` times
/// receives `k - min multiplicity` gap sensors. A gap sensor spans the run
/// and stretches outwards to the nearest interval endpoint short of the
/// neighbouring targets (to the domain edge for a run at either end), so it
/// touches the adjacent real intervals but covers no target outside the run.
pub fn augment_with_gap_sensors(
    field: &SensorField,
    targets: &TargetSet,
    k: usize,
) -> Result<SensorField> {
    if k < 1 {
        return Err(Error::param("k must be at least 1"));
    }
    let mult = multiplicity(field, targets);
    let xs = targets.xs();
    let mut endpoints: Vec<f64> = field.intervals().iter().flat_map(|iv| [iv.u, iv.v]).collect();
    endpoints.sort_by(f64::total_cmp);
    let domain = field.domain();
    // largest endpoint in (after, upto], else `upto`
    let left_bound = |after: Option<f64>, upto: f64| match after {
        None => domain.start.min(upto),
        Some(prev) => {
            let i = endpoints.partition_point(|&e| e <= upto);
            match i.checked_sub(1).map(|j| endpoints[j]) {
                Some(e) if e > prev => e,
                _ => upto,
            }
        }
    };
    // smallest endpoint in [from, before), else `from`
    let right_bound = |from: f64, before: Option<f64>| match before {
        None => domain.end.max(from),
        Some(next) => {
            let i = endpoints.partition_point(|&e| e < from);
            match endpoints.get(i) {
                Some(&e) if e < next => e,
                _ => from,
            }
        }
    };
    let mut next_id = field.next_id();
    let mut extra = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if mult[i] >= k {
            i += 1;
            continue;
        }
        let start = i;
        let mut lowest = mult[i];
        while i < xs.len() && mult[i] < k {
            lowest = lowest.min(mult[i]);
            i += 1;
        }
        let u = left_bound(start.checked_sub(1).map(|p| xs[p]), xs[start]);
        let v = right_bound(xs[i - 1], xs.get(i).copied());
        for _ in 0..(k - lowest) {
            extra.push(ProjectedInterval::gap(SensorId(next_id), u, v));
            next_id += 1;
        }
    }
    if extra.is_empty() {
        return Ok(field.clone());
    }
    field.with_intervals(&extra)
}
