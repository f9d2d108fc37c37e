//! Order-based greedy selection over discrete targets and over a segment.

use crate::error::{Error, Result};
use crate::model::{Domain, ProjectedInterval, SensorField, SensorId, TargetSet};

use super::augment::augment_with_gap_sensors;
use super::result::{SelectionBuilder, SelectionResult, SelectionStep};

/// Target index ranges `[lo, hi)` of every interval, in field order.
pub(crate) struct CoverageTable {
    pub(crate) lo: Vec<usize>,
    pub(crate) hi: Vec<usize>,
}

impl CoverageTable {
    pub(crate) fn new(field: &SensorField, targets: &TargetSet) -> Self {
        let (lo, hi) = field.intervals().iter().map(|iv| targets.covered_range(iv)).unzip();
        CoverageTable { lo, hi }
    }
}

pub(crate) fn check_targets(field: &SensorField, targets: &TargetSet) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::param("target set is empty"));
    }
    let d = field.domain();
    let xs = targets.xs();
    if xs[0] < d.start || xs[xs.len() - 1] > d.end {
        return Err(Error::param(format!(
            "targets must lie inside the field domain [{}, {}]",
            d.start, d.end
        )));
    }
    Ok(())
}

/// One left-to-right OGA pass that 1-covers the targets listed in `needed`
/// (sorted original target indices) using sensors still marked available.
///
/// Sensors are scanned once in field order. Because that order sorts by `u`,
/// any sensor scanned at an earlier step reaches no further than the sensor
/// chosen there, so only newly scanned sensors can be candidates.
pub(crate) fn discrete_pass(
    field: &SensorField,
    targets: &TargetSet,
    table: &CoverageTable,
    needed: &[usize],
    available: &mut [bool],
    round: Option<usize>,
    out: &mut SelectionBuilder,
) -> Result<Vec<usize>> {
    let m = targets.len();
    // rank[t] = number of needed targets with index < t
    let mut rank = vec![0usize; m + 1];
    {
        let mut j = 0;
        for (t, r) in rank.iter_mut().enumerate() {
            while j < needed.len() && needed[j] < t {
                j += 1;
            }
            *r = j;
        }
    }
    out.comparisons += m as u64;

    let intervals = field.intervals();
    let xs = targets.xs();
    let mut chosen = Vec::new();
    let mut c = 0;
    let mut ptr = 0;
    while c < needed.len() {
        let mut best: Option<(usize, usize, usize)> = None; // (index, hi, span)
        let mut candidates = Vec::new();
        while ptr < intervals.len() && rank[table.lo[ptr]] <= c {
            out.comparisons += 1;
            let lo = rank[table.lo[ptr]];
            let hi = rank[table.hi[ptr]];
            if available[ptr] && hi > c {
                candidates.push(intervals[ptr].sensor_id);
                let span = hi - lo;
                let better = match best {
                    None => true,
                    Some((_, bh, bs)) => hi > bh || (hi == bh && span > bs),
                };
                if better {
                    best = Some((ptr, hi, span));
                }
            }
            ptr += 1;
        }
        let (idx, hi, _) = best.ok_or_else(|| {
            Error::Invariant(format!("no available sensor covers target {}", needed[c]))
        })?;
        out.comparisons += 1;
        available[idx] = false;
        chosen.push(idx);
        let iv = &intervals[idx];
        let step = SelectionStep {
            current: xs[needed[c]],
            current_target: Some(needed[c]),
            candidate_ids: candidates,
            chosen_id: iv.sensor_id,
            reach: xs[needed[hi - 1]],
            reach_target: Some(needed[hi - 1]),
            round,
            gap: false,
        };
        out.select(iv, step);
        c = hi;
    }
    Ok(chosen)
}

/// Minimum-cardinality 1-cover of the targets.
///
/// Starting from the leftmost target, repeatedly picks, among the sensors
/// covering the current target, the one covering the most targets to its
/// right (ties: most targets overall, then lowest field index), then moves to
/// the first target beyond its reach. Uncoverable stretches are handled by
/// gap sensors added beforehand.
pub fn oga(field: &SensorField, targets: &TargetSet) -> Result<SelectionResult> {
    check_targets(field, targets)?;
    let augmented = augment_with_gap_sensors(field, targets, 1)?;
    let table = CoverageTable::new(&augmented, targets);
    let needed: Vec<usize> = (0..targets.len()).collect();
    let mut available = vec![true; augmented.len()];
    let mut out = SelectionBuilder::default();
    discrete_pass(&augmented, targets, &table, &needed, &mut available, None, &mut out)?;
    Ok(out.finish())
}

/// Greedy sweep covering `[start, end]` with the intervals accepted by `usable`.
///
/// At point `p` the candidates are usable intervals with `u <= p < v`; the
/// one reaching furthest right wins (ties: longer interval, then lowest field
/// index). When nothing extends past `p`, a gap sensor spans `p` up to the
/// next usable interval start (or `end`). Returns the final reach.
pub(crate) fn sweep_segment(
    intervals: &[ProjectedInterval],
    start: f64,
    end: f64,
    usable: impl Fn(&ProjectedInterval) -> bool,
    next_id: &mut u32,
    out: &mut SelectionBuilder,
) -> f64 {
    let mut p = start;
    let mut ptr = 0;
    while p < end {
        let mut best: Option<usize> = None;
        let mut candidates = Vec::new();
        while ptr < intervals.len() && intervals[ptr].u <= p {
            out.comparisons += 1;
            let iv = &intervals[ptr];
            if iv.v > p && usable(iv) {
                candidates.push(iv.sensor_id);
                let better = match best {
                    None => true,
                    Some(b) => {
                        let bv = &intervals[b];
                        iv.v > bv.v || (iv.v == bv.v && iv.u < bv.u)
                    }
                };
                if better {
                    best = Some(ptr);
                }
            }
            ptr += 1;
        }
        out.comparisons += 1;
        match best {
            Some(b) => {
                let iv = intervals[b];
                out.select(
                    &iv,
                    SelectionStep {
                        current: p,
                        current_target: None,
                        candidate_ids: candidates,
                        chosen_id: iv.sensor_id,
                        reach: iv.v,
                        reach_target: None,
                        round: None,
                        gap: false,
                    },
                );
                p = iv.v;
            }
            None => {
                let mut resume = end;
                while ptr < intervals.len() {
                    out.comparisons += 1;
                    let iv = &intervals[ptr];
                    if iv.v > iv.u && usable(iv) {
                        resume = iv.u.min(end);
                        break;
                    }
                    ptr += 1;
                }
                let gap = ProjectedInterval::gap(SensorId(*next_id), p, resume);
                *next_id += 1;
                out.select(
                    &gap,
                    SelectionStep {
                        current: p,
                        current_target: None,
                        candidate_ids: Vec::new(),
                        chosen_id: gap.sensor_id,
                        reach: resume,
                        reach_target: None,
                        round: None,
                        gap: true,
                    },
                );
                p = resume;
            }
        }
    }
    p
}

/// Minimum-cardinality cover of the segment `domain` (continuous OGA).
pub fn oga_continuous(field: &SensorField, domain: &Domain) -> Result<SelectionResult> {
    if domain.start >= domain.end {
        return Err(Error::param(format!(
            "continuous OGA needs start < end, got [{}, {}]",
            domain.start, domain.end
        )));
    }
    let mut out = SelectionBuilder::default();
    let mut next_id = field.next_id();
    sweep_segment(field.intervals(), domain.start, domain.end, |_| true, &mut next_id, &mut out);
    Ok(out.finish())
}
