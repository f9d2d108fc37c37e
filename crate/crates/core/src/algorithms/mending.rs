//! Local gap mending after failures of previously selected sensors.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Domain, ProjectedInterval, SensorField, SensorId};

use super::oga::sweep_segment;
use super::result::{SelectionBuilder, SelectionResult};

/// A maximal stretch of the domain left uncovered after failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub u_g: f64,
    pub v_g: f64,
    /// Failed sensors whose intervals reach into the gap.
    pub failed_ids: Vec<SensorId>,
}

fn check_failed(previous: &SelectionResult, failed: &BTreeSet<SensorId>) -> Result<()> {
    let selected: HashSet<SensorId> = previous.selected_ids.iter().copied().collect();
    let virtuals: HashSet<SensorId> = previous.virtual_ids.iter().copied().collect();
    for id in failed {
        if !selected.contains(id) || virtuals.contains(id) {
            return Err(Error::NotSelected(*id));
        }
    }
    Ok(())
}

fn lookup(
    field: &SensorField,
    previous: &SelectionResult,
) -> HashMap<SensorId, ProjectedInterval> {
    field
        .intervals()
        .iter()
        .chain(previous.gap_sensors.iter())
        .map(|iv| (iv.sensor_id, *iv))
        .collect()
}

/// Uncovered stretches of `domain` once `failed` are removed from the
/// previous selection, sorted by start. Stretches opened by neighbouring
/// failures come out merged; stretches that no failed sensor touches
/// (already uncovered before) are not reported.
pub fn find_gaps(
    previous: &SelectionResult,
    failed: &BTreeSet<SensorId>,
    field: &SensorField,
    domain: &Domain,
) -> Result<Vec<Gap>> {
    check_failed(previous, failed)?;
    if failed.is_empty() {
        return Ok(Vec::new());
    }
    let by_id = lookup(field, previous);
    let resolve = |id: &SensorId| {
        by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::param(format!("sensor {id} is not in the field")))
    };
    let mut surviving = Vec::new();
    for id in previous.selected_ids.iter().filter(|id| !failed.contains(id)) {
        surviving.push(resolve(id)?);
    }
    let failed_ivs: Vec<ProjectedInterval> = failed.iter().map(resolve).collect::<Result<_>>()?;

    surviving.sort_by(|a, b| a.u.total_cmp(&b.u));
    let mut holes = Vec::new();
    let mut reach = domain.start;
    for iv in surviving.iter().filter(|iv| iv.v >= domain.start && iv.u <= domain.end) {
        if iv.u > reach {
            holes.push((reach, iv.u));
        }
        reach = reach.max(iv.v);
    }
    if reach < domain.end {
        holes.push((reach, domain.end));
    }

    Ok(holes
        .into_iter()
        .filter(|(u, v)| u < v)
        .filter_map(|(u, v)| {
            let ids: Vec<SensorId> = failed_ivs
                .iter()
                .filter(|f| f.u < v && f.v > u)
                .map(|f| f.sensor_id)
                .collect();
            (!ids.is_empty()).then_some(Gap { u_g: u, v_g: v, failed_ids: ids })
        })
        .collect())
}

/// Locally optimal gap mending.
///
/// Keeps every surviving sensor of `previous` and, gap by gap from left to
/// right, runs the continuous greedy sweep from `u_g` until `v_g` is covered
/// using only sensors that were neither selected before nor failed.
pub fn logm(
    previous: &SelectionResult,
    failed: &BTreeSet<SensorId>,
    gaps: &[Gap],
    field: &SensorField,
) -> Result<SelectionResult> {
    check_failed(previous, failed)?;
    let by_id = lookup(field, previous);
    let mut out = SelectionBuilder::default();
    for id in previous.selected_ids.iter().filter(|id| !failed.contains(id)) {
        let iv = by_id
            .get(id)
            .ok_or_else(|| Error::param(format!("sensor {id} is not in the field")))?;
        out.adopt(iv);
    }

    let mut taken: HashSet<SensorId> = previous.selected_ids.iter().copied().collect();
    taken.extend(failed.iter().copied());
    let mut next_id = field
        .next_id()
        .max(previous.selected_ids.iter().map(|id| id.0 + 1).max().unwrap_or(0));

    let mut ordered: Vec<&Gap> = gaps.iter().collect();
    ordered.sort_by(|a, b| a.u_g.total_cmp(&b.u_g));
    let mut frontier = f64::NEG_INFINITY;
    for gap in ordered {
        let start = gap.u_g.max(frontier);
        if start >= gap.v_g {
            continue;
        }
        let before = out.selected_len();
        frontier = sweep_segment(
            field.intervals(),
            start,
            gap.v_g,
            |iv| !taken.contains(&iv.sensor_id),
            &mut next_id,
            &mut out,
        );
        taken.extend(out.selected_since(before).iter().copied());
    }
    Ok(out.finish())
}
