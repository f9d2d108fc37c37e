use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ProjectedInterval, SensorField, SensorId, TargetSet};

/// One greedy step: where the sweep stood, what it could pick, what it picked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionStep {
    /// x-coordinate of the current target (discrete) or point (continuous).
    pub current: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub current_target: Option<usize>,
    pub candidate_ids: Vec<SensorId>,
    pub chosen_id: SensorId,
    /// Rightmost covered coordinate after this step.
    pub reach: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reach_target: Option<usize>,
    /// K-OGA round, 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round: Option<usize>,
    /// Set when the step inserted a gap sensor rather than choosing a candidate.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub gap: bool,
}

/// Output of every selection algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    #[serde(rename = "selected")]
    pub selected_ids: Vec<SensorId>,
    #[serde(rename = "virtual")]
    pub virtual_ids: Vec<SensorId>,
    pub count: usize,
    pub fully_covered: bool,
    pub trace: Vec<SelectionStep>,
    /// Intervals of the gap sensors in `virtual_ids`.
    #[serde(default)]
    pub gap_sensors: Vec<ProjectedInterval>,
    /// Work counter: candidate inspections plus steps.
    #[serde(default)]
    pub comparisons: u64,
}

impl SelectionResult {
    pub fn real_count(&self) -> usize {
        self.count - self.virtual_ids.len()
    }

    pub fn virtual_count(&self) -> usize {
        self.virtual_ids.len()
    }

    /// Intervals of the selected sensors in selection order, resolving real
    /// ids through `field` and gap sensors through the ledger.
    pub fn intervals(&self, field: &SensorField) -> Result<Vec<ProjectedInterval>> {
        let lookup: HashMap<SensorId, ProjectedInterval> = field
            .intervals()
            .iter()
            .chain(self.gap_sensors.iter())
            .map(|iv| (iv.sensor_id, *iv))
            .collect();
        self.selected_ids
            .iter()
            .map(|id| {
                lookup
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::param(format!("selected sensor {id} is not in the field")))
            })
            .collect()
    }

    /// Structural invariants of a result.
    pub fn validate(&self) -> Result<()> {
        let unique: BTreeSet<_> = self.selected_ids.iter().collect();
        if unique.len() != self.selected_ids.len() {
            return Err(Error::Invariant("duplicate selected sensor".into()));
        }
        if self.count != self.selected_ids.len() {
            return Err(Error::Invariant("count differs from the number of selected sensors".into()));
        }
        if let Some(v) = self.virtual_ids.iter().find(|v| !unique.contains(v)) {
            return Err(Error::Invariant(format!("virtual sensor {v} is not selected")));
        }
        // methods without gap sensors may still leave targets uncovered
        if self.fully_covered && !self.virtual_ids.is_empty() {
            return Err(Error::Invariant("fully_covered set although gap sensors were used".into()));
        }
        if self.gap_sensors.len() != self.virtual_ids.len() {
            return Err(Error::Invariant("gap-sensor ledger differs from the virtual ids".into()));
        }
        for step in &self.trace {
            if !step.gap && !step.candidate_ids.contains(&step.chosen_id) {
                return Err(Error::Invariant(format!(
                    "sensor {} chosen outside its candidate set",
                    step.chosen_id
                )));
            }
        }
        Ok(())
    }
}

/// Accumulates a selection while an algorithm runs.
#[derive(Debug, Default)]
pub(crate) struct SelectionBuilder {
    selected: Vec<SensorId>,
    virtual_ids: Vec<SensorId>,
    gaps: Vec<ProjectedInterval>,
    trace: Vec<SelectionStep>,
    pub(crate) comparisons: u64,
}

impl SelectionBuilder {
    pub(crate) fn select(&mut self, interval: &ProjectedInterval, step: SelectionStep) {
        self.selected.push(interval.sensor_id);
        if interval.is_virtual {
            self.virtual_ids.push(interval.sensor_id);
            self.gaps.push(*interval);
        }
        self.trace.push(step);
    }

    /// Takes over sensors selected earlier without recording a step.
    pub(crate) fn adopt(&mut self, interval: &ProjectedInterval) {
        self.selected.push(interval.sensor_id);
        if interval.is_virtual {
            self.virtual_ids.push(interval.sensor_id);
            self.gaps.push(*interval);
        }
    }

    pub(crate) fn selected_len(&self) -> usize {
        self.selected.len()
    }

    pub(crate) fn selected_since(&self, from: usize) -> &[SensorId] {
        &self.selected[from..]
    }

    pub(crate) fn finish(self) -> SelectionResult {
        SelectionResult {
            count: self.selected.len(),
            fully_covered: self.virtual_ids.is_empty(),
            selected_ids: self.selected,
            virtual_ids: self.virtual_ids,
            trace: self.trace,
            gap_sensors: self.gaps,
            comparisons: self.comparisons,
        }
    }
}

/// Checks `|(S_1 ∪ … ∪ S_i) ∩ S_{i+1}| = |S_i ∩ S_{i+1}|` for every target,
/// where `S_i` is the set of selected intervals covering target `i`.
///
/// Returns the first target index `i` where the equality fails.
pub fn markov_violation(selected: &[ProjectedInterval], targets: &TargetSet) -> Option<usize> {
    let covering = |x: f64| -> BTreeSet<usize> {
        selected
            .iter()
            .enumerate()
            .filter(|(_, iv)| iv.contains(x))
            .map(|(i, _)| i)
            .collect()
    };
    let xs = targets.xs();
    let mut union: BTreeSet<usize> = BTreeSet::new();
    let mut prev = match xs.first() {
        Some(&x) => covering(x),
        None => return None,
    };
    for (i, &x) in xs.iter().enumerate().skip(1) {
        union.extend(prev.iter().copied());
        let next = covering(x);
        let with_union = union.intersection(&next).count();
        let with_prev = prev.intersection(&next).count();
        if with_union != with_prev {
            return Some(i - 1);
        }
        prev = next;
    }
    None
}
