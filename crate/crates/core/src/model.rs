//! Sensor geometry and the 1D interval model.
//!
//! Every sensor footprint is reduced to the closed x-extent `[u, v]` of its
//! orthogonal projection onto the target line. Intervals are clipped to the
//! coverage domain and kept sorted by `(u, v, id)`; that order is the index
//! order every selection algorithm refers to.

use std::cmp::Ordering;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SensorId(pub u32);

impl fmt::Display for SensorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensorKind {
    Omni,
    Directional,
}

/// A physical sensor. Angles are in degrees, counter-clockwise from +x.
///
/// The serialized form is the line-JSON record of a sensor-field file:
/// `{"id":0,"kind":"directional","x":1.0,"y":2.0,"radius":10.0,"fov":90.0,"direction":45.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sensor {
    pub id: SensorId,
    pub kind: SensorKind,
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fov: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<f64>,
}

impl Sensor {
    pub fn omni(id: u32, x: f64, y: f64, radius: f64) -> Self {
        Sensor {
            id: SensorId(id),
            kind: SensorKind::Omni,
            x,
            y,
            radius,
            fov: None,
            direction: None,
        }
    }

    pub fn directional(id: u32, x: f64, y: f64, radius: f64, fov: f64, direction: f64) -> Self {
        Sensor {
            id: SensorId(id),
            kind: SensorKind::Directional,
            x,
            y,
            radius,
            fov: Some(fov),
            direction: Some(direction),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x.is_finite() && self.y.is_finite()) {
            return Err(Error::param(format!("sensor {}: non-finite position", self.id)));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::param(format!("sensor {}: radius must be > 0", self.id)));
        }
        if self.kind == SensorKind::Directional {
            let fov = self
                .fov
                .ok_or_else(|| Error::param(format!("sensor {}: directional sensor without fov", self.id)))?;
            let dir = self.direction.ok_or_else(|| {
                Error::param(format!("sensor {}: directional sensor without direction", self.id))
            })?;
            if !(fov > 0.0 && fov <= 360.0) {
                return Err(Error::param(format!("sensor {}: fov must lie in (0, 360]", self.id)));
            }
            if !(0.0..360.0).contains(&dir) {
                return Err(Error::param(format!("sensor {}: direction must lie in [0, 360)", self.id)));
            }
        }
        Ok(())
    }
}

/// Closed interval `[u, v]` on the target line, owned by one sensor.
///
/// Gap sensors exist only as intervals and carry `is_virtual = true`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectedInterval {
    pub sensor_id: SensorId,
    pub u: f64,
    pub v: f64,
    #[serde(default, rename = "virtual", skip_serializing_if = "std::ops::Not::not")]
    pub is_virtual: bool,
}

impl ProjectedInterval {
    pub fn new(sensor_id: SensorId, u: f64, v: f64) -> Self {
        ProjectedInterval { sensor_id, u, v, is_virtual: false }
    }

    pub fn gap(sensor_id: SensorId, u: f64, v: f64) -> Self {
        ProjectedInterval { sensor_id, u, v, is_virtual: true }
    }

    pub fn len(&self) -> f64 {
        self.v - self.u
    }

    pub fn contains(&self, x: f64) -> bool {
        self.u <= x && x <= self.v
    }

    pub fn overlaps(&self, other: &ProjectedInterval) -> bool {
        self.u <= other.v && other.u <= self.v
    }

    /// Field ordering: `u` ascending, then `v` ascending, then id.
    pub fn field_order(&self, other: &ProjectedInterval) -> Ordering {
        self.u
            .total_cmp(&other.u)
            .then(self.v.total_cmp(&other.v))
            .then(self.sensor_id.cmp(&other.sensor_id))
    }
}

/// The segment `[start, end]` of the target line that must be covered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub start: f64,
    pub end: f64,
}

impl Domain {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || start > end {
            return Err(Error::param(format!("invalid domain [{start}, {end}]")));
        }
        Ok(Domain { start, end })
    }

    pub fn width(&self) -> f64 {
        self.end - self.start
    }
}

/// Sorted co-linear target coordinates. Duplicates are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TargetSet {
    xs: Vec<f64>,
}

impl TargetSet {
    pub fn new(mut xs: Vec<f64>) -> Result<Self> {
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("target coordinates must be finite"));
        }
        xs.sort_by(f64::total_cmp);
        Ok(TargetSet { xs })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Index range `[lo, hi)` of the targets inside `interval`.
    pub fn covered_range(&self, interval: &ProjectedInterval) -> (usize, usize) {
        let lo = self.xs.partition_point(|&x| x < interval.u);
        let hi = self.xs.partition_point(|&x| x <= interval.v);
        (lo, hi.max(lo))
    }
}

/// Exact x-extent of a sensor footprint.
///
/// A directional footprint is the circular sector with apex at the sensor
/// position, radius `radius` and half-angle `fov / 2` about `direction`.
pub fn project(sensor: &Sensor) -> Result<ProjectedInterval> {
    sensor.validate()?;
    let r = sensor.radius;
    let x = sensor.x;
    let (u, v) = match sensor.kind {
        SensorKind::Omni => (x - r, x + r),
        SensorKind::Directional => {
            let fov = sensor.fov.unwrap_or(360.0);
            let dir = sensor.direction.unwrap_or(0.0);
            if fov >= 360.0 {
                (x - r, x + r)
            } else {
                let first = dir - fov / 2.0;
                let last = dir + fov / 2.0;
                let inside = |theta: f64| (theta - first).rem_euclid(360.0) <= fov;
                let e1 = x + r * first.to_radians().cos();
                let e2 = x + r * last.to_radians().cos();
                let mut lo = x.min(e1).min(e2);
                let mut hi = x.max(e1).max(e2);
                if inside(0.0) {
                    hi = x + r;
                }
                if inside(180.0) {
                    lo = x - r;
                }
                (lo, hi)
            }
        }
    };
    Ok(ProjectedInterval::new(sensor.id, u, v))
}

/// Intersection of `interval` with the domain, or `None` when it is void.
pub fn clip(interval: &ProjectedInterval, domain: &Domain) -> Option<ProjectedInterval> {
    let u = interval.u.max(domain.start);
    let v = interval.v.min(domain.end);
    (u <= v).then_some(ProjectedInterval { u, v, ..*interval })
}

/// Sensors together with their clipped, sorted projected intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorField {
    sensors: Vec<Sensor>,
    intervals: Vec<ProjectedInterval>,
    domain: Domain,
}

impl SensorField {
    pub fn from_sensors(sensors: Vec<Sensor>, domain: Domain) -> Result<Self> {
        let mut intervals = Vec::with_capacity(sensors.len());
        for s in &sensors {
            if let Some(iv) = clip(&project(s)?, &domain) {
                intervals.push(iv);
            }
        }
        Self::check_unique(&intervals)?;
        intervals.sort_by(ProjectedInterval::field_order);
        Ok(SensorField { sensors, intervals, domain })
    }

    /// Builds a field directly from intervals, without physical sensors.
    pub fn from_intervals(intervals: Vec<ProjectedInterval>, domain: Domain) -> Result<Self> {
        let mut clipped = Vec::with_capacity(intervals.len());
        for iv in &intervals {
            if !(iv.u.is_finite() && iv.v.is_finite()) || iv.u > iv.v {
                return Err(Error::param(format!(
                    "sensor {}: interval [{}, {}] is not a closed interval",
                    iv.sensor_id, iv.u, iv.v
                )));
            }
            if let Some(c) = clip(iv, &domain) {
                clipped.push(c);
            }
        }
        Self::check_unique(&clipped)?;
        clipped.sort_by(ProjectedInterval::field_order);
        Ok(SensorField { sensors: Vec::new(), intervals: clipped, domain })
    }

    fn check_unique(intervals: &[ProjectedInterval]) -> Result<()> {
        let mut ids: Vec<SensorId> = intervals.iter().map(|iv| iv.sensor_id).collect();
        ids.sort_unstable();
        match ids.windows(2).find(|w| w[0] == w[1]) {
            Some(w) => Err(Error::param(format!("duplicate sensor id {}", w[0]))),
            None => Ok(()),
        }
    }

    pub fn sensors(&self) -> &[Sensor] {
        &self.sensors
    }

    pub fn intervals(&self) -> &[ProjectedInterval] {
        &self.intervals
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn interval(&self, id: SensorId) -> Option<&ProjectedInterval> {
        self.intervals.iter().find(|iv| iv.sensor_id == id)
    }

    /// Smallest id not used by any sensor or interval of the field.
    pub fn next_id(&self) -> u32 {
        let from_sensors = self.sensors.iter().map(|s| s.id.0);
        let from_intervals = self.intervals.iter().map(|iv| iv.sensor_id.0);
        from_sensors.chain(from_intervals).max().map_or(0, |m| m + 1)
    }

    /// A copy with extra (typically virtual) intervals merged into the order.
    pub fn with_intervals(&self, extra: &[ProjectedInterval]) -> Result<Self> {
        let mut intervals = self.intervals.clone();
        intervals.extend(extra.iter().filter_map(|iv| clip(iv, &self.domain)));
        Self::check_unique(&intervals)?;
        intervals.sort_by(ProjectedInterval::field_order);
        Ok(SensorField { sensors: self.sensors.clone(), intervals, domain: self.domain })
    }

    /// A copy without the given sensors.
    pub fn without(&self, removed: &[SensorId]) -> Self {
        let keep = |id: &SensorId| !removed.contains(id);
        SensorField {
            sensors: self.sensors.iter().filter(|s| keep(&s.id)).cloned().collect(),
            intervals: self.intervals.iter().filter(|iv| keep(&iv.sensor_id)).copied().collect(),
            domain: self.domain,
        }
    }
}

/// Equivalent discrete targets for covering the whole domain: the midpoint
/// of every elementary segment between consecutive interval endpoints
/// (domain endpoints included).
pub fn discretize(field: &SensorField) -> Result<TargetSet> {
    if field.is_empty() {
        return Err(Error::param("cannot discretize an empty sensor field"));
    }
    let d = field.domain();
    let mut grid: Vec<f64> = Vec::with_capacity(2 * field.len() + 2);
    grid.push(d.start);
    grid.push(d.end);
    for iv in field.intervals() {
        grid.push(iv.u);
        grid.push(iv.v);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.len() == 1 {
        return TargetSet::new(grid);
    }
    let mids = grid.windows(2).map(|w| w[0] + (w[1] - w[0]) / 2.0).collect();
    TargetSet::new(mids)
}

/// Covered fraction of the domain. Virtual intervals are ignored.
pub fn coverage_fraction(selected: &[ProjectedInterval], domain: &Domain) -> Result<f64> {
    if domain.start >= domain.end {
        return Err(Error::param("coverage fraction needs a non-degenerate domain"));
    }
    let mut parts: Vec<(f64, f64)> = selected
        .iter()
        .filter(|iv| !iv.is_virtual)
        .filter_map(|iv| clip(iv, domain))
        .map(|iv| (iv.u, iv.v))
        .collect();
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut covered = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for (u, v) in parts {
        match current {
            Some((cu, cv)) if u <= cv => current = Some((cu, cv.max(v))),
            Some((cu, cv)) => {
                covered += cv - cu;
                current = Some((u, v));
            }
            None => current = Some((u, v)),
        }
    }
    if let Some((cu, cv)) = current {
        covered += cv - cu;
    }
    Ok((covered / domain.width()).clamp(0.0, 1.0))
}

/// Reads a sensor-field file: one JSON sensor record per line, blank lines ignored.
pub fn read_sensors(reader: impl BufRead) -> Result<Vec<Sensor>> {
    let mut sensors = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let sensor: Sensor = serde_json::from_str(trimmed).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        sensor.validate().map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
        sensors.push(sensor);
    }
    Ok(sensors)
}

pub fn write_sensors(sensors: &[Sensor], mut out: impl std::io::Write) -> Result<()> {
    for s in sensors {
        serde_json::to_writer(&mut out, s)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
