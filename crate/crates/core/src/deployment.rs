//! Seeded random sensor fields.
//!
//! Every realization draws from `ChaCha8Rng` seeded with the campaign seed
//! and switched to stream `realization`, so realization `r` is the same on
//! every platform and independent of how many others are generated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Domain, Sensor, SensorField, SensorKind};

/// Name of the generator recorded in experiment metadata.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = realization index";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeploymentKind {
    /// x uniform on the width, y normal about the barrier line.
    LineBased,
    /// Positions uniform over the whole strip.
    Poisson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeploymentSpec {
    pub n: usize,
    pub width: f64,
    #[serde(default = "default_strip_height")]
    pub strip_height: f64,
    pub kind: DeploymentKind,
    #[serde(default = "default_line_sigma")]
    pub line_sigma: f64,
    pub radius: f64,
    #[serde(default = "default_fov")]
    pub fov: f64,
    pub sensor_kind: SensorKind,
    #[serde(default)]
    pub seed: u64,
}

fn default_strip_height() -> f64 {
    10.0
}

fn default_line_sigma() -> f64 {
    10.0
}

fn default_fov() -> f64 {
    90.0
}

impl DeploymentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::param("deployment width must be > 0"));
        }
        if !(self.line_sigma.is_finite() && self.line_sigma >= 0.0) {
            return Err(Error::param("line_sigma must be >= 0"));
        }
        if !(self.strip_height.is_finite() && self.strip_height >= 0.0) {
            return Err(Error::param("strip_height must be >= 0"));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::param("radius must be > 0"));
        }
        if self.sensor_kind == SensorKind::Directional && !(self.fov > 0.0 && self.fov <= 360.0) {
            return Err(Error::param("fov must lie in (0, 360]"));
        }
        Ok(())
    }

    pub fn domain(&self) -> Domain {
        Domain { start: 0.0, end: self.width }
    }
}

/// Generator for realization `realization` of a campaign seeded with `seed`.
pub fn realization_rng(seed: u64, realization: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(realization);
    rng
}

/// Draws the sensors of one field from `rng`.
pub fn generate_sensors(spec: &DeploymentSpec, rng: &mut ChaCha8Rng) -> Result<Vec<Sensor>> {
    spec.validate()?;
    let normal = Normal::new(0.0, spec.line_sigma).map_err(|e| Error::param(e.to_string()))?;
    let mut sensors = Vec::with_capacity(spec.n);
    for id in 0..spec.n {
        let x = rng.random_range(0.0..=spec.width);
        let y = match spec.kind {
            DeploymentKind::LineBased => normal.sample(rng),
            DeploymentKind::Poisson => rng.random_range(0.0..=spec.strip_height),
        };
        let direction: f64 = rng.random_range(0.0..360.0);
        let id = id as u32;
        sensors.push(match spec.sensor_kind {
            SensorKind::Omni => Sensor::omni(id, x, y, spec.radius),
            SensorKind::Directional => Sensor::directional(id, x, y, spec.radius, spec.fov, direction),
        });
    }
    Ok(sensors)
}

/// One field from an explicit generator; the domain is `[0, width]`.
pub fn generate_with(spec: &DeploymentSpec, rng: &mut ChaCha8Rng) -> Result<SensorField> {
    SensorField::from_sensors(generate_sensors(spec, rng)?, spec.domain())
}

/// The field for `spec.seed`, realization 0.
pub fn generate(spec: &DeploymentSpec) -> Result<SensorField> {
    generate_with(spec, &mut realization_rng(spec.seed, 0))
}
