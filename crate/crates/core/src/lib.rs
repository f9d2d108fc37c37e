//! Sensor selection for line coverage, weak K-barrier coverage and barrier
//! gap mending, built on a 1D projected-interval model.

pub mod algorithms;
pub mod baselines;
pub mod deployment;
pub mod error;
pub mod harness;
pub mod model;

pub use error::{Error, Result};
