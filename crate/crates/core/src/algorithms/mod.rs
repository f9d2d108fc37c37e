//! Order-based selection algorithms: OGA, continuous OGA, K-OGA and LOGM.

mod augment;
mod koga;
mod mending;
mod oga;
mod result;

pub use augment::augment_with_gap_sensors;
pub use koga::k_oga;
pub use mending::{find_gaps, logm, Gap};
pub use oga::{oga, oga_continuous};
pub use result::{markov_violation, SelectionResult, SelectionStep};

pub(crate) use result::SelectionBuilder;
