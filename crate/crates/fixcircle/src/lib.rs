//! Scenario files, reports, CSV/SVG output and the `fixcircle` command line
//! on top of [`fixcircle_core`].
//!
//! A [`Scenario`](scenario::Scenario) is a JSON document naming a metric, a
//! self-map, a domain sample and the checks to run. [`run_scenario`] executes
//! it and returns a [`RunReport`](run::RunReport) whose JSON rendering is
//! deterministic for a given scenario and seed.

pub mod bundled;
pub mod emit;
pub mod error;
pub mod reproduce;
pub mod run;
pub mod scenario;
pub mod summary;

pub use error::ScenarioError;
pub use run::{run_scenario, Cloud, Run, RunReport};
pub use scenario::{load_scenario, parse_scenario, print_scenario, Scenario};

/// Seed used when neither the scenario, the command line nor
/// `FIXCIRCLE_SEED` provides one.
pub const DEFAULT_SEED: u64 = 0x5eed;
