//! Scenario-driven front end for the `oscequiv` verification suite.
//!
//! A scenario is a TOML file naming a mode and its parameters. [`run::run`]
//! executes it, measures every check the mode owns and writes CSV artifacts.

pub mod csv;
pub mod report;
pub mod run;
pub mod scenario;

pub use report::{CheckResult, RunReport};
pub use run::{artifact_dir, run, RunError, RunOptions};
pub use scenario::{parse_scenario, parse_scenario_str, Mode, Scenario, ScenarioError};
