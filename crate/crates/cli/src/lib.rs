//! Library surface behind the `secbeam` binary: run configuration,
//! command implementations, and the validation property suite.

pub mod commands;
pub mod run_config;
pub mod validation;

pub use commands::{cmd_campaign, cmd_solve, CommandOutcome, Overrides};
pub use run_config::{RunConfig, SweepConfig};
pub use validation::{run_validation, PropertyResult, ValidationOptions};
