//! Command-line front end: `fockshift check|commutant|region|cesaro|spectra`.

pub mod config;
pub mod report;
mod run;

pub use config::{parse_config, Overrides, RunConfig, SpectraMode};
pub use run::{
    random_element, resolve_config, run, run_command, Cli, Command, Outcome, EXIT_CHECK_FAILED, EXIT_OK,
    EXIT_PRECONDITION,
};
