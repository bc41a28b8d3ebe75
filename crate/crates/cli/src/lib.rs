//! Command-line front end for `mwlab`: spec documents, bundled datasets,
//! rendering and analysis reports.

pub mod cli;
pub mod commands;
pub mod datasets;
pub mod document;
pub mod error;
pub mod render;
pub mod report;

pub use cli::{run, Cli};
pub use error::{CliError, CliResult, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE};
