//! Batch front end for braidext: parses a JSON problem file, runs one command
//! and renders the result as text or as a JSON report.

pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

pub use commands::{run_file, run_source, Command, Emit, Options, Outcome};
pub use error::CliError;
