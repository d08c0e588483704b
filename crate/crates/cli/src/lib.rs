//! Command-line front end: instance files, subcommands and the batch suite.

pub mod commands;
pub mod error;
pub mod instance;
pub mod report;
pub mod suite;

pub use commands::run;
pub use error::CliError;
