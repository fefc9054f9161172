//! IO companion to `bridge-corrnet`: file formats, JSON configuration,
//! JSON reports and the `bcn` command-line tool.

pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod report;

pub use cli::run;
pub use error::{CliError, Result};
