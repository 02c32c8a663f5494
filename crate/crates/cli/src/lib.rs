//! Command line front end for `dpchroma-core`.
//!
//! Graph loading, the JSON and CSV output formats, an on-disk results cache
//! and a rayon worker pool for the exact minimizer. [`commands::run`] is the
//! whole program minus argument parsing.

pub mod cache;
pub mod commands;
pub mod config;
pub mod corpus;
pub mod error;
pub mod format;
pub mod parallel;

pub use cache::Cache;
pub use commands::{execute, run, Outcome};
pub use config::{Command, Format, MRange, RunConfig, Suite};
pub use error::CliError;
pub use parallel::Parallel;
