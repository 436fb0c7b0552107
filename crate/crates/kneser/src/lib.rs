//! File formats, a genus cache and the `kneser` command-line front end.

pub mod cache;
pub mod cli;
pub mod error;
pub mod exec;
pub mod format;

pub use error::CliError;
