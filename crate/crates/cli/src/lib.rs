//! Command-line front end for the magnetopolaron toolkit.

pub mod commands;
pub mod config;
pub mod error;
pub mod record;
pub mod verify;

pub use commands::{run, Cli, Command};
pub use error::{CliError, CliResult};
