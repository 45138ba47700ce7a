//! Command-line front end, file formats and presets for `healthmon-core`.

pub mod commands;
pub mod config_file;
pub mod error;
pub mod export;
pub mod presets;
pub mod render;

pub use commands::{run, Cli};
pub use error::{exit, CliError};
