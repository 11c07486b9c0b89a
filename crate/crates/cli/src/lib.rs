//! Command-line front end: file formats, commands and reports.

pub mod commands;
pub mod format;

pub use commands::{run, Cli, Command, ExitStatus};
pub use format::{parse_ba, parse_native, print_ba, print_native, AutomatonFile, Format, Kind, ParseError};
