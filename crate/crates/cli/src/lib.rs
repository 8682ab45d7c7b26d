//! Command-line front end: expression parsing, suite execution and report
//! emission for the `fell` binary.

pub mod commands;
pub mod config;
pub mod parse;

pub use commands::{run, Outcome};
pub use config::{CliError, RunConfig};
pub use parse::{parse_expression, ParseError};
