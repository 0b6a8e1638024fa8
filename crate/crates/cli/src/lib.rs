//! Command-line experiments for the `cablewave` library: configuration,
//! dispatch and delimited-text output.

pub mod cli;
pub mod commands;
pub mod emit;
pub mod error;
pub mod spec;

pub use cli::run;
pub use commands::execute;
pub use emit::{emit, Outputs, Table};
pub use error::{CliError, Result};
pub use spec::{parse_config, parse_spec, Command, ExperimentSpec, Format};
