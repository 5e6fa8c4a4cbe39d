pub mod config;
pub mod csv;
pub mod error;
pub mod plot;
pub mod run;

pub use config::{parse_config, Command, RunConfig, Units};
pub use csv::{csv_string, emit_csv};
pub use error::{CliError, Result};
pub use run::run;
