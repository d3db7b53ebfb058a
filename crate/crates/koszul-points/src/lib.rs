//! File formats, reports and the command-line front end for
//! `koszul-points-core`.

pub mod cli;
pub mod commands;
pub mod format;
pub mod render;
pub mod report;

pub use commands::{exit, run, CommandError, Output};
pub use format::{load_config, parse_config, AnyConfig, ConfigFile, InputError, SCHEMA};
pub use report::{CertificateDto, Report};
