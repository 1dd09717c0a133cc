//! File formats, benchmark sweeps and subcommands behind the `simconj` binary.

pub mod bench;
pub mod commands;
pub mod error;
pub mod tuple_file;

pub use error::CliError;
