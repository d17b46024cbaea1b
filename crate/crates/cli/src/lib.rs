//! Library side of the `cutdual` binary: file formats and subcommands.

pub mod commands;
pub mod format;
