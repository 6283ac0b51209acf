//! Command-line front end: configuration, the on-disk table cache and the
//! subcommands.

pub mod cache;
pub mod commands;
pub mod config;
