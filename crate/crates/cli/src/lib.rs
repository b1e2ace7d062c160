//! Experiment runner behind the `fracalderon` binary: config parsing, the
//! seven commands and their run reports.

pub mod commands;
pub mod config;
pub mod report;
