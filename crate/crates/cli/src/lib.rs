//! Command-line front end for the quasi-periodic operator toolkit: config
//! parsing, experiment orchestration and deterministic CSV/JSON emission.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;
