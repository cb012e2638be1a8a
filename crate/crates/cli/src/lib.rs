//! Command-line companion to [`nosig_core`]: config files, canonical report
//! serialization, sweep CSV output, and the acceptance self-test suite.
//!
//! The binary in `src/main.rs` is a thin clap dispatcher over this library so
//! that integration tests can drive every code path in-process.

pub mod config;
pub mod csv;
pub mod report;
pub mod selftest;
