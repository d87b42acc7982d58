//! Library half of the command-line front end: configuration parsing,
//! output formatting and the validation suite, shared between the binary
//! and the integration tests.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use std::path::PathBuf;

/// Fixture directory: `HARVESTKIT_FIXTURES` when set, `./fixtures`
/// otherwise.
pub fn fixtures_dir() -> PathBuf {
    std::env::var_os("HARVESTKIT_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fixtures"))
}
