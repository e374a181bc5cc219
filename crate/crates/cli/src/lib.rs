//! Expression language, configuration, verification suites and reports
//! behind the `nckit` command.

pub mod config;
pub mod error;
pub mod expr;
pub mod gridcheck;
pub mod pwreport;
pub mod report;
pub mod suites;

pub use error::{CliError, Result};

/// Exit status for a passing command.
pub const EXIT_PASS: i32 = 0;
/// Exit status when a verification fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for usage, configuration and parse errors.
pub const EXIT_USAGE: i32 = 2;
