//! Verification suites, reports and slope scenarios built on
//! [`frobenius_core`].
//!
//! Reports are JSON with a fixed field order; everything outside the
//! `timings` object depends only on the config, seed included.

#![forbid(unsafe_code)]

pub mod config;
pub mod report;
pub mod sampling;
pub mod scenario;
pub mod suites;

pub use config::{ConfigError, Suite, SuiteConfig};
pub use report::{run_suite, Report};
