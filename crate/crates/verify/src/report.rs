use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::config::{ConfigError, SuiteConfig};
use crate::suites::{self, SuiteOutcome};

/// Report schema version; bump when fields change meaning.
pub const SCHEMA_VERSION: u32 = 1;

/// Result of a verification run.
///
/// Everything except `timings` is a function of the config alone.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub config: SuiteConfig,
    pub passed: bool,
    pub suites: BTreeMap<String, SuiteOutcome>,
    /// Wall-clock seconds per suite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn without_timings(&self) -> Report {
        Report {
            timings: None,
            ..self.clone()
        }
    }
}

/// Validates `config` and runs the selected suites in canonical order.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let mut suites = BTreeMap::new();
    let mut timings = BTreeMap::new();
    for &suite in &config.suites {
        let start = Instant::now();
        let outcome = suites::run(suite, config);
        timings.insert(suite.name().to_owned(), start.elapsed().as_secs_f64());
        suites.insert(suite.name().to_owned(), outcome);
    }
    Ok(Report {
        schema: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        passed: suites.values().all(|o| o.passed),
        suites,
        timings: Some(timings),
    })
}
