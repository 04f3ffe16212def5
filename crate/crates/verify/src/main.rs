use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frobenius_core::monomial_box::{leng_matching, verify_matching};
use frobenius_verify::config::{parse_pairs, Suite, SuiteConfig};
use frobenius_verify::run_suite;
use frobenius_verify::scenario::run_scenarios;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "frobenius-verify",
    version,
    about = "Exact verification of Frobenius direct-image bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over an (n, p) grid and write a JSON report.
    Verify {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u64>,
        /// Explicit grid `n:p,n:p,...`, replacing n range × primes.
        #[arg(long)]
        pairs: Option<String>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "ranks,koszul,matching,prop36,filtration,slopes"
        )]
        suites: Vec<Suite>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_sigma: u32,
        #[arg(long, default_value_t = 4)]
        matching_max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_cap: u32,
        #[arg(long, default_value_t = 243)]
        max_ambient: u64,
        #[arg(long, default_value_t = 100)]
        random_subspaces: usize,
        #[arg(long, default_value_t = 10_000)]
        random_profiles: usize,
        /// Leave the `timings` object out so reports compare byte for byte.
        #[arg(long)]
        no_timings: bool,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the recursive dominance matching of a box as explicit pairs.
    Matching {
        #[arg(long, value_delimiter = ',', required = true)]
        caps: Vec<u32>,
        #[arg(long)]
        ell: u32,
    },
    /// Evaluate the slope formulas on a TOML scenario file.
    Slopes {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), ExitCode> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            ExitCode::from(EXIT_CONFIG)
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify {
            n_min,
            n_max,
            primes,
            pairs,
            suites,
            seed,
            max_sigma,
            matching_max_n,
            max_cap,
            max_ambient,
            random_subspaces,
            random_profiles,
            no_timings,
            out,
        } => {
            let pairs = match pairs.as_deref().map(parse_pairs).transpose() {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            let cfg = SuiteConfig {
                n_min,
                n_max,
                primes,
                pairs,
                max_ambient,
                max_sigma,
                matching_max_n,
                max_cap,
                random_subspaces_per_grade: random_subspaces,
                random_profiles,
                seed,
                suites: suites.into_iter().collect(),
                ..SuiteConfig::default()
            };
            let report = match run_suite(&cfg) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            let report = if no_timings {
                report.without_timings()
            } else {
                report
            };
            if let Err(code) = emit(&report.to_json(), out.as_ref()) {
                return code;
            }
            for (name, s) in &report.suites {
                eprintln!(
                    "{name}: {} ({} cases, {} skipped, {} failures)",
                    if s.passed { "pass" } else { "FAIL" },
                    s.cases,
                    s.skipped,
                    s.failure_count
                );
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Command::Matching { caps, ell } => {
            let m = match leng_matching(&caps, ell) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            println!("# {} -> {}", m.source, m.target);
            for (v, w) in m.pairs() {
                println!("{v} -> {w}");
            }
            match verify_matching(&m) {
                Ok(()) => {
                    println!(
                        "# {} pairs, injective and dominance-preserving",
                        m.assignment.len()
                    );
                    ExitCode::SUCCESS
                }
                Err(v) => {
                    println!("# invalid: {v}");
                    ExitCode::from(EXIT_FAIL)
                }
            }
        }
        Command::Slopes { scenario, out } => {
            let text = match std::fs::read_to_string(&scenario) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", scenario.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            let report = match run_scenarios(&text) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {}: {e}", scenario.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            if let Err(code) = emit(&report.to_json(), out.as_ref()) {
                return code;
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
    }
}
