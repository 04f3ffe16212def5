use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use frobenius_core::Prime;
use serde::{Deserialize, Serialize};

/// Largest total cap sum accepted for the matching sweep.
pub const SIGMA_HARD_LIMIT: u32 = 12;

#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ranks,
    Koszul,
    Matching,
    Prop36,
    Filtration,
    Slopes,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Ranks,
        Suite::Koszul,
        Suite::Matching,
        Suite::Prop36,
        Suite::Filtration,
        Suite::Slopes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ranks => "ranks",
            Suite::Koszul => "koszul",
            Suite::Matching => "matching",
            Suite::Prop36 => "prop36",
            Suite::Filtration => "filtration",
            Suite::Slopes => "slopes",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("n range {min}..={max} is empty or starts below 1")]
    BadNRange { min: usize, max: usize },
    #[error("max_sigma = {0} exceeds the hard limit {SIGMA_HARD_LIMIT}")]
    SigmaTooLarge(u32),
    #[error("{field} must be positive")]
    NotPositive { field: &'static str },
    #[error("malformed (n, p) pair `{0}`, expected n:p")]
    BadPair(String),
}

/// Parameters of a verification run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub primes: Vec<u64>,
    /// Explicit `(n, p)` grid; overrides `n_min..=n_max × primes` when set.
    pub pairs: Option<Vec<(usize, u64)>>,
    /// Grid points with `pⁿ` above this are left out.
    pub max_ambient: u64,
    pub max_sigma: u32,
    pub matching_max_n: usize,
    pub max_cap: u32,
    pub random_subspaces_per_grade: usize,
    /// Grades up to this dimension get every coordinate subspace; larger
    /// ones get coordinate lines, hyperplanes and the whole grade.
    pub coordinate_dim_limit: usize,
    pub random_profiles: usize,
    /// Largest dense tensor matrix (in entries) built by the ranks suite.
    pub dense_limit: usize,
    pub seed: u64,
    pub suites: BTreeSet<Suite>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_min: 1,
            n_max: 3,
            primes: vec![2, 3, 5],
            pairs: None,
            max_ambient: 243,
            max_sigma: SIGMA_HARD_LIMIT,
            matching_max_n: 4,
            max_cap: 4,
            random_subspaces_per_grade: 100,
            coordinate_dim_limit: 10,
            random_profiles: 10_000,
            dense_limit: 1 << 26,
            seed: 0,
            suites: Suite::ALL.into_iter().collect(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(ConfigError::BadNRange {
                min: self.n_min,
                max: self.n_max,
            });
        }
        for &p in self
            .primes
            .iter()
            .chain(self.pairs.iter().flatten().map(|(_, p)| p))
        {
            Prime::new(p).map_err(|_| ConfigError::NotPrime(p))?;
        }
        if let Some(pairs) = &self.pairs {
            if pairs.iter().any(|&(n, _)| n == 0) {
                return Err(ConfigError::NotPositive {
                    field: "pair dimension",
                });
            }
        }
        if self.max_sigma > SIGMA_HARD_LIMIT {
            return Err(ConfigError::SigmaTooLarge(self.max_sigma));
        }
        if self.matching_max_n == 0 {
            return Err(ConfigError::NotPositive {
                field: "matching_max_n",
            });
        }
        if self.max_ambient < 2 {
            return Err(ConfigError::NotPositive {
                field: "max_ambient",
            });
        }
        Ok(())
    }

    /// The `(n, p)` points the grid suites run over, sorted.
    pub fn grid(&self) -> Vec<(usize, Prime)> {
        let raw: Vec<(usize, u64)> = match &self.pairs {
            Some(pairs) => pairs.clone(),
            None => (self.n_min..=self.n_max)
                .flat_map(|n| self.primes.iter().map(move |&p| (n, p)))
                .collect(),
        };
        let mut out: Vec<(usize, Prime)> = raw
            .into_iter()
            .filter(|&(n, p)| {
                p.checked_pow(n as u32)
                    .is_some_and(|a| a <= self.max_ambient)
            })
            .filter_map(|(n, p)| Prime::new(p).ok().map(|p| (n, p)))
            .collect();
        out.sort_by_key(|&(n, p)| (n, p.get()));
        out.dedup();
        out
    }
}

/// Parses `2:3,1:5` into `[(2, 3), (1, 5)]`.
pub fn parse_pairs(s: &str) -> Result<Vec<(usize, u64)>, ConfigError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (n, p) = t
                .trim()
                .split_once(':')
                .ok_or_else(|| ConfigError::BadPair(t.to_owned()))?;
            Ok((
                n.parse().map_err(|_| ConfigError::BadPair(t.to_owned()))?,
                p.parse().map_err(|_| ConfigError::BadPair(t.to_owned()))?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        let c = SuiteConfig::default();
        c.validate().unwrap();
        assert_eq!(c.grid().len(), 9);
    }

    #[test]
    fn rejects_bad_values() {
        let c = SuiteConfig {
            primes: vec![2, 4],
            ..SuiteConfig::default()
        };
        assert_eq!(c.validate(), Err(ConfigError::NotPrime(4)));
        let c = SuiteConfig {
            max_sigma: 13,
            ..SuiteConfig::default()
        };
        assert_eq!(c.validate(), Err(ConfigError::SigmaTooLarge(13)));
        let c = SuiteConfig {
            n_min: 0,
            ..SuiteConfig::default()
        };
        assert!(c.validate().is_err());
        let c = SuiteConfig {
            pairs: Some(vec![(2, 9)]),
            ..SuiteConfig::default()
        };
        assert_eq!(c.validate(), Err(ConfigError::NotPrime(9)));
    }

    #[test]
    fn grid_respects_ambient_cap() {
        let c = SuiteConfig {
            n_max: 8,
            primes: vec![2, 3, 5, 7],
            ..SuiteConfig::default()
        };
        let grid = c.grid();
        assert!(grid
            .iter()
            .all(|&(n, p)| u64::from(p.get()).pow(n as u32) <= 243));
        assert!(grid.contains(&(7, Prime::new(2).unwrap())));
        assert!(!grid.contains(&(8, Prime::new(2).unwrap())));
        assert!(grid.contains(&(5, Prime::new(3).unwrap())));
    }

    #[test]
    fn pairs_parse() {
        assert_eq!(parse_pairs("1:3, 2:2").unwrap(), vec![(1, 3), (2, 2)]);
        assert!(parse_pairs("1-3").is_err());
        assert_eq!("prop36".parse::<Suite>().unwrap(), Suite::Prop36);
        assert!("nope".parse::<Suite>().is_err());
    }
}
