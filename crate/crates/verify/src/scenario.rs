//! Slope scenarios: TOML records evaluated with the slope formulas.
//!
//! ```toml
//! [[scenario]]
//! name = "genus two curve"
//! n = 1
//! p = 3
//! rk_w = 1
//! mu_w = "0"            # or c1_w_h; integers or "a/b" strings
//! g = 2                 # or kh
//! profile = [1, 1]
//! instabilities = [0, 0]
//! rk_e = 2              # defaults to the profile sum
//! mode = "curve"        # curve | general | general-connection
//! iwx = "1/2"           # defaults to the largest instability
//! ```

use std::fmt;
use std::str::FromStr;

use frobenius_core::slopes::{
    curve_gap, equality_diagnosis, gap_lower_bound, instability_bound, pushforward_c1,
    pushforward_slope, t_slope, weight_sum_check, InstabilityInput, ProfileMode, RankProfile,
    Rational, SlopeData,
};
use frobenius_core::trunc_algebra::top_degree;
use frobenius_core::Prime;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

/// An exact rational read from an integer or an `"a/b"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a rational string \"a/b\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                let t = v.trim();
                if t.ends_with("/0") {
                    return Err(E::custom(format!("zero denominator in `{v}`")));
                }
                Rational::from_str(t)
                    .map(Exact)
                    .map_err(|_| E::custom(format!("`{v}` is not a rational a/b")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Curve,
    General,
    GeneralConnection,
}

impl From<Mode> for ProfileMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Curve => ProfileMode::Curve,
            Mode::General => ProfileMode::General { connection: false },
            Mode::GeneralConnection => ProfileMode::General { connection: true },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: Option<String>,
    pub n: usize,
    pub p: u64,
    pub rk_w: u64,
    pub mu_w: Option<Exact>,
    pub c1_w_h: Option<Exact>,
    pub kh: Option<Exact>,
    pub g: Option<u64>,
    #[serde(default)]
    pub profile: Option<Vec<u64>>,
    #[serde(default)]
    pub instabilities: Option<Vec<Exact>>,
    pub rk_e: Option<u64>,
    pub mode: Option<Mode>,
    pub iwx: Option<Exact>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    scenario: Vec<Scenario>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("scenario {index}: {message}")]
    Invalid { index: usize, message: String },
}

pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>, ScenarioError> {
    let file: ScenarioFile = toml::from_str(text)?;
    for (index, s) in file.scenario.iter().enumerate() {
        let invalid = |message: &str| ScenarioError::Invalid {
            index,
            message: message.to_owned(),
        };
        if Prime::new(s.p).is_err() {
            return Err(invalid(&format!("field `p`: {} is not prime", s.p)));
        }
        if s.n == 0 {
            return Err(invalid("field `n`: must be at least 1"));
        }
        if s.rk_w == 0 {
            return Err(invalid("field `rk_w`: must be positive"));
        }
        match (&s.mu_w, &s.c1_w_h) {
            (Some(_), Some(_)) => return Err(invalid("give only one of `mu_w` and `c1_w_h`")),
            (None, None) => return Err(invalid("one of `mu_w` and `c1_w_h` is required")),
            _ => {}
        }
        match (&s.kh, s.g) {
            (Some(_), Some(_)) => return Err(invalid("give only one of `kh` and `g`")),
            (None, None) => return Err(invalid("one of `kh` and `g` is required")),
            (None, Some(_)) if s.n != 1 => return Err(invalid("field `g` needs n = 1")),
            _ => {}
        }
        if s.mode == Some(Mode::Curve) && s.n != 1 {
            return Err(invalid("field `mode`: curve mode needs n = 1"));
        }
    }
    Ok(file.scenario)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct WeightSumOut {
    pub direct: String,
    pub rearranged: String,
    pub forms_agree: bool,
    pub nonnegative: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EqualityOut {
    pub gap_is_zero: bool,
    pub kh_positive: bool,
    pub instabilities_zero: bool,
    pub support_end: Option<usize>,
    pub full_length: bool,
    pub symmetric: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ProfileOut {
    pub ranks: Vec<u64>,
    pub rk_e: u64,
    pub mode: Mode,
    pub violations: Vec<String>,
    pub weight_sum: WeightSumOut,
    pub gap_lower_bound: Option<String>,
    pub curve_gap: Option<String>,
    pub equality: Option<EqualityOut>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InstabilityOut {
    pub iwx: String,
    pub bound: Option<String>,
    pub kh_negative_warning: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScenarioResult {
    pub name: String,
    pub n: usize,
    pub p: u64,
    pub rk_w: u64,
    pub mu_w: String,
    pub c1_w_h: String,
    pub kh: String,
    pub mu_pushforward: String,
    pub c1_pushforward: String,
    pub rank_pushforward: String,
    pub t_slopes: Vec<String>,
    pub profile: Option<ProfileOut>,
    pub instability: Option<InstabilityOut>,
    pub errors: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub schema: u32,
    pub version: &'static str,
    pub passed: bool,
    pub scenarios: Vec<ScenarioResult>,
}

impl ScenarioReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Evaluates one parsed scenario. Inconsistent inputs are reported in
/// `errors` and fail the scenario without aborting the run.
pub fn evaluate(index: usize, s: &Scenario) -> ScenarioResult {
    let p = Prime::new(s.p).expect("validated at parse time");
    let kh = match (&s.kh, s.g) {
        (Some(k), _) => k.0.clone(),
        (None, Some(g)) => Rational::from_integer((2 * i128::from(g) - 2).into()),
        (None, None) => unreachable!("validated at parse time"),
    };
    let sd = match (&s.mu_w, &s.c1_w_h) {
        (Some(mu), _) => SlopeData::from_mu(s.n, p, s.rk_w, mu.0.clone(), kh),
        (_, Some(c1)) => SlopeData::from_c1(s.n, p, s.rk_w, c1.0.clone(), kh),
        _ => unreachable!("validated at parse time"),
    }
    .expect("rk_w validated positive");

    let mut errors = Vec::new();
    let top = top_degree(s.n, p);
    let t_slopes = (0..=top)
        .map(|l| t_slope(s.n, p, l, sd.kh()).expect("ℓ ≤ N").to_string())
        .collect();

    let inst = match &s.instabilities {
        Some(v) => match InstabilityInput::new(v.iter().map(|e| e.0.clone()).collect()) {
            Ok(i) => Some(i),
            Err(e) => {
                errors.push(format!("instabilities: {e}"));
                None
            }
        },
        None => None,
    };

    let mut verdicts_hold = true;
    let profile = s.profile.as_ref().map(|ranks| {
        let profile = RankProfile::new(ranks.clone());
        let mode = s.mode.unwrap_or(if s.n == 1 {
            Mode::Curve
        } else {
            Mode::GeneralConnection
        });
        let rk_e = s.rk_e.unwrap_or_else(|| profile.total());
        let violations: Vec<String> = profile
            .validate(s.n, p, Some(s.rk_w), mode.into())
            .iter()
            .map(ToString::to_string)
            .collect();
        let check = weight_sum_check(s.n, p, &profile, mode.into());
        verdicts_hold &= check.holds();
        let zeros = InstabilityInput::zeros(profile.ranks().len());
        let inst_used = inst.as_ref().unwrap_or(&zeros);
        let gap = match gap_lower_bound(&sd, &profile, inst_used, rk_e) {
            Ok(g) => Some(g),
            Err(e) => {
                errors.push(format!("gap_lower_bound: {e}"));
                None
            }
        };
        let curve = (s.n == 1)
            .then(|| curve_gap(s.g.unwrap_or_default(), p, &profile, rk_e).ok())
            .flatten()
            .filter(|_| s.g.is_some());
        let equality = gap
            .as_ref()
            .and_then(|_| equality_diagnosis(&sd, &profile, inst_used, rk_e).ok())
            .map(|d| {
                verdicts_hold &= d.consistent() || !violations.is_empty();
                EqualityOut {
                    gap_is_zero: d.gap_is_zero,
                    kh_positive: d.kh_positive,
                    instabilities_zero: d.instabilities_zero,
                    support_end: d.support_end,
                    full_length: d.full_length,
                    symmetric: d.symmetric,
                    consistent: d.consistent(),
                }
            });
        ProfileOut {
            ranks: ranks.clone(),
            rk_e,
            mode,
            violations,
            weight_sum: WeightSumOut {
                direct: check.direct.to_string(),
                rearranged: check.rearranged.to_string(),
                forms_agree: check.forms_agree(),
                nonnegative: check.nonnegative(),
            },
            gap_lower_bound: gap.map(|g| g.to_string()),
            curve_gap: curve.map(|g| g.to_string()),
            equality,
        }
    });

    let iwx = s
        .iwx
        .as_ref()
        .map(|e| e.0.clone())
        .or_else(|| inst.as_ref().map(InstabilityInput::max));
    let instability = iwx.and_then(|iwx| match instability_bound(&sd, &iwx) {
        Ok(b) => Some(InstabilityOut {
            iwx: iwx.to_string(),
            bound: b.bound.map(|x| x.to_string()),
            kh_negative_warning: b.kh_negative,
        }),
        Err(e) => {
            errors.push(format!("iwx: {e}"));
            None
        }
    });

    ScenarioResult {
        name: s
            .name
            .clone()
            .unwrap_or_else(|| format!("scenario {index}")),
        n: s.n,
        p: s.p,
        rk_w: s.rk_w,
        mu_w: sd.mu_w().to_string(),
        c1_w_h: sd.c1_w_h().to_string(),
        kh: sd.kh().to_string(),
        mu_pushforward: pushforward_slope(&sd).to_string(),
        c1_pushforward: pushforward_c1(&sd).to_string(),
        rank_pushforward: sd.pushforward_rank().to_string(),
        t_slopes,
        profile,
        instability,
        passed: errors.is_empty() && verdicts_hold,
        errors,
    }
}

pub fn run_scenarios(text: &str) -> Result<ScenarioReport, ScenarioError> {
    let scenarios = parse_scenarios(text)?;
    let results: Vec<ScenarioResult> = scenarios
        .iter()
        .enumerate()
        .map(|(i, s)| evaluate(i, s))
        .collect();
    Ok(ScenarioReport {
        schema: crate::report::SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION"),
        passed: results.iter().all(|r| r.passed),
        scenarios: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_scenario() {
        let r = run_scenarios(
            r#"
            [[scenario]]
            name = "g2"
            n = 1
            p = 2
            rk_w = 1
            mu_w = 0
            g = 2
            "#,
        )
        .unwrap();
        assert_eq!(r.scenarios[0].mu_pushforward, "1/2");
        assert_eq!(r.scenarios[0].c1_pushforward, "1");
        assert!(r.passed);
    }

    #[test]
    fn negative_kh_warns() {
        let r = run_scenarios(
            r#"
            [[scenario]]
            n = 2
            p = 3
            rk_w = 2
            c1_w_h = "3/2"
            kh = -3
            iwx = "1/2"
            "#,
        )
        .unwrap();
        let inst = r.scenarios[0].instability.as_ref().unwrap();
        assert!(inst.kh_negative_warning);
        assert_eq!(inst.bound, None);
        assert_eq!(r.scenarios[0].mu_w, "3/4");
    }

    #[test]
    fn full_profile_scenario() {
        let r = run_scenarios(
            r#"
            [[scenario]]
            n = 2
            p = 3
            rk_w = 1
            mu_w = 0
            kh = 1
            profile = [1, 2, 3, 2, 1]
            instabilities = [0, 0, 0, 0, 0]
            "#,
        )
        .unwrap();
        let prof = r.scenarios[0].profile.as_ref().unwrap();
        assert_eq!(prof.gap_lower_bound.as_deref(), Some("0"));
        let eq = prof.equality.as_ref().unwrap();
        assert!(eq.gap_is_zero && eq.full_length && eq.symmetric && eq.consistent);
        assert_eq!(eq.support_end, Some(4));
        assert_eq!(
            r.scenarios[0]
                .instability
                .as_ref()
                .unwrap()
                .bound
                .as_deref(),
            Some("0")
        );
        assert!(r.passed);
    }

    #[test]
    fn curve_gap_in_scenario() {
        let r = run_scenarios(
            "[[scenario]]\nn = 1\np = 3\nrk_w = 1\nmu_w = 0\ng = 2\nprofile = [1, 1]\n",
        )
        .unwrap();
        let prof = r.scenarios[0].profile.as_ref().unwrap();
        assert_eq!(prof.curve_gap.as_deref(), Some("1/3"));
        assert_eq!(prof.gap_lower_bound.as_deref(), Some("1/3"));
    }

    #[test]
    fn violations_are_not_fatal() {
        let r = run_scenarios(
            "[[scenario]]\nn = 1\np = 3\nrk_w = 1\nmu_w = 0\ng = 2\nprofile = [1, 2]\n\n\
             [[scenario]]\nn = 1\np = 3\nrk_w = 1\nmu_w = 0\ng = 2\nprofile = [1, 1]\nrk_e = 5\n",
        )
        .unwrap();
        assert_eq!(r.scenarios.len(), 2);
        assert!(!r.scenarios[0]
            .profile
            .as_ref()
            .unwrap()
            .violations
            .is_empty());
        assert!(r.scenarios[0].passed);
        assert!(!r.scenarios[1].errors.is_empty());
        assert!(!r.passed);
    }

    #[test]
    fn parse_errors_name_the_field() {
        let e = parse_scenarios("[[scenario]]\nn = 1\np = 3\nrk_w = 1\nmu_w = \"1/x\"\ng = 2\n")
            .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 5") && msg.contains("1/x"), "{msg}");

        let e =
            parse_scenarios("[[scenario]]\nn = 1\np = 4\nrk_w = 1\nmu_w = 0\ng = 2\n").unwrap_err();
        assert!(e.to_string().contains("`p`"));

        let e =
            parse_scenarios("[[scenario]]\nn = 2\np = 3\nrk_w = 1\nmu_w = 0\ng = 2\n").unwrap_err();
        assert!(e.to_string().contains("`g`"));

        assert!(parse_scenarios(
            "[[scenario]]\nn = 1\np = 3\nrk_w = 1\nmu_w = 0\ng = 2\nbogus = 1\n"
        )
        .is_err());
        assert!(
            parse_scenarios("[[scenario]]\nn = 1\np = 3\nrk_w = 1\nmu_w = \"1/0\"\ng = 2\n")
                .is_err()
        );
    }
}
