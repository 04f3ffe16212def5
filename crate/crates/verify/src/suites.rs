//! The verification suites. Each returns a [`SuiteOutcome`] keyed by case so
//! the report order never depends on execution order.

use std::collections::BTreeMap;

use frobenius_core::combinat::binomial;
use frobenius_core::filtration::{
    curve_report, graded_nabla_matrix, nabla_power, nabla_power_sparse, quotient_dims, sign_power,
};
use frobenius_core::monomial_box::{
    enumerate_box, hall_matching_exists, image_set, verify_matching, LengBuilder,
};
use frobenius_core::slopes::{
    curve_gap, equality_diagnosis, gap_lower_bound, pushforward_c1, pushforward_slope, ratio,
    weight_sum_check, InstabilityInput, ProfileMode, RankProfile, Rational, SlopeData,
};
use frobenius_core::t_rep::{
    degree_weight_check, gl2_dim, sym_to_t_matrix, t_basis, t_rank, v_vector_matrix,
    v_vector_sparse, verify_koszul_exact,
};
use frobenius_core::trunc_algebra::{
    check_orbit_dimension, omega_pairing_matrix, top_degree, truncated_monomials, GradedSubspace,
    RGrade,
};
use frobenius_core::Prime;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Suite, SuiteConfig};
use crate::sampling::{case_rng, curve_profile, mirror_profile, random_subspace, Stream};

/// Failure witnesses kept per suite; the count is always exact.
pub const MAX_WITNESSES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub passed: bool,
    pub cases: u64,
    pub skipped: u64,
    pub failure_count: u64,
    pub failures: Vec<Value>,
    pub table: BTreeMap<String, Value>,
}

#[derive(Default)]
struct Tally {
    cases: u64,
    skipped: u64,
    failure_count: u64,
    failures: Vec<Value>,
    table: BTreeMap<String, Value>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(witness());
            }
        }
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            passed: self.failure_count == 0,
            cases: self.cases,
            skipped: self.skipped,
            failure_count: self.failure_count,
            failures: self.failures,
            table: self.table,
        }
    }
}

fn key(n: usize, p: Prime, l: u32) -> String {
    format!("n{n:02}-p{:03}-l{l:03}", p.get())
}

fn grid_key(n: usize, p: Prime) -> String {
    format!("n{n:02}-p{:03}", p.get())
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> SuiteOutcome {
    match suite {
        Suite::Ranks => ranks(cfg),
        Suite::Koszul => koszul(cfg),
        Suite::Matching => matching(cfg),
        Suite::Prop36 => prop36(cfg),
        Suite::Filtration => filtration(cfg),
        Suite::Slopes => slopes(cfg),
    }
}

/// `dim Tˡ` three ways: closed form, basis count, rank of `Sym^ℓ → V^{⊗ℓ}`;
/// plus the `GL(2)` closed form and the per-variable weight sums.
pub fn ranks(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut t = Tally::default();
    for (n, p) in cfg.grid() {
        for l in 0..=top_degree(n, p) {
            let expected = t_rank(n, p, l);
            let basis = t_basis(n, p, l).len() as u128;
            let rows = binomial(n as u64 + u64::from(l) - 1, u64::from(l));
            let entries = (n as u128).checked_pow(l).and_then(|c| c.checked_mul(rows));
            let rank = match entries {
                Some(e) if e <= cfg.dense_limit as u128 => {
                    Some(sym_to_t_matrix(n, p, l).expect("within limit").rank() as u128)
                }
                _ => None,
            };
            if rank.is_none() {
                t.skipped += 1;
            }
            let gl2 = (n == 2).then(|| u128::from(gl2_dim(p, l).expect("ℓ ≤ 2(p−1)")));
            let weights = degree_weight_check(n, p, l);
            let ok = basis == expected
                && rank.is_none_or(|r| r == expected)
                && gl2.is_none_or(|g| g == expected)
                && weights.holds;
            let k = key(n, p, l);
            t.check(ok, || json!({"case": k, "t_rank": expected, "basis": basis, "rank": rank, "gl2": gl2, "weight_sums": weights.sums}));
            t.table.insert(
                k,
                json!({"t_rank": expected, "basis": basis, "rank": rank, "gl2": gl2}),
            );
        }
    }
    t.finish()
}

/// Exactness of the degree-ℓ Koszul strand resolving `Tˡ`.
pub fn koszul(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut t = Tally::default();
    for (n, p) in cfg.grid() {
        for l in 0..=top_degree(n, p) {
            let k = key(n, p, l);
            let report = verify_koszul_exact(n, p, l);
            let ok = report.is_exact();
            t.check(
                ok,
                || json!({"case": k, "failure": format!("{:?}", report.failure)}),
            );
            t.table.insert(
                k,
                json!({"dims": report.dims, "ranks": report.ranks, "cokernel": report.cokernel}),
            );
        }
    }
    t.finish()
}

/// Every cap vector with `n ≤ matching_max_n`, `aᵢ ≤ max_cap`, `σ ≤ max_sigma`
/// and every `ℓ ≤ σ/2`: the recursive matching is valid and the
/// augmenting-path oracle agrees that one exists.
pub fn matching(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut t = Tally::default();
    let mut builder = LengBuilder::new();
    for n in 1..=cfg.matching_max_n {
        let mut cases_n = 0u64;
        let mut caps = vec![0u32; n];
        loop {
            let sigma: u32 = caps.iter().sum();
            if sigma <= cfg.max_sigma {
                for l in 0..=sigma / 2 {
                    let result = builder.matching(&caps, l);
                    let (ok, detail) = match &result {
                        Ok(m) => match verify_matching(m) {
                            Ok(()) => {
                                let injective = image_set(m).len() == enumerate_box(&caps, l).len();
                                let hall = hall_matching_exists(&caps, l);
                                (
                                    injective && hall,
                                    format!("injective={injective} hall={hall}"),
                                )
                            }
                            Err(v) => (false, v.to_string()),
                        },
                        Err(e) => (false, e.to_string()),
                    };
                    t.check(ok, || json!({"caps": caps, "l": l, "detail": detail}));
                    cases_n += 1;
                }
            }
            if !next_caps(&mut caps, cfg.max_cap) {
                break;
            }
        }
        t.table
            .insert(format!("n{n:02}"), json!({"cases": cases_n}));
    }
    t.finish()
}

/// Odometer over `[0, max]ⁿ`; false once it wraps.
fn next_caps(caps: &mut [u32], max: u32) -> bool {
    for c in caps.iter_mut().rev() {
        if *c < max {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

/// Coordinate index sets used for a grade of dimension `dim`.
fn coordinate_subsets(dim: usize, limit: usize) -> Vec<Vec<usize>> {
    if dim <= limit {
        return (0..1u64 << dim)
            .map(|mask| (0..dim).filter(|&i| mask >> i & 1 == 1).collect())
            .collect();
    }
    let mut out = vec![Vec::new(), (0..dim).collect()];
    for i in 0..dim {
        out.push(vec![i]);
        out.push((0..dim).filter(|&j| j != i).collect());
    }
    out
}

/// Invertibility of every ω-pairing `D_ℓ → R^{N−ℓ}`, then
/// `dim V ≤ dim 𝕃(D_{2ℓ−N}·V)` for coordinate and random subspaces of every
/// grade `ℓ ≥ N/2`.
pub fn prop36(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut t = Tally::default();
    for (n, p) in cfg.grid() {
        let top = top_degree(n, p);
        for l in 0..=top {
            let m = omega_pairing_matrix(n, p, l).expect("ℓ ≤ N");
            let invertible = m.rows() == m.cols() && m.rank() == m.rows();
            t.check(invertible, || json!({"case": key(n, p, l), "pairing_rows": m.rows(), "pairing_rank": m.rank()}));
        }
        t.table
            .insert(grid_key(n, p), json!({"pairings_checked": top + 1}));
        for l in top.div_ceil(2)..=top {
            let dim = RGrade::new(n, p, l).dim();
            let mut min_slack = i64::MAX;
            let mut record = |t: &mut Tally, v: &GradedSubspace, origin: &str| {
                let check = check_orbit_dimension(v).expect("grade in range");
                let (d, img) = check.dims();
                min_slack = min_slack.min(img as i64 - d as i64);
                t.check(check.holds(), || {
                    json!({"case": key(n, p, l), "origin": origin, "dim": d, "image_dim": img,
                           "basis": (0..v.dim()).map(|r| v.basis().row(r).to_vec()).collect::<Vec<_>>()})
                });
            };
            let subsets = coordinate_subsets(dim, cfg.coordinate_dim_limit);
            for s in &subsets {
                let v = GradedSubspace::coordinate(n, p, l, s).expect("valid indices");
                record(&mut t, &v, "coordinate");
            }
            let mut rng = case_rng(cfg.seed, Stream::Subspace, n, p, l);
            for _ in 0..cfg.random_subspaces_per_grade {
                let v = random_subspace(&mut rng, n, p, l);
                record(&mut t, &v, "random");
            }
            t.table.insert(
                key(n, p, l),
                json!({"dim": dim, "coordinate": subsets.len(), "random": cfg.random_subspaces_per_grade, "min_slack": min_slack}),
            );
        }
    }
    t.finish()
}

/// Injectivity of the graded ∇ maps, quotient dimensions, and
/// `∇^ℓ = (−1)^ℓ·v` entrywise.
pub fn filtration(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut t = Tally::default();
    for (n, p) in cfg.grid() {
        let top = top_degree(n, p);
        let quotients = quotient_dims(n, p);
        for l in 0..=top {
            let k = key(n, p, l);
            let injective = if l == 0 {
                true
            } else {
                let g = graded_nabla_matrix(n, p, l).expect("1 ≤ ℓ ≤ N");
                g.rank() == g.rows()
            };
            let quotient = quotients[l as usize] as u128;
            let quotient_ok = quotient == t_rank(n, p, l);
            let monomials = truncated_monomials(n, p, l);
            let dense = (n as u128)
                .checked_pow(l)
                .and_then(|c| c.checked_mul(monomials.len() as u128))
                .is_some_and(|e| e <= cfg.dense_limit as u128);
            let sign = sign_power(l, p);
            let power_ok = if dense {
                let lhs = nabla_power(n, p, l).expect("within limit");
                let rhs = v_vector_matrix(&monomials, n, l, p)
                    .expect("within limit")
                    .scale(sign);
                lhs == rhs
            } else {
                monomials.iter().all(|m| {
                    let expected: Vec<(usize, u32)> = v_vector_sparse(m, p)
                        .into_iter()
                        .map(|(i, c)| (i, p.mul(c, sign)))
                        .collect();
                    nabla_power_sparse(m, p) == expected
                })
            };
            let ok = injective && quotient_ok && power_ok;
            t.check(ok, || {
                json!({"case": k, "injective": injective, "quotient": quotient, "power_matches": power_ok})
            });
            t.table.insert(
                k,
                json!({"quotient": quotient, "injective": injective, "power_check": if dense { "dense" } else { "sparse" }}),
            );
        }
        if n == 1 {
            let r = curve_report(p);
            t.check(
                r.holds(),
                || json!({"case": grid_key(n, p), "curve_entries": r.entries, "ranks": r.ranks}),
            );
        }
    }
    t.finish()
}

fn rat(r: &Rational) -> String {
    r.to_string()
}

/// Closed-form slope values, the weight-sum inequality on seeded profiles,
/// the curve specialisation, and equality diagnosis on full profiles.
pub fn slopes(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut t = Tally::default();
    let p2 = Prime::new(2).expect("prime");
    let p3 = Prime::new(3).expect("prime");

    let sd = SlopeData::curve(p2, 2, 1, ratio(0, 1)).expect("rank 1");
    let mu = pushforward_slope(&sd);
    t.check(
        mu == ratio(1, 2),
        || json!({"case": "curve_pushforward_slope", "value": rat(&mu)}),
    );
    let c1 = pushforward_c1(&sd);
    t.check(
        c1 == ratio(1, 1),
        || json!({"case": "curve_pushforward_c1", "value": rat(&c1)}),
    );
    let full = RankProfile::new(vec![1, 1, 1]);
    let g = curve_gap(2, p3, &full, 3).expect("consistent rank");
    t.check(
        g == ratio(0, 1),
        || json!({"case": "curve_gap_full", "value": rat(&g)}),
    );
    let g = curve_gap(2, p3, &RankProfile::new(vec![1, 1]), 2).expect("consistent rank");
    t.check(
        g == ratio(1, 3),
        || json!({"case": "curve_gap_11", "value": rat(&g)}),
    );
    t.table.insert(
        "closed_forms".into(),
        json!({"mu_pushforward_g2_p2": rat(&mu), "curve_gap_full_p3": "0", "curve_gap_11_p3_g2": rat(&g)}),
    );

    let grid = cfg.grid();
    let per_point = |i: usize| {
        cfg.random_profiles / grid.len().max(1)
            + usize::from(i < cfg.random_profiles % grid.len().max(1))
    };
    for (i, &(n, p)) in grid.iter().enumerate() {
        let mut rng = case_rng(cfg.seed, Stream::MirrorProfile, n, p, 0);
        let count = per_point(i);
        let mut min_sum: Option<Rational> = None;
        for _ in 0..count {
            let profile = mirror_profile(&mut rng, n, p, 12);
            let check =
                weight_sum_check(n, p, &profile, ProfileMode::General { connection: false });
            let mut ok = check.hypotheses_hold() && check.nonnegative() && check.forms_agree();
            if ok && profile.total() > 0 {
                let kh = rng.random_range(0..8i64);
                let sd = SlopeData::from_mu(n, p, 1, ratio(0, 1), ratio(kh, 1)).expect("rank 1");
                let gap = gap_lower_bound(
                    &sd,
                    &profile,
                    &InstabilityInput::zeros(profile.ranks().len()),
                    profile.total(),
                )
                .expect("consistent rank");
                ok = gap >= ratio(0, 1);
            }
            if min_sum.as_ref().is_none_or(|m| check.direct < *m) {
                min_sum = Some(check.direct.clone());
            }
            t.check(ok, || {
                json!({"case": grid_key(n, p), "profile": profile.ranks(), "direct": rat(&check.direct),
                       "rearranged": rat(&check.rearranged)})
            });
        }

        let full = RankProfile::full(n, p, 1);
        let sd = SlopeData::from_mu(n, p, 1, ratio(0, 1), ratio(1, 1)).expect("rank 1");
        let d = equality_diagnosis(
            &sd,
            &full,
            &InstabilityInput::zeros(full.ranks().len()),
            full.total(),
        )
        .expect("consistent rank");
        t.check(
            d.in_equality_regime() && d.consistent(),
            || json!({"case": grid_key(n, p), "diagnosis": format!("{d:?}")}),
        );

        t.table.insert(
            grid_key(n, p),
            json!({"profiles": count, "min_weight_sum": min_sum.map(|m| rat(&m)), "full_profile_gap": rat(&d.gap)}),
        );
    }

    let mut primes: Vec<Prime> = grid.iter().map(|&(_, p)| p).collect();
    primes.sort_by_key(|p| p.get());
    primes.dedup();
    for p in primes {
        let mut rng = case_rng(cfg.seed, Stream::CurveProfile, 1, p, 0);
        for _ in 0..cfg.random_profiles.div_ceil(100).max(1) {
            let profile = curve_profile(&mut rng, p, 6);
            let g = rng.random_range(0..6u64);
            let total = profile.total();
            let sd = SlopeData::curve(p, g, 1, ratio(0, 1)).expect("rank 1");
            let direct = curve_gap(g, p, &profile, total).expect("consistent rank");
            let general = gap_lower_bound(
                &sd,
                &profile,
                &InstabilityInput::zeros(p.get() as usize),
                total,
            )
            .expect("consistent rank");
            t.check(direct == general, || {
                json!({"case": format!("curve-p{:03}", p.get()), "profile": profile.ranks(), "g": g,
                       "curve_gap": rat(&direct), "gap_lower_bound": rat(&general)})
            });
        }
    }
    t.finish()
}
