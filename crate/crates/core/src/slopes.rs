//! Slope and instability arithmetic for `F_*W`, in exact rationals.
//!
//! Notation: `n = dim X`, `N = n(p−1)`, `KH = K_X·H^{n−1}`. A subsheaf
//! `ℰ ⊂ F_*W` induces a filtration whose graded pieces `Fₗ ⊂ W⊗T^ℓ(Ω¹)` have
//! ranks `rₗ`, the rank profile. All bounds below are evaluated for whatever
//! invariants the caller supplies; nothing here computes them geometrically.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::fp::Prime;
use crate::t_rep::t_rank;
use crate::trunc_algebra::top_degree;
use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `a/b` as an exact rational. Panics if `b = 0`.
pub fn ratio(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn int(a: impl Into<BigInt>) -> Rational {
    Rational::from_integer(a.into())
}

/// Invariants of `X` and `W` entering the slope formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeData {
    n: usize,
    p: Prime,
    rk_w: u64,
    c1_w_h: Rational,
    kh: Rational,
}

impl SlopeData {
    pub fn from_c1(n: usize, p: Prime, rk_w: u64, c1_w_h: Rational, kh: Rational) -> Result<Self> {
        if rk_w == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(SlopeData {
            n,
            p,
            rk_w,
            c1_w_h,
            kh,
        })
    }

    pub fn from_mu(n: usize, p: Prime, rk_w: u64, mu_w: Rational, kh: Rational) -> Result<Self> {
        let c1 = mu_w * int(rk_w);
        Self::from_c1(n, p, rk_w, c1, kh)
    }

    /// A curve of genus `g`, so `KH = 2g − 2`.
    pub fn curve(p: Prime, g: u64, rk_w: u64, mu_w: Rational) -> Result<Self> {
        Self::from_mu(1, p, rk_w, mu_w, int(2 * i128::from(g) - 2))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn rk_w(&self) -> u64 {
        self.rk_w
    }

    pub fn c1_w_h(&self) -> &Rational {
        &self.c1_w_h
    }

    pub fn mu_w(&self) -> Rational {
        &self.c1_w_h / int(self.rk_w)
    }

    pub fn kh(&self) -> &Rational {
        &self.kh
    }

    /// `rk F_*W = pⁿ·rk W`.
    pub fn pushforward_rank(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p.get()), self.n) * BigInt::from(self.rk_w)
    }
}

/// `μ(F_*W) = ((p−1)/2·KH + μ(W)) / p`.
pub fn pushforward_slope(sd: &SlopeData) -> Rational {
    let p = int(sd.p.get());
    (ratio(i64::from(sd.p.get()) - 1, 2) * &sd.kh + sd.mu_w()) / p
}

/// `c₁(F_*W)·H^{n−1} = rk W·(pⁿ − p^{n−1})/2·KH + p^{n−1}·c₁(W)·H^{n−1}`.
pub fn pushforward_c1(sd: &SlopeData) -> Rational {
    let p = BigInt::from(sd.p.get());
    let pn1 = if sd.n == 0 {
        Rational::zero()
    } else {
        int(num_traits::pow(p.clone(), sd.n - 1))
    };
    let pn = int(num_traits::pow(p, sd.n));
    int(sd.rk_w) * (pn - &pn1) / int(2) * &sd.kh + pn1 * &sd.c1_w_h
}

/// `μ(T^ℓ(Ω¹)) = ℓ·KH/n`.
pub fn t_slope(n: usize, p: Prime, degree: u32, kh: &Rational) -> Result<Rational> {
    let top = top_degree(n, p);
    if degree > top {
        return Err(Error::GradeOutOfRange {
            grade: degree,
            min: 0,
            max: top,
        });
    }
    if n == 0 {
        return Ok(Rational::zero());
    }
    Ok(int(degree) * kh / int(n as u64))
}

/// Ranks `r₀, …, r_m` of the graded pieces induced by a subsheaf.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankProfile {
    ranks: Vec<u64>,
}

impl RankProfile {
    pub fn new(ranks: Vec<u64>) -> Self {
        RankProfile { ranks }
    }

    /// `rₗ = rk W · dim T^ℓ` for every `ℓ`, the profile of `F_*W` itself.
    pub fn full(n: usize, p: Prime, rk_w: u64) -> Self {
        let ranks = (0..=top_degree(n, p))
            .map(|l| rk_w * t_rank(n, p, l) as u64)
            .collect();
        RankProfile { ranks }
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    /// `rₗ`, zero past the end.
    pub fn get(&self, l: usize) -> u64 {
        self.ranks.get(l).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.ranks.iter().sum()
    }

    /// Largest `m` with `r_m > 0`.
    pub fn support_end(&self) -> Option<usize> {
        self.ranks.iter().rposition(|&r| r > 0)
    }

    /// Checks the hypotheses of `mode`, plus `rₗ ≤ rk W·dim T^ℓ` when `rk_w`
    /// is given. An empty result means the profile is admissible.
    pub fn validate(
        &self,
        n: usize,
        p: Prime,
        rk_w: Option<u64>,
        mode: ProfileMode,
    ) -> Vec<ProfileViolation> {
        let top = top_degree(n, p) as usize;
        let mut out = Vec::new();
        if self.ranks.len() > top + 1 {
            out.push(ProfileViolation::TooLong {
                len: self.ranks.len(),
                max: top + 1,
            });
        }
        if let Some(rk) = rk_w {
            for (l, &r) in self.ranks.iter().enumerate().take(top + 1) {
                let bound = rk * t_rank(n, p, l as u32) as u64;
                if r > bound {
                    out.push(ProfileViolation::ExceedsQuotient {
                        step: l,
                        rank: r,
                        bound,
                    });
                }
            }
        }
        match mode {
            ProfileMode::Curve => {
                for l in 1..self.ranks.len() {
                    if self.ranks[l] > self.ranks[l - 1] {
                        out.push(ProfileViolation::NotMonotone { step: l });
                    }
                }
            }
            ProfileMode::General { connection } => {
                for l in top.div_ceil(2)..=top {
                    if 2 * l <= top {
                        continue;
                    }
                    let (r, mirror) = (self.get(l), self.get(top - l));
                    if r > mirror {
                        out.push(ProfileViolation::AboveMirror {
                            step: l,
                            rank: r,
                            mirror,
                        });
                    }
                }
                if connection {
                    for l in 1..self.ranks.len() {
                        let bound = n as u64 * self.ranks[l - 1];
                        if self.ranks[l] > bound {
                            out.push(ProfileViolation::ConnectionBound {
                                step: l,
                                rank: self.ranks[l],
                                bound,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Which structural hypothesis a profile is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    /// `r₀ ≥ r₁ ≥ ⋯`, forced on curves by the isomorphisms `T^ℓ ≅ Ω^{⊗ℓ}`.
    Curve,
    /// `rₗ ≤ r_{N−ℓ}` for `ℓ > N/2`. With `connection`, also
    /// `rₗ ≤ n·r_{ℓ−1}`, which holds because `∇` embeds `Fₗ` into
    /// `F_{ℓ−1} ⊗ Ω¹`.
    General { connection: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileViolation {
    TooLong { len: usize, max: usize },
    ExceedsQuotient { step: usize, rank: u64, bound: u64 },
    NotMonotone { step: usize },
    AboveMirror { step: usize, rank: u64, mirror: u64 },
    ConnectionBound { step: usize, rank: u64, bound: u64 },
}

impl fmt::Display for ProfileViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileViolation::TooLong { len, max } => {
                write!(f, "profile has {len} entries, at most {max} allowed")
            }
            ProfileViolation::ExceedsQuotient { step, rank, bound } => {
                write!(f, "r_{step} = {rank} exceeds the graded piece rank {bound}")
            }
            ProfileViolation::NotMonotone { step } => write!(f, "r_{step} > r_{}", step - 1),
            ProfileViolation::AboveMirror { step, rank, mirror } => {
                write!(f, "r_{step} = {rank} exceeds its mirror rank {mirror}")
            }
            ProfileViolation::ConnectionBound { step, rank, bound } => {
                write!(f, "r_{step} = {rank} exceeds n·r_{} = {bound}", step - 1)
            }
        }
    }
}

/// Per-step instabilities `Iₗ = I(W ⊗ T^ℓ(Ω¹))`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstabilityInput {
    values: Vec<Rational>,
}

impl InstabilityInput {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(step) = values.iter().position(|v| v.is_negative()) {
            return Err(Error::NegativeInstability { step });
        }
        Ok(InstabilityInput { values })
    }

    /// `Iₗ = 0` for `ℓ = 0..len`.
    pub fn zeros(len: usize) -> Self {
        InstabilityInput {
            values: alloc::vec![Rational::zero(); len],
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `I(W, X)`, the largest entry (zero if empty).
    pub fn max(&self) -> Rational {
        self.values
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

fn check_rank(profile: &RankProfile, rk_e: u64, top: u32) -> Result<()> {
    if rk_e == 0 {
        return Err(Error::ZeroRank);
    }
    if profile.ranks.len() > top as usize + 1 {
        return Err(Error::ProfileTooLong {
            len: profile.ranks.len(),
            max: top as usize + 1,
        });
    }
    let sum = profile.total();
    if sum != rk_e {
        return Err(Error::RankMismatch {
            declared: rk_e,
            profile_sum: sum,
        });
    }
    Ok(())
}

/// `Σ (N/2 − ℓ)·rₗ`, summed directly.
pub fn weight_sum(n: usize, p: Prime, profile: &RankProfile) -> Rational {
    let (twice, _) = doubled_sums(n, p, profile);
    ratio_i128(twice, 2)
}

fn ratio_i128(a: i128, b: i128) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Both forms of the weight sum, doubled so they are integers.
///
/// The rearranged form pairs `ℓ > N/2` with `N − ℓ`:
/// `Σ_{ℓ=m+1}^{N} (ℓ−N/2)·r_{N−ℓ} + Σ_{N/2<ℓ≤m} (ℓ−N/2)·(r_{N−ℓ} − rₗ)`,
/// with the first sum restricted to `ℓ > N/2` when `m ≤ N/2`.
fn doubled_sums(n: usize, p: Prime, profile: &RankProfile) -> (i128, i128) {
    let top = i128::from(top_degree(n, p));
    let direct = profile
        .ranks
        .iter()
        .enumerate()
        .map(|(l, &r)| (top - 2 * l as i128) * i128::from(r))
        .sum();
    let m = profile.ranks.len() as i128 - 1;
    let r = |l: i128| -> i128 {
        if l < 0 {
            0
        } else {
            i128::from(profile.get(l as usize))
        }
    };
    let mut rearranged = 0;
    for l in (top / 2 + 1)..=top {
        let w = 2 * l - top;
        if l > m {
            rearranged += w * r(top - l);
        } else {
            rearranged += w * (r(top - l) - r(l));
        }
    }
    (direct, rearranged)
}

/// Lower bound for `μ(F_*W) − μ(ℰ)` in terms of the profile of `ℰ`:
///
/// `KH/(n·p·rk ℰ)·Σ(N/2 − ℓ)rₗ − (1/p)·Σ rₗ·Iₗ / rk ℰ`.
pub fn gap_lower_bound(
    sd: &SlopeData,
    profile: &RankProfile,
    inst: &InstabilityInput,
    rk_e: u64,
) -> Result<Rational> {
    let top = top_degree(sd.n, sd.p);
    check_rank(profile, rk_e, top)?;
    let mut weighted = Rational::zero();
    for (l, &r) in profile.ranks.iter().enumerate() {
        if r == 0 {
            continue;
        }
        let i = inst
            .values
            .get(l)
            .ok_or(Error::MissingInstability { step: l })?;
        weighted += i * int(r);
    }
    let p = int(sd.p.get());
    let rk = int(rk_e);
    let first = if sd.n == 0 {
        Rational::zero()
    } else {
        &sd.kh / (int(sd.n as u64) * &p * &rk) * weight_sum(sd.n, sd.p, profile)
    };
    Ok(first - weighted / (p * rk))
}

/// The curve bound `(2g−2)/(p·rk ℰ)·Σ((p−1)/2 − ℓ)rₗ`.
pub fn curve_gap(g: u64, p: Prime, profile: &RankProfile, rk_e: u64) -> Result<Rational> {
    check_rank(profile, rk_e, p.get() - 1)?;
    let kh = int(2 * i128::from(g) - 2);
    Ok(kh / (int(p.get()) * int(rk_e)) * weight_sum(1, p, profile))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSumCheck {
    pub direct: Rational,
    pub rearranged: Rational,
    /// Hypothesis violations; the sums are computed regardless.
    pub violations: Vec<ProfileViolation>,
}

impl WeightSumCheck {
    pub fn forms_agree(&self) -> bool {
        self.direct == self.rearranged
    }

    pub fn nonnegative(&self) -> bool {
        !self.direct.is_negative()
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.violations.is_empty()
    }

    /// Both forms agree and, when the hypotheses hold, the sum is `≥ 0`.
    pub fn holds(&self) -> bool {
        self.forms_agree() && (!self.hypotheses_hold() || self.nonnegative())
    }
}

/// Evaluates `Σ(N/2 − ℓ)rₗ` directly and in paired form, after checking the
/// profile against `mode`.
pub fn weight_sum_check(
    n: usize,
    p: Prime,
    profile: &RankProfile,
    mode: ProfileMode,
) -> WeightSumCheck {
    let (direct, rearranged) = doubled_sums(n, p, profile);
    WeightSumCheck {
        direct: ratio_i128(direct, 2),
        rearranged: ratio_i128(rearranged, 2),
        violations: profile.validate(n, p, None, mode),
    }
}

/// Necessary conditions for `ℰ = F_*W` when the gap bound is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityDiagnosis {
    pub gap: Rational,
    pub gap_is_zero: bool,
    pub kh_positive: bool,
    pub instabilities_zero: bool,
    /// Largest `m` with `r_m > 0`.
    pub support_end: Option<usize>,
    pub full_length: bool,
    /// `rₗ = r_{N−ℓ}` for all `ℓ`.
    pub symmetric: bool,
    /// Every paired term `(ℓ − N/2)(r_{N−ℓ} − rₗ)` and `(ℓ − N/2)r_{N−ℓ}`
    /// with `ℓ > m` vanishes.
    pub paired_terms_zero: bool,
}

impl EqualityDiagnosis {
    /// Whether the gap sits in the equality regime (`KH > 0`, all `Iₗ = 0`,
    /// bound zero).
    pub fn in_equality_regime(&self) -> bool {
        self.gap_is_zero && self.kh_positive && self.instabilities_zero
    }

    /// In the equality regime the profile must be full length and symmetric.
    pub fn consistent(&self) -> bool {
        !self.in_equality_regime() || (self.full_length && self.symmetric && self.paired_terms_zero)
    }
}

pub fn equality_diagnosis(
    sd: &SlopeData,
    profile: &RankProfile,
    inst: &InstabilityInput,
    rk_e: u64,
) -> Result<EqualityDiagnosis> {
    let gap = gap_lower_bound(sd, profile, inst, rk_e)?;
    let top = top_degree(sd.n, sd.p) as usize;
    let support_end = profile.support_end();
    let symmetric = (0..=top).all(|l| profile.get(l) == profile.get(top - l));
    let paired_terms_zero = (0..=top)
        .filter(|&l| 2 * l > top)
        .all(|l| profile.get(top - l) == profile.get(l));
    Ok(EqualityDiagnosis {
        gap_is_zero: gap.is_zero(),
        gap,
        kh_positive: sd.kh.is_positive(),
        instabilities_zero: profile
            .ranks
            .iter()
            .enumerate()
            .all(|(l, &r)| r == 0 || inst.values.get(l).is_none_or(Zero::is_zero)),
        support_end,
        full_length: support_end == Some(top),
        symmetric,
        paired_terms_zero,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstabilityBound {
    /// `p^{n−1}·rk W·I(W,X)`; `None` when `KH < 0`.
    pub bound: Option<Rational>,
    pub kh_negative: bool,
}

/// `I(F_*W) ≤ p^{n−1}·rk W·I(W,X)`, valid when `KH ≥ 0`.
pub fn instability_bound(sd: &SlopeData, iwx: &Rational) -> Result<InstabilityBound> {
    if iwx.is_negative() {
        return Err(Error::NegativeInstability { step: 0 });
    }
    let kh_negative = sd.kh.is_negative();
    let bound = (!kh_negative).then(|| {
        let pn1 = if sd.n == 0 {
            Rational::zero()
        } else {
            int(num_traits::pow(BigInt::from(sd.p.get()), sd.n - 1))
        };
        pn1 * int(sd.rk_w) * iwx
    });
    Ok(InstabilityBound { bound, kh_negative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    fn prof(r: &[u64]) -> RankProfile {
        RankProfile::new(r.to_vec())
    }

    #[test]
    fn pushforward_slope_examples() {
        let sd = SlopeData::curve(p(2), 2, 1, ratio(0, 1)).unwrap();
        assert_eq!(pushforward_slope(&sd), ratio(1, 2));

        for q in [2, 3, 7] {
            let sd = SlopeData::from_mu(3, p(q), 2, ratio(5, 3), ratio(0, 1)).unwrap();
            assert_eq!(pushforward_slope(&sd), ratio(5, 3 * q as i64));
        }

        let sd = SlopeData::from_mu(2, p(3), 1, ratio(1, 1), ratio(5, 1)).unwrap();
        assert_eq!(pushforward_slope(&sd), ratio(2, 1));
    }

    #[test]
    fn pushforward_c1_examples() {
        let sd = SlopeData::curve(p(2), 2, 1, ratio(0, 1)).unwrap();
        assert_eq!(pushforward_c1(&sd), ratio(1, 1));

        let sd = SlopeData::from_c1(2, p(3), 1, ratio(7, 1), ratio(0, 1)).unwrap();
        assert_eq!(pushforward_c1(&sd), ratio(21, 1));

        let sd = SlopeData::from_c1(1, p(3), 2, ratio(0, 1), ratio(2, 1)).unwrap();
        assert_eq!(pushforward_c1(&sd), ratio(4, 1));
    }

    #[test]
    fn t_slope_examples() {
        assert_eq!(t_slope(2, p(3), 0, &ratio(4, 1)).unwrap(), ratio(0, 1));
        assert_eq!(t_slope(2, p(3), 3, &ratio(4, 1)).unwrap(), ratio(6, 1));
        for l in 0..5 {
            assert_eq!(
                t_slope(1, p(5), l, &ratio(2, 1)).unwrap(),
                ratio(2 * i64::from(l), 1)
            );
        }
        assert!(t_slope(2, p(3), 5, &ratio(1, 1)).is_err());
    }

    #[test]
    fn gap_examples() {
        let sd = SlopeData::curve(p(3), 2, 1, ratio(0, 1)).unwrap();
        let gap = gap_lower_bound(&sd, &prof(&[1, 1]), &InstabilityInput::zeros(3), 2).unwrap();
        assert_eq!(gap, ratio(1, 3));

        for (n, q) in [(1, 5), (2, 3), (3, 2), (2, 5)] {
            let q = p(q);
            let sd = SlopeData::from_mu(n, q, 2, ratio(1, 2), ratio(3, 1)).unwrap();
            let full = RankProfile::full(n, q, 2);
            let inst = InstabilityInput::zeros(full.ranks().len());
            assert_eq!(
                gap_lower_bound(&sd, &full, &inst, full.total()).unwrap(),
                ratio(0, 1)
            );
        }

        let sd = SlopeData::from_mu(2, p(3), 1, ratio(0, 1), ratio(1, 1)).unwrap();
        let gap = gap_lower_bound(&sd, &prof(&[1, 2, 1]), &InstabilityInput::zeros(5), 4).unwrap();
        assert!(!gap.is_negative());
    }

    #[test]
    fn gap_instability_term() {
        let sd = SlopeData::curve(p(3), 1, 1, ratio(0, 1)).unwrap();
        let inst = InstabilityInput::new(vec![ratio(1, 1), ratio(3, 1), ratio(0, 1)]).unwrap();
        // KH = 0: only −(1/3)(1·1 + 1·3)/2 remains
        assert_eq!(
            gap_lower_bound(&sd, &prof(&[1, 1]), &inst, 2).unwrap(),
            ratio(-2, 3)
        );
    }

    #[test]
    fn gap_errors() {
        let sd = SlopeData::curve(p(3), 2, 1, ratio(0, 1)).unwrap();
        let z = InstabilityInput::zeros(3);
        assert_eq!(
            gap_lower_bound(&sd, &prof(&[0, 0]), &z, 0),
            Err(Error::ZeroRank)
        );
        assert_eq!(
            gap_lower_bound(&sd, &prof(&[1, 1]), &z, 3),
            Err(Error::RankMismatch {
                declared: 3,
                profile_sum: 2
            })
        );
        assert_eq!(
            gap_lower_bound(&sd, &prof(&[1, 1, 1, 1]), &z, 4),
            Err(Error::ProfileTooLong { len: 4, max: 3 })
        );
        assert_eq!(
            gap_lower_bound(&sd, &prof(&[1, 1]), &InstabilityInput::zeros(1), 2),
            Err(Error::MissingInstability { step: 1 })
        );
        assert_eq!(
            InstabilityInput::new(vec![ratio(0, 1), ratio(-1, 2)]),
            Err(Error::NegativeInstability { step: 1 })
        );
        assert_eq!(
            SlopeData::curve(p(3), 2, 0, ratio(0, 1)),
            Err(Error::ZeroRank)
        );
    }

    #[test]
    fn curve_gap_examples() {
        assert_eq!(curve_gap(2, p(3), &prof(&[1, 1]), 2).unwrap(), ratio(1, 3));
        assert_eq!(curve_gap(2, p(5), &prof(&[3; 5]), 15).unwrap(), ratio(0, 1));
        assert_eq!(curve_gap(2, p(2), &prof(&[1, 1]), 2).unwrap(), ratio(0, 1));
        for r in [&[1u64][..], &[2, 1], &[1, 1, 1], &[3, 0]] {
            assert_eq!(
                curve_gap(1, p(3), &prof(r), r.iter().sum()).unwrap(),
                ratio(0, 1)
            );
        }
    }

    #[test]
    fn weight_sum_examples() {
        let c = weight_sum_check(1, p(3), &prof(&[1, 1, 1]), ProfileMode::Curve);
        assert_eq!(c.direct, ratio(0, 1));
        assert!(c.holds() && c.hypotheses_hold());

        let c = weight_sum_check(1, p(3), &prof(&[1, 1]), ProfileMode::Curve);
        assert_eq!(c.direct, ratio(1, 1));
        assert_eq!(c.rearranged, ratio(1, 1));

        let c = weight_sum_check(
            2,
            p(3),
            &prof(&[2, 1]),
            ProfileMode::General { connection: true },
        );
        assert_eq!(c.direct, ratio(5, 1));
        assert!(c.holds());

        let c = weight_sum_check(1, p(3), &prof(&[1, 2]), ProfileMode::Curve);
        assert_eq!(
            c.violations,
            vec![ProfileViolation::NotMonotone { step: 1 }]
        );
        assert_eq!(c.direct, ratio(1, 1));
    }

    #[test]
    fn hypothesis_violation_can_go_negative() {
        // r₂ > r₀ breaks the mirror bound and the sum goes negative
        let c = weight_sum_check(
            1,
            p(3),
            &prof(&[0, 0, 1]),
            ProfileMode::General { connection: false },
        );
        assert_eq!(
            c.violations,
            vec![ProfileViolation::AboveMirror {
                step: 2,
                rank: 1,
                mirror: 0
            }]
        );
        assert_eq!(c.direct, ratio(-1, 1));
        assert!(c.forms_agree());
        assert!(c.holds());
    }

    #[test]
    fn validation_modes() {
        let q = p(3);
        let general = ProfileMode::General { connection: true };
        assert!(RankProfile::full(2, q, 1)
            .validate(2, q, Some(1), general)
            .is_empty());
        assert!(RankProfile::full(1, q, 3)
            .validate(1, q, Some(3), ProfileMode::Curve)
            .is_empty());

        let v = prof(&[1, 3]).validate(2, q, Some(1), general);
        assert!(v.contains(&ProfileViolation::ExceedsQuotient {
            step: 1,
            rank: 3,
            bound: 2
        }));
        assert!(v.contains(&ProfileViolation::ConnectionBound {
            step: 1,
            rank: 3,
            bound: 2
        }));

        let v = prof(&[1; 6]).validate(2, q, None, general);
        assert_eq!(v, vec![ProfileViolation::TooLong { len: 6, max: 5 }]);
    }

    #[test]
    fn equality_diagnosis_examples() {
        let q = p(3);
        let sd = SlopeData::from_mu(2, q, 1, ratio(0, 1), ratio(1, 1)).unwrap();
        let full = RankProfile::full(2, q, 1);
        let d = equality_diagnosis(&sd, &full, &InstabilityInput::zeros(5), full.total()).unwrap();
        assert!(d.in_equality_regime());
        assert!(d.full_length && d.symmetric && d.paired_terms_zero && d.consistent());
        assert_eq!(d.support_end, Some(4));

        let d = equality_diagnosis(&sd, &prof(&[1, 1]), &InstabilityInput::zeros(5), 2).unwrap();
        assert!(!d.gap_is_zero && !d.full_length && d.consistent());

        // r₀ = 0 profiles can balance without being full; the connection
        // bound excludes them
        let curve = SlopeData::curve(q, 2, 1, ratio(0, 1)).unwrap();
        let odd = prof(&[0, 1, 0]);
        let d = equality_diagnosis(&curve, &odd, &InstabilityInput::zeros(3), 1).unwrap();
        assert!(d.in_equality_regime() && !d.consistent());
        assert!(!odd
            .validate(1, q, None, ProfileMode::General { connection: true })
            .is_empty());
    }

    #[test]
    fn instability_bound_examples() {
        let sd = SlopeData::from_mu(2, p(3), 2, ratio(0, 1), ratio(1, 1)).unwrap();
        let b = instability_bound(&sd, &ratio(0, 1)).unwrap();
        assert_eq!(b.bound, Some(ratio(0, 1)));
        assert_eq!(
            instability_bound(&sd, &ratio(1, 2)).unwrap().bound,
            Some(ratio(3, 1))
        );

        let sd = SlopeData::curve(p(2), 2, 1, ratio(0, 1)).unwrap();
        assert_eq!(
            instability_bound(&sd, &ratio(1, 1)).unwrap().bound,
            Some(ratio(1, 1))
        );

        let sd = SlopeData::curve(p(2), 0, 1, ratio(0, 1)).unwrap();
        let b = instability_bound(&sd, &ratio(1, 1)).unwrap();
        assert!(b.kh_negative && b.bound.is_none());

        assert!(instability_bound(&sd, &ratio(-1, 1)).is_err());
    }

    fn mirror_profile(n: usize, q: u64) -> impl Strategy<Value = (usize, Prime, Vec<u64>)> {
        let q = p(q);
        let top = top_degree(n, q) as usize;
        (prop::collection::vec(0u64..6, top + 1), 0..=top).prop_map(move |(mut r, m)| {
            r.truncate(m + 1);
            for l in 0..r.len() {
                if 2 * l > top {
                    r[l] = r[l].min(r[top - l]);
                }
            }
            (n, q, r)
        })
    }

    fn any_slope_data() -> impl Strategy<Value = SlopeData> {
        (
            1usize..4,
            prop::sample::select(vec![2u64, 3, 5, 7]),
            1u64..5,
            -20i64..20,
            1i64..6,
            -10i64..10,
        )
            .prop_map(|(n, q, rk, c, d, kh)| {
                SlopeData::from_c1(n, p(q), rk, ratio(c, d), ratio(kh, 1)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn pushforward_consistency(sd in any_slope_data()) {
            let mu = pushforward_slope(&sd);
            let lhs = &mu * int(sd.p().get());
            prop_assert_eq!(lhs, ratio(i64::from(sd.p().get()) - 1, 2) * sd.kh() + sd.mu_w());
            prop_assert_eq!(pushforward_c1(&sd) / Rational::from_integer(sd.pushforward_rank()), mu);
        }

        #[test]
        fn forms_agree_for_any_profile(n in 1usize..4, q in prop::sample::select(vec![2u64, 3, 5]),
                                       r in prop::collection::vec(0u64..9, 0..12)) {
            let q = p(q);
            let top = top_degree(n, q) as usize;
            let r: Vec<u64> = r.into_iter().take(top + 1).collect();
            let c = weight_sum_check(n, q, &RankProfile::new(r), ProfileMode::General { connection: false });
            prop_assert!(c.forms_agree());
        }

        #[test]
        fn mirror_bound_gives_nonnegative_gap(
            (n, q, r) in prop::sample::select(vec![(1usize, 5u64), (2, 3), (3, 2), (2, 5), (3, 3)])
                .prop_flat_map(|(n, q)| mirror_profile(n, q)),
            kh in 0i64..10,
        ) {
            let profile = RankProfile::new(r);
            let c = weight_sum_check(n, q, &profile, ProfileMode::General { connection: false });
            prop_assert!(c.hypotheses_hold());
            prop_assert!(c.nonnegative());
            let total = profile.total();
            prop_assume!(total > 0);
            let sd = SlopeData::from_mu(n, q, 1, ratio(0, 1), ratio(kh, 1)).unwrap();
            let gap = gap_lower_bound(&sd, &profile, &InstabilityInput::zeros(profile.ranks().len()), total).unwrap();
            prop_assert!(!gap.is_negative());
        }

        #[test]
        fn curve_gap_is_the_n1_specialization(
            q in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
            g in 0u64..6,
            raw in prop::collection::vec(0u64..7, 1..11),
        ) {
            let q = p(q);
            let mut r: Vec<u64> = raw.into_iter().take(q.get() as usize).collect();
            r.sort_unstable_by(|a, b| b.cmp(a));
            let profile = RankProfile::new(r);
            let total = profile.total();
            prop_assume!(total > 0);
            let sd = SlopeData::curve(q, g, 1, ratio(0, 1)).unwrap();
            let z = InstabilityInput::zeros(q.get() as usize);
            prop_assert_eq!(
                curve_gap(g, q, &profile, total).unwrap(),
                gap_lower_bound(&sd, &profile, &z, total).unwrap()
            );
        }

        #[test]
        fn zero_gap_forces_full_symmetric_profile(
            (n, q, r) in prop::sample::select(vec![(1usize, 5u64), (2, 3), (3, 2), (2, 2)])
                .prop_flat_map(|(n, q)| mirror_profile(n, q)),
        ) {
            let profile = RankProfile::new(r);
            let mode = ProfileMode::General { connection: true };
            prop_assume!(profile.validate(n, q, None, mode).is_empty());
            let total = profile.total();
            prop_assume!(total > 0);
            let sd = SlopeData::from_mu(n, q, 1, ratio(0, 1), ratio(1, 1)).unwrap();
            let d = equality_diagnosis(&sd, &profile, &InstabilityInput::zeros(profile.ranks().len()), total).unwrap();
            prop_assert!(d.consistent());
        }
    }
}
