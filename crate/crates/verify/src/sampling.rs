//! Seeded sampling of subspaces and rank profiles.
//!
//! Every stream is ChaCha8 seeded with `seed_from_u64(seed)` and then moved
//! to a stream number derived from the case, so each case's draws depend
//! only on `(seed, case)` and not on which other cases ran.

use frobenius_core::slopes::RankProfile;
use frobenius_core::trunc_algebra::{top_degree, GradedSubspace, RGrade};
use frobenius_core::{FpMatrix, Prime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream tags keep the suites' draws apart.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub enum Stream {
    Subspace = 1,
    MirrorProfile = 2,
    CurveProfile = 3,
}

pub fn case_rng(seed: u64, stream: Stream, n: usize, p: Prime, grade: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(
        (stream as u64) << 56 | (n as u64) << 40 | u64::from(p.get()) << 16 | u64::from(grade),
    );
    rng
}

/// The row space of `k` uniform vectors in `R^grade`, `k` uniform in
/// `1..=dim`.
pub fn random_subspace(rng: &mut impl Rng, n: usize, p: Prime, grade: u32) -> GradedSubspace {
    let dim = RGrade::new(n, p, grade).dim();
    let k = rng.random_range(1..=dim.max(1));
    let rows: Vec<Vec<u32>> = (0..k)
        .map(|_| (0..dim).map(|_| rng.random_range(0..p.get())).collect())
        .collect();
    let spanning = FpMatrix::from_reduced_rows(p, dim, &rows).expect("entries reduced");
    GradedSubspace::new(n, grade, &spanning).expect("matching grade")
}

/// A profile of length `m + 1 ≤ N + 1` with `rₗ ≤ r_{N−ℓ}` for `ℓ > N/2`.
///
/// Entries are drawn in `0..=max_rank` and then clipped by their mirror.
pub fn mirror_profile(rng: &mut impl Rng, n: usize, p: Prime, max_rank: u64) -> RankProfile {
    let top = top_degree(n, p) as usize;
    let m = rng.random_range(0..=top);
    let mut r: Vec<u64> = (0..=m).map(|_| rng.random_range(0..=max_rank)).collect();
    for l in 0..=m {
        if 2 * l > top {
            r[l] = r[l].min(r[top - l]);
        }
    }
    RankProfile::new(r)
}

/// A monotone non-increasing curve profile of length at most `p`, with a
/// positive first entry.
pub fn curve_profile(rng: &mut impl Rng, p: Prime, max_rank: u64) -> RankProfile {
    let len = rng.random_range(1..=p.get() as usize);
    let mut r: Vec<u64> = (0..len).map(|_| rng.random_range(0..=max_rank)).collect();
    r.sort_unstable_by(|a, b| b.cmp(a));
    r[0] = r[0].max(1);
    RankProfile::new(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use frobenius_core::slopes::ProfileMode;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u32> = (0..8)
            .map(|_| case_rng(7, Stream::Subspace, 2, p(3), 2).random())
            .collect();
        let b: Vec<u32> = (0..8)
            .map(|_| case_rng(7, Stream::Subspace, 2, p(3), 2).random())
            .collect();
        assert_eq!(a, b);
        let mut x = case_rng(7, Stream::Subspace, 2, p(3), 2);
        let mut y = case_rng(7, Stream::Subspace, 2, p(3), 3);
        assert_ne!(x.random::<u64>(), y.random::<u64>());
    }

    #[test]
    fn samples_satisfy_their_hypotheses() {
        let mut rng = case_rng(1, Stream::MirrorProfile, 3, p(3), 0);
        for _ in 0..500 {
            let prof = mirror_profile(&mut rng, 3, p(3), 9);
            assert!(prof
                .validate(3, p(3), None, ProfileMode::General { connection: false })
                .is_empty());
            let c = curve_profile(&mut rng, p(5), 4);
            assert!(c.validate(1, p(5), None, ProfileMode::Curve).is_empty());
            assert!(c.total() > 0);
        }
        let v = random_subspace(&mut rng, 2, p(3), 2);
        assert!(v.dim() >= 1 && v.dim() <= 3);
    }
}
