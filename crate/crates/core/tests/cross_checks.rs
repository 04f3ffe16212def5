//! Identities tying the modules together: the same dimension computed from
//! the Koszul strand, the tensor embedding, the filtration and the truncated
//! algebra.

use frobenius_core::filtration::{nabla_power, quotient_dims};
use frobenius_core::monomial_box::{enumerate_box, leng_matching, MonomialBox};
use frobenius_core::slopes::{gap_lower_bound, ratio, InstabilityInput, RankProfile, SlopeData};
use frobenius_core::t_rep::{sym_to_t_matrix, t_rank, verify_koszul_exact};
use frobenius_core::trunc_algebra::{omega_pairing_matrix, top_degree, RGrade};
use frobenius_core::Prime;
use proptest::prelude::*;

const GRID: [(usize, u64); 7] = [(1, 5), (1, 7), (2, 2), (2, 3), (2, 5), (3, 2), (3, 3)];

#[test]
fn one_dimension_five_ways() {
    for (n, p) in GRID {
        let p = Prime::new(p).unwrap();
        let quotients = quotient_dims(n, p);
        for l in 0..=top_degree(n, p) {
            let t = t_rank(n, p, l) as usize;
            assert_eq!(verify_koszul_exact(n, p, l).cokernel, t);
            assert_eq!(sym_to_t_matrix(n, p, l).unwrap().rank(), t);
            assert_eq!(nabla_power(n, p, l).unwrap().rank(), t);
            assert_eq!(quotients[l as usize], t);
            assert_eq!(RGrade::new(n, p, l).dim(), t);
        }
    }
}

/// The truncated algebra grades are boxes with all caps `p − 1`, so the
/// matching lemma applies to them; the pairing is the other half of the
/// same duality.
#[test]
fn grades_are_boxes_and_pair_with_their_mirror() {
    for (n, p) in GRID {
        let q = Prime::new(p).unwrap();
        let caps = vec![q.get() - 1; n];
        let top = top_degree(n, q);
        for l in 0..=top {
            assert_eq!(
                RGrade::new(n, q, l).basis(),
                enumerate_box(&caps, l).as_slice()
            );
            let m = omega_pairing_matrix(n, q, l).unwrap();
            assert_eq!(
                (m.rows(), m.cols()),
                (RGrade::new(n, q, l).dim(), RGrade::new(n, q, top - l).dim())
            );
            if 2 * l <= top {
                let matching = leng_matching(&caps, l).unwrap();
                assert_eq!(matching.target, MonomialBox::new(caps.clone(), top - l));
            }
        }
    }
}

#[test]
fn full_profile_of_any_rank_has_zero_gap() {
    for (n, p) in GRID {
        let p = Prime::new(p).unwrap();
        for rk in 1..4 {
            let sd = SlopeData::from_mu(n, p, rk, ratio(1, 3), ratio(7, 2)).unwrap();
            let full = RankProfile::full(n, p, rk);
            let total = full.total();
            assert_eq!(
                u128::from(total),
                u128::from(rk) * u128::from(p.get()).pow(n as u32)
            );
            let gap = gap_lower_bound(
                &sd,
                &full,
                &InstabilityInput::zeros(full.ranks().len()),
                total,
            )
            .unwrap();
            assert_eq!(gap, ratio(0, 1));
        }
    }
}

proptest! {
    /// Lowering `rₗ` at the top end of a full profile only increases the gap.
    #[test]
    fn trimming_the_top_raises_the_gap(idx in 0usize..GRID.len(), cut in 1usize..6) {
        let (n, p) = GRID[idx];
        let p = Prime::new(p).unwrap();
        let sd = SlopeData::from_mu(n, p, 1, ratio(0, 1), ratio(1, 1)).unwrap();
        let full = RankProfile::full(n, p, 1);
        let keep = full.ranks().len().saturating_sub(cut).max(1);
        let trimmed = RankProfile::new(full.ranks()[..keep].to_vec());
        let z = InstabilityInput::zeros(full.ranks().len());
        let gap = gap_lower_bound(&sd, &trimmed, &z, trimmed.total()).unwrap();
        prop_assert!(gap >= ratio(0, 1));
    }
}
