//! The graded algebra `R = K[y₁,…,yₙ]/(y₁ᵖ,…,yₙᵖ)` and the algebra `D` of
//! truncated partial derivations acting on it.
//!
//! `R^ℓ` has the monomials `y^k` with `kᵢ ≤ p−1`, `Σkᵢ = ℓ` as basis, listed
//! in lexicographic order of `k`. `D_ℓ` is spanned by `t^e = ∂^{e₁}_{y₁}⋯∂^{eₙ}_{yₙ}`
//! with the same exponent constraints (`∂ᵢᵖ` acts as zero).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::combinat::falling_factorial_mod;
use crate::fp::{Fp, FpMatrix, Prime, SpanBuilder};
use crate::monomial_box::{enumerate_box, MultiIndex};
use crate::{Error, Result};

/// Top degree `n(p−1)` of `R` and `D`.
pub fn top_degree(n: usize, p: Prime) -> u32 {
    n as u32 * (p.get() - 1)
}

/// Basis monomials of `R^ℓ` (equivalently of `D_ℓ`).
pub fn truncated_monomials(n: usize, p: Prime, degree: u32) -> Vec<MultiIndex> {
    enumerate_box(&vec![p.get() - 1; n], degree)
}

/// One graded piece `R^ℓ` with a lookup table from monomial to coordinate.
#[derive(Debug, Clone)]
pub struct RGrade {
    n: usize,
    p: Prime,
    grade: u32,
    basis: Vec<MultiIndex>,
    index: BTreeMap<MultiIndex, usize>,
}

impl RGrade {
    pub fn new(n: usize, p: Prime, grade: u32) -> Self {
        let basis = truncated_monomials(n, p, grade);
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        RGrade {
            n,
            p,
            grade,
            basis,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn grade(&self) -> u32 {
        self.grade
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn index_of(&self, m: &MultiIndex) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// A monomial `t^e` of `D`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiffMonomial {
    orders: MultiIndex,
}

impl DiffMonomial {
    pub fn new(orders: MultiIndex) -> Self {
        DiffMonomial { orders }
    }

    /// The single derivation `∂_{y_i}` in `n` variables.
    pub fn partial(n: usize, i: usize) -> Self {
        DiffMonomial {
            orders: MultiIndex::unit(n, i),
        }
    }

    pub fn orders(&self) -> &MultiIndex {
        &self.orders
    }

    pub fn degree(&self) -> u32 {
        self.orders.degree()
    }
}

/// `t^e · y^k = Πᵢ kᵢ!/(kᵢ−eᵢ)! · y^{k−e}`, or `None` when the result is zero.
pub fn apply_diff(op: &DiffMonomial, mono: &MultiIndex, p: Prime) -> Option<(Fp, MultiIndex)> {
    let rest = mono.checked_sub(op.orders())?;
    let mut coeff = 1 % p.get();
    for (&k, &e) in mono.exponents().iter().zip(op.orders().exponents()) {
        coeff = p.mul(coeff, falling_factorial_mod(k, e, p));
    }
    (coeff != 0).then(|| (Fp::new(i64::from(coeff), p), rest))
}

/// Matrix of `t^e: R^ℓ → R^{ℓ−|e|}` (rows indexed by `R^ℓ`).
pub fn operator_matrix(n: usize, p: Prime, op: &DiffMonomial, grade: u32) -> FpMatrix {
    let src = RGrade::new(n, p, grade);
    let tgt = RGrade::new(n, p, grade.saturating_sub(op.degree()));
    let cols = if op.degree() > grade { 0 } else { tgt.dim() };
    let mut m = FpMatrix::zeros(p, src.dim(), cols);
    if cols == 0 {
        return m;
    }
    for (r, mono) in src.basis().iter().enumerate() {
        if let Some((c, image)) = apply_diff(op, mono, p) {
            let col = tgt
                .index_of(&image)
                .expect("image stays inside the truncated box");
            m.set(r, col, c.value());
        }
    }
    m
}

/// Matrix of `∂_{y_i}: R^ℓ → R^{ℓ−1}`.
pub fn derivation_matrix(n: usize, p: Prime, i: usize, grade: u32) -> FpMatrix {
    operator_matrix(n, p, &DiffMonomial::partial(n, i), grade)
}

/// The pairing `D_ℓ → R^{n(p−1)−ℓ}`, `d ↦ d·ω` with `ω = Π y_i^{p−1}`.
pub fn omega_pairing_matrix(n: usize, p: Prime, grade: u32) -> Result<FpMatrix> {
    let top = top_degree(n, p);
    if grade > top {
        return Err(Error::GradeOutOfRange {
            grade,
            min: 0,
            max: top,
        });
    }
    let ops = truncated_monomials(n, p, grade);
    let tgt = RGrade::new(n, p, top - grade);
    let omega = MultiIndex::new(vec![p.get() - 1; n]);
    let mut m = FpMatrix::zeros(p, ops.len(), tgt.dim());
    for (r, e) in ops.into_iter().enumerate() {
        if let Some((c, image)) = apply_diff(&DiffMonomial::new(e), &omega, p) {
            let col = tgt
                .index_of(&image)
                .expect("ω minus a capped exponent is capped");
            m.set(r, col, c.value());
        }
    }
    Ok(m)
}

/// A subspace `V ⊂ R^ℓ`, stored as the reduced row-echelon basis of its
/// coordinate rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSubspace {
    n: usize,
    grade: u32,
    basis: FpMatrix,
}

impl GradedSubspace {
    /// The span of the given rows, written in the monomial basis of `R^ℓ`.
    pub fn new(n: usize, grade: u32, spanning: &FpMatrix) -> Result<Self> {
        let p = spanning.modulus();
        let top = top_degree(n, p);
        if grade > top {
            return Err(Error::GradeOutOfRange {
                grade,
                min: 0,
                max: top,
            });
        }
        let dim = RGrade::new(n, p, grade).dim();
        if spanning.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: spanning.cols(),
            });
        }
        Ok(GradedSubspace {
            n,
            grade,
            basis: spanning.row_space_basis(),
        })
    }

    pub fn zero(n: usize, p: Prime, grade: u32) -> Result<Self> {
        let dim = RGrade::new(n, p, grade).dim();
        Self::new(n, grade, &FpMatrix::zeros(p, 0, dim))
    }

    /// Span of the listed basis monomials of `R^ℓ`.
    pub fn coordinate(n: usize, p: Prime, grade: u32, indices: &[usize]) -> Result<Self> {
        let dim = RGrade::new(n, p, grade).dim();
        let mut m = FpMatrix::zeros(p, indices.len(), dim);
        for (r, &i) in indices.iter().enumerate() {
            if i >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: i + 1,
                });
            }
            m.set(r, i, 1);
        }
        Self::new(n, grade, &m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Prime {
        self.basis.modulus()
    }

    pub fn grade(&self) -> u32 {
        self.grade
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }
}

/// `dim 𝕃(D_{2ℓ−n(p−1)} · V)` for `V ⊂ R^ℓ` with `n(p−1)/2 ≤ ℓ ≤ n(p−1)`.
pub fn spanned_image_dim(v: &GradedSubspace) -> Result<usize> {
    let (n, p, grade) = (v.n(), v.modulus(), v.grade());
    let top = top_degree(n, p);
    let min = top.div_ceil(2);
    if grade < min || grade > top {
        return Err(Error::GradeOutOfRange {
            grade,
            min,
            max: top,
        });
    }
    let op_degree = 2 * grade - top;
    let src = RGrade::new(n, p, grade);
    let tgt = RGrade::new(n, p, top - grade);
    let mut span = SpanBuilder::new(p, tgt.dim());
    let mut image = vec![0u32; tgt.dim()];
    for e in truncated_monomials(n, p, op_degree) {
        let op = DiffMonomial::new(e);
        // the action of this operator, precomputed per source monomial
        let action: Vec<Option<(u32, usize)>> = src
            .basis()
            .iter()
            .map(|m| {
                apply_diff(&op, m, p)
                    .map(|(c, img)| (c.value(), tgt.index_of(&img).expect("capped image")))
            })
            .collect();
        for r in 0..v.dim() {
            image.iter_mut().for_each(|x| *x = 0);
            for (&coord, act) in v.basis().row(r).iter().zip(&action) {
                if let (true, Some((c, col))) = (coord != 0, act) {
                    image[*col] = p.add(image[*col], p.mul(coord, *c));
                }
            }
            span.push(&image)?;
            if span.is_full() {
                return Ok(span.dim());
            }
        }
    }
    Ok(span.dim())
}

/// Outcome of comparing `dim V` with `dim 𝕃(D_{2ℓ−n(p−1)} · V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitDimCheck {
    Holds {
        dim: usize,
        image_dim: usize,
    },
    /// The inequality failed; `witness` is the offending subspace.
    Violated {
        dim: usize,
        image_dim: usize,
        witness: GradedSubspace,
    },
}

impl OrbitDimCheck {
    pub fn holds(&self) -> bool {
        matches!(self, OrbitDimCheck::Holds { .. })
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            OrbitDimCheck::Holds { dim, image_dim }
            | OrbitDimCheck::Violated { dim, image_dim, .. } => (*dim, *image_dim),
        }
    }
}

/// Checks `dim V ≤ dim 𝕃(D_{2ℓ−n(p−1)} · V)`.
pub fn check_orbit_dimension(v: &GradedSubspace) -> Result<OrbitDimCheck> {
    let image_dim = spanned_image_dim(v)?;
    let dim = v.dim();
    Ok(if dim <= image_dim {
        OrbitDimCheck::Holds { dim, image_dim }
    } else {
        OrbitDimCheck::Violated {
            dim,
            image_dim,
            witness: v.clone(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::truncated_count;
    use proptest::prelude::*;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    fn mi<const N: usize>(v: [u32; N]) -> MultiIndex {
        MultiIndex::from(v)
    }

    #[test]
    fn apply_diff_examples() {
        let d1 = DiffMonomial::partial(2, 0);
        let (c, m) = apply_diff(&d1, &mi([2, 1]), p(3)).unwrap();
        assert_eq!((c.value(), m), (2, mi([1, 1])));

        let d2 = DiffMonomial::new(mi([2]));
        let (c, m) = apply_diff(&d2, &mi([2]), p(3)).unwrap();
        assert_eq!((c.value(), m), (2, mi([0])));

        assert!(apply_diff(&DiffMonomial::partial(2, 1), &mi([1, 0]), p(3)).is_none());
    }

    #[test]
    fn omega_pairing_examples() {
        // t · y² = 2y
        let m = omega_pairing_matrix(1, p(3), 1).unwrap();
        assert_eq!(m, FpMatrix::from_rows(p(3), 1, &[[2]]).unwrap());
        let m = omega_pairing_matrix(2, p(2), 2).unwrap();
        assert_eq!(m, FpMatrix::from_rows(p(2), 1, &[[1]]).unwrap());
        // 4! ≡ −1 mod 5
        let m = omega_pairing_matrix(1, p(5), 4).unwrap();
        assert_eq!(m.get(0, 0), 4);
        assert!(omega_pairing_matrix(1, p(5), 5).is_err());
    }

    #[test]
    fn omega_pairing_invertible_small() {
        for (n, q) in [
            (1, 2),
            (1, 3),
            (1, 7),
            (2, 2),
            (2, 3),
            (2, 5),
            (3, 2),
            (3, 3),
            (4, 2),
        ] {
            let q = p(q);
            for l in 0..=top_degree(n, q) {
                let m = omega_pairing_matrix(n, q, l).unwrap();
                assert_eq!(m.rows(), m.cols());
                assert_eq!(m.rank(), m.rows(), "n={n} p={q} ℓ={l}");
            }
        }
    }

    #[test]
    fn spanned_image_examples() {
        // n=1, p=3, V = R²: t²·y² = 2
        let v = GradedSubspace::coordinate(1, p(3), 2, &[0]).unwrap();
        assert_eq!(spanned_image_dim(&v).unwrap(), 1);

        // middle grade, D₀ = K
        let v = GradedSubspace::coordinate(2, p(3), 2, &[0, 2]).unwrap();
        assert_eq!(spanned_image_dim(&v).unwrap(), 2);

        // n=2, p=2, V = span{y₁y₂}
        let v = GradedSubspace::coordinate(2, p(2), 2, &[0]).unwrap();
        assert_eq!(spanned_image_dim(&v).unwrap(), 1);

        // n=2, p=3, ℓ=3, V = span{y₁²y₂}: basis of R³ is [(1,2),(2,1)]
        let v = GradedSubspace::coordinate(2, p(3), 3, &[1]).unwrap();
        let check = check_orbit_dimension(&v).unwrap();
        assert!(check.holds());
        assert!(check.dims().1 >= 1);
    }

    #[test]
    fn zero_subspace_passes() {
        let v = GradedSubspace::zero(2, p(3), 3).unwrap();
        assert_eq!(
            check_orbit_dimension(&v).unwrap(),
            OrbitDimCheck::Holds {
                dim: 0,
                image_dim: 0
            }
        );
    }

    #[test]
    fn grade_below_middle_is_rejected() {
        let v = GradedSubspace::coordinate(2, p(3), 1, &[0]).unwrap();
        assert_eq!(
            spanned_image_dim(&v),
            Err(Error::GradeOutOfRange {
                grade: 1,
                min: 2,
                max: 4
            })
        );
        // odd top degree: ℓ must be at least ⌈n(p−1)/2⌉
        let v = GradedSubspace::coordinate(1, p(2), 0, &[0]).unwrap();
        assert!(spanned_image_dim(&v).is_err());
    }

    #[test]
    fn every_line_at_top_grade_passes() {
        for (n, q) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
            let q = p(q);
            let top = top_degree(n, q);
            let v = GradedSubspace::coordinate(n, q, top, &[0]).unwrap();
            assert_eq!(spanned_image_dim(&v).unwrap(), 1);
        }
    }

    #[test]
    fn graded_dims_match_inclusion_exclusion() {
        for n in 1..=4usize {
            for q in [2u64, 3, 5] {
                let q = p(q);
                for l in 0..=top_degree(n, q) + 1 {
                    assert_eq!(
                        RGrade::new(n, q, l).dim() as u128,
                        truncated_count(n as u32, q.get(), l)
                    );
                }
            }
        }
    }

    #[test]
    fn graded_dims_are_palindromic() {
        for (n, q) in [(1, 5), (2, 3), (3, 3), (4, 2)] {
            let q = p(q);
            let top = top_degree(n, q);
            for l in 0..=top {
                assert_eq!(RGrade::new(n, q, l).dim(), RGrade::new(n, q, top - l).dim());
            }
        }
    }

    #[test]
    fn partial_derivatives_commute() {
        for (n, q) in [(2, 3), (3, 2), (3, 3), (2, 5)] {
            let q = p(q);
            for l in 2..=top_degree(n, q) {
                for i in 0..n {
                    for j in 0..n {
                        let ij = derivation_matrix(n, q, i, l)
                            .mul(&derivation_matrix(n, q, j, l - 1))
                            .unwrap();
                        let ji = derivation_matrix(n, q, j, l)
                            .mul(&derivation_matrix(n, q, i, l - 1))
                            .unwrap();
                        assert_eq!(ij, ji);
                    }
                }
            }
        }
    }

    proptest! {
        /// Applying an operator one derivative at a time gives the closed-form
        /// falling factorial coefficient.
        #[test]
        fn stepwise_derivatives_match_closed_form(
            k in prop::collection::vec(0u32..5, 1..4),
            e_frac in prop::collection::vec(0u32..6, 3),
        ) {
            let q = p(5);
            let n = k.len();
            let e: Vec<u32> = (0..n).map(|i| e_frac[i] % (k[i] + 2)).collect();
            let mono = MultiIndex::new(k.clone());
            let closed = apply_diff(&DiffMonomial::new(MultiIndex::new(e.clone())), &mono, q);

            let mut coeff = 1u32;
            let mut current = Some(mono);
            'outer: for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    let Some(m) = current.take() else { break 'outer };
                    match apply_diff(&DiffMonomial::partial(n, i), &m, q) {
                        Some((c, next)) => {
                            coeff = q.mul(coeff, c.value());
                            current = Some(next);
                        }
                        None => break 'outer,
                    }
                }
            }
            match (closed, current) {
                (Some((c, m)), Some(step_m)) => {
                    prop_assert_eq!(c.value(), coeff);
                    prop_assert_eq!(m, step_m);
                }
                (None, None) => {}
                (a, b) => prop_assert!(false, "closed {:?} vs stepwise {:?}", a, b),
            }
        }
    }
}
