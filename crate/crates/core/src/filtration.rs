//! Local model of the canonical filtration `V₀ ⊃ V₁ ⊃ ⋯` of `F*(F_*W)`.
//!
//! Locally `F*F_*𝒪 = A ⊗_{Aᵖ} A` and the ideals `I_ℓ` are free with basis the
//! α-monomials `α^k = α₁^{k₁}⋯αₙ^{kₙ}` of total degree `≥ ℓ`, where
//! `αᵢ = xᵢ⊗1 − 1⊗xᵢ` and `αᵢᵖ = 0`. The canonical connection acts by
//!
//! `∇(α^k) = −Σᵢ kᵢ · α^{k−eᵢ} ⊗ dxᵢ`,
//!
//! so the graded pieces `I_ℓ/I_{ℓ+1}` are spanned by the degree-ℓ α-monomials
//! and everything reduces to linear algebra over 𝔽ₚ. A bundle `W` of rank `r`
//! contributes `r` copies of this picture; only rank one is modelled.
//!
//! Tensor slots `dx_{i₁} ⊗ ⋯ ⊗ dx_{i_ℓ}` are recorded left to right in the
//! order the ∇'s are applied.

use alloc::vec;
use alloc::vec::Vec;

use crate::fp::{Fp, FpMatrix, Prime};
use crate::monomial_box::MultiIndex;
use crate::t_rep::tensor_dim;
use crate::trunc_algebra::{top_degree, truncated_monomials, RGrade};
use crate::{Error, Result};

/// Exponents of an α-monomial; every entry is at most `p − 1`.
pub type AlphaMonomial = MultiIndex;

/// One term `coeff · α^mono ⊗ dx_direction` of `∇(α^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NablaTerm {
    pub coeff: Fp,
    pub mono: AlphaMonomial,
    pub direction: usize,
}

/// Free basis of `I_ℓ`: all α-monomials of degree `ℓ..=n(p−1)`, by degree
/// then lexicographically.
pub fn alpha_basis(n: usize, p: Prime, degree: u32) -> Vec<AlphaMonomial> {
    (degree..=top_degree(n, p))
        .flat_map(|d| truncated_monomials(n, p, d))
        .collect()
}

/// `∇(α^k)`, with zero terms dropped. `α^k` itself is zero if some `kᵢ ≥ p`.
pub fn nabla(mono: &AlphaMonomial, p: Prime) -> Vec<NablaTerm> {
    if mono.exponents().iter().any(|&k| k >= p.get()) {
        return Vec::new();
    }
    let n = mono.len();
    (0..n)
        .filter(|&i| mono.get(i) > 0)
        .map(|i| NablaTerm {
            coeff: Fp::new(-i64::from(mono.get(i)), p),
            mono: mono.checked_sub(&MultiIndex::unit(n, i)).expect("kᵢ > 0"),
            direction: i,
        })
        .collect()
}

/// The induced map `I_ℓ/I_{ℓ+1} → (I_{ℓ−1}/I_ℓ) ⊗ Ω¹`.
///
/// Rows are the degree-ℓ α-monomials; column `i·d + j` is the `j`-th
/// degree-(ℓ−1) monomial in the `dxᵢ` slot, where `d = dim I_{ℓ−1}/I_ℓ`.
/// Injectivity means full row rank.
pub fn graded_nabla_matrix(n: usize, p: Prime, degree: u32) -> Result<FpMatrix> {
    let top = top_degree(n, p);
    if degree == 0 || degree > top {
        return Err(Error::GradeOutOfRange {
            grade: degree,
            min: 1,
            max: top,
        });
    }
    let src = RGrade::new(n, p, degree);
    let tgt = RGrade::new(n, p, degree - 1);
    let d = tgt.dim();
    let mut m = FpMatrix::zeros(p, src.dim(), n * d);
    for (r, k) in src.basis().iter().enumerate() {
        for term in nabla(k, p) {
            let j = tgt
                .index_of(&term.mono)
                .expect("lower monomial stays capped");
            m.set(r, term.direction * d + j, term.coeff.value());
        }
    }
    Ok(m)
}

/// `∇^ℓ: I_ℓ/I_{ℓ+1} → (Ω¹)^{⊗ℓ}` obtained by applying ∇ ℓ times.
///
/// Rows are the degree-ℓ α-monomials; columns are tensor words in
/// lexicographic order.
pub fn nabla_power(n: usize, p: Prime, degree: u32) -> Result<FpMatrix> {
    let top = top_degree(n, p);
    if degree > top {
        return Err(Error::GradeOutOfRange {
            grade: degree,
            min: 0,
            max: top,
        });
    }
    let monomials = truncated_monomials(n, p, degree);
    let mut m = FpMatrix::zeros(p, monomials.len(), tensor_dim(n, degree)?);
    for (r, k) in monomials.iter().enumerate() {
        let row = m.row_mut(r);
        for_each_nabla_word(k, p, |i, c| row[i] = p.add(row[i], c));
    }
    Ok(m)
}

/// One row of [`nabla_power`] as `(word index, value)` pairs in increasing
/// index order, without materialising the `n^ℓ` columns.
pub fn nabla_power_sparse(mono: &AlphaMonomial, p: Prime) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for_each_nabla_word(mono, p, |i, c| {
        if c != 0 {
            out.push((i, c));
        }
    });
    out
}

fn for_each_nabla_word(mono: &AlphaMonomial, p: Prime, mut visit: impl FnMut(usize, u32)) {
    let mut exps = mono.exponents().to_vec();
    let degree = mono.degree();
    descend(p, &mut exps, degree, 1 % p.get(), 0, &mut visit);
}

fn descend(
    p: Prime,
    exps: &mut [u32],
    left: u32,
    coeff: u32,
    prefix: usize,
    visit: &mut impl FnMut(usize, u32),
) {
    if left == 0 {
        visit(prefix, coeff);
        return;
    }
    let n = exps.len();
    for i in 0..n {
        let k = exps[i];
        if k == 0 {
            continue;
        }
        let c = p.mul(coeff, p.neg(k % p.get()));
        exps[i] -= 1;
        descend(p, exps, left - 1, c, prefix * n + i, visit);
        exps[i] += 1;
    }
}

/// Ranks `dim I_ℓ` for `ℓ = 0..=n(p−1)+1`; the last entry is always 0.
pub fn filtration_ranks(n: usize, p: Prime) -> Vec<usize> {
    (0..=top_degree(n, p) + 1)
        .map(|l| alpha_basis(n, p, l).len())
        .collect()
}

/// The curve case `n = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveReport {
    pub p: Prime,
    /// The 1×1 entries `−ℓ mod p` of the graded maps, `ℓ = 1..p−1`.
    pub entries: Vec<u32>,
    /// `dim I_ℓ` for `ℓ = 0..=p`.
    pub ranks: Vec<usize>,
    pub all_isomorphisms: bool,
    /// The filtration stops exactly at `I_p = 0`.
    pub length_is_p: bool,
}

impl CurveReport {
    pub fn holds(&self) -> bool {
        self.all_isomorphisms && self.length_is_p
    }
}

pub fn curve_report(p: Prime) -> CurveReport {
    let mut entries = Vec::new();
    let mut all_isomorphisms = true;
    for l in 1..p.get() {
        let m = graded_nabla_matrix(1, p, l).expect("1 ≤ ℓ ≤ p−1");
        all_isomorphisms &= m.rows() == 1 && m.cols() == 1 && m.rank() == 1;
        entries.push(m.get(0, 0));
    }
    let ranks = filtration_ranks(1, p);
    let length_is_p = ranks.len() == p.get() as usize + 1
        && ranks[p.get() as usize] == 0
        && ranks[p.get() as usize - 1] > 0;
    CurveReport {
        p,
        entries,
        ranks,
        all_isomorphisms,
        length_is_p,
    }
}

/// `dim I_ℓ − dim I_{ℓ+1}` for each `ℓ = 0..=n(p−1)`.
pub fn quotient_dims(n: usize, p: Prime) -> Vec<usize> {
    let ranks = filtration_ranks(n, p);
    ranks.windows(2).map(|w| w[0] - w[1]).collect()
}

/// Sign `(−1)^ℓ` as an element of 𝔽ₚ.
pub fn sign_power(degree: u32, p: Prime) -> u32 {
    if degree % 2 == 0 {
        1 % p.get()
    } else {
        p.neg(1 % p.get())
    }
}

/// Builds a direction-slot vector `[0; n·d]` with `value` at slot `(i, j)`.
/// Test helper for hand-written expectations.
#[doc(hidden)]
pub fn slot_vector(n: usize, d: usize, i: usize, j: usize, value: u32) -> Vec<u32> {
    let mut v = vec![0; n * d];
    v[i * d + j] = value;
    v
}
