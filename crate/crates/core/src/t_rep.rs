//! Truncated symmetric powers `Tˡ(V) ⊂ V^{⊗ℓ}` for `V = Kⁿ` over 𝔽ₚ.
//!
//! `Tˡ(V)` is spanned by the symmetrizations
//! `v(k) = Σ_{σ ∈ S_ℓ} (e₁^{⊗k₁} ⊗ ⋯ ⊗ eₙ^{⊗kₙ})·σ`. Each tensor word of content
//! `k` appears `k₁!⋯kₙ!` times in that sum, so `v(k)` vanishes exactly when some
//! `kᵢ ≥ p`. The surjection `Sym^ℓ(V) → Tˡ(V)`, `e^k ↦ v(k)`, has kernel spanned
//! by the monomials divisible by some `eᵢᵖ`, and the Koszul complex of the
//! regular sequence `e₁ᵖ,…,eₙᵖ` resolves the quotient:
//!
//! `0 → Sym^{ℓ−qp} ⊗ Λ^q → ⋯ → Sym^{ℓ−p} ⊗ Λ¹ → Sym^ℓ → Tˡ → 0`
//!
//! with `φ(f ⊗ e_{k₁}∧⋯∧e_{k_q}) = Σᵢ (−1)^{i−1} e_{kᵢ}ᵖ f ⊗ e_{k₁}∧⋯ê_{kᵢ}⋯∧e_{k_q}`.
//! The exterior factor is Frobenius-twisted as a `GL(n)`-module; the twist
//! does not change bases or matrices, so it is not represented here.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::combinat::{factorial_mod, subsets, truncated_count};
use crate::fp::{FpMatrix, Prime};
use crate::monomial_box::{enumerate_box, MultiIndex};
use crate::trunc_algebra::truncated_monomials;
use crate::{Error, Result};

/// A basis word `e_{i₁} ⊗ ⋯ ⊗ e_{i_ℓ}` of `V^{⊗ℓ}`, letters stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorWord(Vec<u16>);

impl TensorWord {
    pub fn new(letters: Vec<u16>) -> Self {
        TensorWord(letters)
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    /// Letter multiplicities `(k₁,…,kₙ)`.
    pub fn content(&self, n: usize) -> MultiIndex {
        let mut k = vec![0u32; n];
        for &l in &self.0 {
            k[l as usize] += 1;
        }
        MultiIndex::new(k)
    }

    /// Position in the lexicographic enumeration of all words of this length.
    pub fn index(&self, n: usize) -> usize {
        self.0.iter().fold(0usize, |acc, &l| acc * n + l as usize)
    }

    pub fn from_index(mut index: usize, n: usize, len: u32) -> Self {
        let mut letters = vec![0u16; len as usize];
        for slot in letters.iter_mut().rev() {
            *slot = (index % n) as u16;
            index /= n;
        }
        TensorWord(letters)
    }
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", l + 1)?;
        }
        Ok(())
    }
}

/// `n^ℓ`, the dimension of `V^{⊗ℓ}`.
pub fn tensor_dim(n: usize, degree: u32) -> Result<usize> {
    n.checked_pow(degree)
        .filter(|&d| d <= isize::MAX as usize / 8)
        .ok_or(Error::TensorTooLarge { n, degree })
}

/// Calls `visit` with the index of every word of the given content, in
/// increasing order.
pub fn for_each_word_of_content(content: &[u32], mut visit: impl FnMut(usize)) {
    let mut remaining = content.to_vec();
    let len: u32 = content.iter().sum();
    words_rec(&mut remaining, len, 0, &mut visit);
}

fn words_rec(remaining: &mut [u32], left: u32, prefix: usize, visit: &mut impl FnMut(usize)) {
    if left == 0 {
        visit(prefix);
        return;
    }
    let n = remaining.len();
    for letter in 0..n {
        if remaining[letter] > 0 {
            remaining[letter] -= 1;
            words_rec(remaining, left - 1, prefix * n + letter, visit);
            remaining[letter] += 1;
        }
    }
}

/// Monomials of `Sym^ℓ(V)` in lexicographic order.
pub fn sym_basis(n: usize, degree: u32) -> Vec<MultiIndex> {
    enumerate_box(&vec![degree; n], degree)
}

/// Basis of `Tˡ(V)`: the images `v(k)` of monomials with every `kᵢ ≤ p−1`.
pub fn t_basis(n: usize, p: Prime, degree: u32) -> Vec<MultiIndex> {
    truncated_monomials(n, p, degree)
}

/// `dim Tˡ(V) = Σ_{q=0}^{⌊ℓ/p⌋} (−1)^q C(n,q) C(n+ℓ−qp−1, n−1)`.
pub fn t_rank(n: usize, p: Prime, degree: u32) -> u128 {
    truncated_count(n as u32, p.get(), degree)
}

/// `Πᵢ kᵢ! mod p`, the coefficient of each word of content `k` in `v(k)`.
pub fn symmetrization_coefficient(content: &MultiIndex, p: Prime) -> u32 {
    content
        .exponents()
        .iter()
        .fold(1 % p.get(), |acc, &k| p.mul(acc, factorial_mod(k, p)))
}

/// The coordinates of `v(k)` in the word basis of `V^{⊗ℓ}`.
pub fn v_vector(content: &MultiIndex, n: usize, degree: u32, p: Prime) -> Result<Vec<u32>> {
    if content.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: content.len(),
        });
    }
    if content.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: content.degree(),
        });
    }
    let mut row = vec![0u32; tensor_dim(n, degree)?];
    let c = symmetrization_coefficient(content, p);
    if c != 0 {
        for_each_word_of_content(content.exponents(), |i| row[i] = c);
    }
    Ok(row)
}

/// The nonzero coordinates of `v(k)` as `(word index, value)` pairs in
/// increasing index order; `n` is the arity of `k`.
pub fn v_vector_sparse(content: &MultiIndex, p: Prime) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let c = symmetrization_coefficient(content, p);
    if c != 0 {
        for_each_word_of_content(content.exponents(), |i| out.push((i, c)));
    }
    out
}

/// Matrix with row `v(k)` for each monomial `k` of the given list.
pub fn v_vector_matrix(
    monomials: &[MultiIndex],
    n: usize,
    degree: u32,
    p: Prime,
) -> Result<FpMatrix> {
    let mut m = FpMatrix::zeros(p, monomials.len(), tensor_dim(n, degree)?);
    for (r, k) in monomials.iter().enumerate() {
        if k.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: k.len(),
            });
        }
        if k.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: k.degree(),
            });
        }
        let c = symmetrization_coefficient(k, p);
        if c != 0 {
            let row = m.row_mut(r);
            for_each_word_of_content(k.exponents(), |i| row[i] = c);
        }
    }
    Ok(m)
}

/// The surjection `Sym^ℓ(V) → Tˡ(V) ⊂ V^{⊗ℓ}` with rows indexed by [`sym_basis`].
pub fn sym_to_t_matrix(n: usize, p: Prime, degree: u32) -> Result<FpMatrix> {
    v_vector_matrix(&sym_basis(n, degree), n, degree, p)
}

/// Dimension of `Tˡ(K²)` from the closed form for `GL(2)`:
/// `Sym^ℓ` below `p`, and `Sym^{2(p−1)−ℓ} ⊗ det^{ℓ−(p−1)}` from `p` on.
pub fn gl2_dim(p: Prime, degree: u32) -> Result<u32> {
    let q = p.get();
    let max = 2 * (q - 1);
    if degree > max {
        return Err(Error::GradeOutOfRange {
            grade: degree,
            min: 0,
            max,
        });
    }
    Ok(if degree < q {
        degree + 1
    } else {
        max - degree + 1
    })
}

/// One term `Sym^{ℓ−qp}(V) ⊗ Λ^q` of the Koszul resolution.
#[derive(Debug, Clone)]
pub struct KoszulTerm {
    pub q: u32,
    pub sym_degree: u32,
    pub sym: Vec<MultiIndex>,
    pub wedge: Vec<Vec<usize>>,
}

impl KoszulTerm {
    fn new(n: usize, p: Prime, degree: u32, q: u32) -> Self {
        let sym_degree = degree - q * p.get();
        KoszulTerm {
            q,
            sym_degree,
            sym: sym_basis(n, sym_degree),
            wedge: subsets(n, q as usize),
        }
    }

    pub fn dim(&self) -> usize {
        self.sym.len() * self.wedge.len()
    }

    /// Basis element `f ⊗ e_S` sits at `index(f) · |wedge| + index(S)`.
    fn basis(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<usize>)> {
        self.sym
            .iter()
            .flat_map(move |f| self.wedge.iter().map(move |s| (f, s)))
    }
}

/// The degree-ℓ strand of the Koszul complex of `e₁ᵖ,…,eₙᵖ` over `Sym(V)`.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    pub n: usize,
    pub p: Prime,
    pub degree: u32,
    /// `terms[q]` for `q = 0..=⌊ℓ/p⌋`; `terms[0] = Sym^ℓ`.
    pub terms: Vec<KoszulTerm>,
    /// `differentials[q−1]` is `φ_q: terms[q] → terms[q−1]`.
    pub differentials: Vec<FpMatrix>,
}

impl KoszulComplex {
    pub fn top(&self) -> u32 {
        self.terms.len() as u32 - 1
    }

    pub fn differential(&self, q: u32) -> Option<&FpMatrix> {
        q.checked_sub(1)
            .and_then(|i| self.differentials.get(i as usize))
    }
}

pub fn koszul_complex(n: usize, p: Prime, degree: u32) -> KoszulComplex {
    let top = degree / p.get();
    let terms: Vec<KoszulTerm> = (0..=top)
        .map(|q| KoszulTerm::new(n, p, degree, q))
        .collect();
    let differentials = (1..=top as usize)
        .map(|q| koszul_differential(n, p, &terms[q], &terms[q - 1]))
        .collect();
    KoszulComplex {
        n,
        p,
        degree,
        terms,
        differentials,
    }
}

fn koszul_differential(n: usize, p: Prime, src: &KoszulTerm, tgt: &KoszulTerm) -> FpMatrix {
    let sym_index: BTreeMap<&MultiIndex, usize> =
        tgt.sym.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let wedge_index: BTreeMap<&Vec<usize>, usize> =
        tgt.wedge.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = FpMatrix::zeros(p, src.dim(), tgt.dim());
    for (row, (f, subset)) in src.basis().enumerate() {
        for (i, &k) in subset.iter().enumerate() {
            let multiplied = f.add(&MultiIndex::unit(n, k).scale(p.get()));
            let mut rest = subset.clone();
            rest.remove(i);
            let col = sym_index[&multiplied] * tgt.wedge.len() + wedge_index[&rest];
            let sign = if i % 2 == 0 { 1 } else { p.neg(1) };
            m.set(row, col, p.add(m.get(row, col), sign));
        }
    }
    m
}

/// Where the exactness check of the Koszul complex failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KoszulFailure {
    /// `φ_{q} ∘ φ_{q+1} ≠ 0`.
    NonzeroComposite { q: u32 },
    /// `rank φ_q + rank φ_{q+1} ≠ dim K_q`.
    NotExact {
        q: u32,
        rank_out: usize,
        rank_in: usize,
        dim: usize,
    },
    /// The leftmost map is not injective.
    NotInjective { q: u32, rank: usize, dim: usize },
    /// `dim Sym^ℓ − rank φ₁ ≠ dim Tˡ`.
    CokernelMismatch { cokernel: usize, t_rank: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulReport {
    /// `dim K_q` for `q = 0..=top`.
    pub dims: Vec<usize>,
    /// `rank φ_q` for `q = 1..=top`.
    pub ranks: Vec<usize>,
    pub cokernel: usize,
    pub t_rank: u128,
    pub failure: Option<KoszulFailure>,
}

impl KoszulReport {
    pub fn is_exact(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that the degree-ℓ Koszul strand is a resolution of `Tˡ(V)`.
pub fn verify_koszul_exact(n: usize, p: Prime, degree: u32) -> KoszulReport {
    let cx = koszul_complex(n, p, degree);
    let top = cx.top();
    let dims: Vec<usize> = cx.terms.iter().map(KoszulTerm::dim).collect();
    let ranks: Vec<usize> = cx.differentials.iter().map(FpMatrix::rank).collect();
    let cokernel = dims[0] - ranks.first().copied().unwrap_or(0);
    let t = t_rank(n, p, degree);
    let mut failure = None;

    for q in 1..top {
        // φ_{q+1} then φ_q
        let composite = cx.differentials[q as usize]
            .mul(&cx.differentials[q as usize - 1])
            .expect("chain shapes");
        if !composite.is_zero() {
            failure = Some(KoszulFailure::NonzeroComposite { q });
            break;
        }
    }
    if failure.is_none() {
        for q in 1..=top {
            let rank_out = ranks[q as usize - 1];
            let rank_in = if q < top { ranks[q as usize] } else { 0 };
            let dim = dims[q as usize];
            if rank_out + rank_in != dim {
                failure = Some(if q == top {
                    KoszulFailure::NotInjective {
                        q,
                        rank: rank_out,
                        dim,
                    }
                } else {
                    KoszulFailure::NotExact {
                        q,
                        rank_out,
                        rank_in,
                        dim,
                    }
                });
                break;
            }
        }
    }
    if failure.is_none() && cokernel as u128 != t {
        failure = Some(KoszulFailure::CokernelMismatch {
            cokernel,
            t_rank: t,
        });
    }
    KoszulReport {
        dims,
        ranks,
        cokernel,
        t_rank: t,
        failure,
    }
}

/// Per-variable exponent sums over the basis of `Tˡ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCheck {
    pub sums: Vec<u64>,
    pub rank: u64,
    pub holds: bool,
}

/// Checks `n · Σ_{k ∈ basis} kᵢ = ℓ · dim Tˡ` for every variable `i`, the
/// combinatorial form of `c₁(Tˡ) = (ℓ/n)·rk(Tˡ)·c₁`.
pub fn degree_weight_check(n: usize, p: Prime, degree: u32) -> WeightCheck {
    let basis = t_basis(n, p, degree);
    let mut sums = vec![0u64; n];
    for k in &basis {
        for (s, &x) in sums.iter_mut().zip(k.exponents()) {
            *s += u64::from(x);
        }
    }
    let rank = basis.len() as u64;
    let holds = sums
        .iter()
        .all(|&s| n as u64 * s == u64::from(degree) * rank);
    WeightCheck { sums, rank, holds }
}
