//! Capped multi-index boxes and dominance matchings between them.
//!
//! For caps `a = (a₁,…,aₙ)` the box `M^ℓₙ(a)` is the set of exponent vectors
//! `v` with `0 ≤ vᵢ ≤ aᵢ` and `Σvᵢ = ℓ`. With `σ = Σaᵢ` and `2ℓ ≤ σ` there is an
//! injective map `φ: M^ℓ → M^{σ−ℓ}` with `v ≤ φ(v)` componentwise.
//! [`leng_matching`] builds it by the two-branch recursion (split on
//! `v_{n−1} = a_{n−1} or v_n = 0`), and [`hall_matching_exists`] is an
//! independent augmenting-path check that such a map exists.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// An exponent vector `(k₁,…,kₙ)`. Ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector `eᵢ` in `n` coordinates.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn into_exponents(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self ≤ other`. Vectors of different length never compare.
    pub fn dominated_by(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self − other` when `other ≤ self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.dominated_by(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn scale(&self, factor: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|x| x * factor).collect())
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

/// The box `M^ℓₙ(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialBox {
    caps: Vec<u32>,
    degree: u32,
}

impl MonomialBox {
    pub fn new(caps: Vec<u32>, degree: u32) -> Self {
        MonomialBox { caps, degree }
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn sigma(&self) -> u32 {
        self.caps.iter().sum()
    }

    pub fn contains(&self, v: &MultiIndex) -> bool {
        v.len() == self.caps.len()
            && v.degree() == self.degree
            && v.exponents().iter().zip(&self.caps).all(|(x, a)| x <= a)
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> Vec<MultiIndex> {
        enumerate_box(&self.caps, self.degree)
    }

    /// The box of complementary degree `σ − ℓ`, or `None` when `ℓ > σ`.
    pub fn complement(&self) -> Option<MonomialBox> {
        let sigma = self.sigma();
        (self.degree <= sigma).then(|| MonomialBox::new(self.caps.clone(), sigma - self.degree))
    }
}

impl fmt::Display for MonomialBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M^{}{}", self.degree, MultiIndex(self.caps.clone()))
    }
}

/// All `v` with `0 ≤ vᵢ ≤ capsᵢ` and `Σvᵢ = ℓ`, in lexicographic order.
pub fn enumerate_box(caps: &[u32], degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    // suffix[i] = Σ_{j ≥ i} caps[j], used to prune infeasible prefixes
    let mut suffix = vec![0u32; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        suffix[i] = suffix[i + 1] + caps[i];
    }
    if degree > suffix[0] {
        return out;
    }
    let mut current = vec![0u32; caps.len()];
    fill(caps, &suffix, 0, degree, &mut current, &mut out);
    out
}

fn fill(
    caps: &[u32],
    suffix: &[u32],
    i: usize,
    remaining: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<MultiIndex>,
) {
    if i == caps.len() {
        if remaining == 0 {
            out.push(MultiIndex(current.clone()));
        }
        return;
    }
    let lo = remaining.saturating_sub(suffix[i + 1]);
    let hi = caps[i].min(remaining);
    for x in lo..=hi {
        current[i] = x;
        fill(caps, suffix, i + 1, remaining - x, current, out);
    }
    current[i] = 0;
}

/// An injective assignment from a source box into a target box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub source: MonomialBox,
    pub target: MonomialBox,
    pub assignment: BTreeMap<MultiIndex, MultiIndex>,
}

impl Matching {
    /// Pairs `(v, φ(v))` in lexicographic order of `v`.
    pub fn pairs(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex)> {
        self.assignment.iter()
    }

    pub fn image_of(&self, v: &MultiIndex) -> Option<&MultiIndex> {
        self.assignment.get(v)
    }
}

/// Builds the dominance matching `M^ℓ → M^{σ−ℓ}` for the given caps.
pub fn leng_matching(caps: &[u32], degree: u32) -> Result<Matching> {
    LengBuilder::new().matching(caps, degree)
}

type PairList = Vec<(Vec<u32>, Vec<u32>)>;

/// Recursive construction of dominance matchings with a memo table keyed on
/// `(caps, ℓ)`. Reusing one builder across a sweep shares the sub-results.
#[derive(Debug, Default)]
pub struct LengBuilder {
    memo: BTreeMap<(Vec<u32>, u32), PairList>,
}

impl LengBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cached_entries(&self) -> usize {
        self.memo.len()
    }

    pub fn matching(&mut self, caps: &[u32], degree: u32) -> Result<Matching> {
        let sigma: u32 = caps.iter().sum();
        if 2 * degree > sigma {
            return Err(Error::DegreeAboveHalf { degree, sigma });
        }
        let assignment = self
            .phi(caps, degree)
            .into_iter()
            .map(|(v, w)| (MultiIndex(v), MultiIndex(w)))
            .collect();
        Ok(Matching {
            source: MonomialBox::new(caps.to_vec(), degree),
            target: MonomialBox::new(caps.to_vec(), sigma - degree),
            assignment,
        })
    }

    /// `φ` on arbitrary caps. Coordinates with cap 0 carry a forced 0, so
    /// they are dropped before recursing and restored afterwards; the
    /// recursion itself only sees positive caps.
    fn phi(&mut self, caps: &[u32], degree: u32) -> PairList {
        let positive: Vec<usize> = (0..caps.len()).filter(|&i| caps[i] > 0).collect();
        if positive.len() == caps.len() {
            return self.phi_positive(caps, degree);
        }
        let reduced: Vec<u32> = positive.iter().map(|&i| caps[i]).collect();
        let expand = |short: Vec<u32>| {
            let mut full = vec![0u32; caps.len()];
            for (&i, x) in positive.iter().zip(short) {
                full[i] = x;
            }
            full
        };
        self.phi_positive(&reduced, degree)
            .into_iter()
            .map(|(v, w)| (expand(v), expand(w)))
            .collect()
    }

    fn phi_positive(&mut self, caps: &[u32], degree: u32) -> PairList {
        let key = (caps.to_vec(), degree);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let n = caps.len();
        let sigma: u32 = caps.iter().sum();
        debug_assert!(2 * degree <= sigma);

        let mut pairs: PairList = match n {
            // all caps were zero: σ = 0 forces ℓ = 0
            0 => vec![(Vec::new(), Vec::new())],
            1 => vec![(vec![degree], vec![caps[0] - degree])],
            _ => {
                let a_prev = caps[n - 2];
                let mut pairs = Vec::new();

                // S-branch: v_{n−1} = a_{n−1} or v_n = 0. Merge the last two
                // coordinates (f_ℓ), match in n−1 variables (ψ₁), split back
                // (f_{σ−ℓ}⁻¹).
                let mut merged = caps[..n - 2].to_vec();
                merged.push(a_prev + caps[n - 1]);
                for (w_src, w_tgt) in self.phi(&merged, degree) {
                    pairs.push((unmerge(&w_src, a_prev), unmerge(&w_tgt, a_prev)));
                }

                // C-branch: v_{n−1} < a_{n−1} and v_n ≥ 1. Shift v_n down by
                // one (π_ℓ), match with both trailing caps lowered (ψ₂, σ − 2),
                // shift back up (π_{σ−ℓ}⁻¹).
                if degree >= 1 {
                    let mut lowered = caps.to_vec();
                    lowered[n - 2] -= 1;
                    lowered[n - 1] -= 1;
                    for (mut u, mut w) in self.phi(&lowered, degree - 1) {
                        u[n - 1] += 1;
                        w[n - 1] += 1;
                        pairs.push((u, w));
                    }
                }
                pairs
            }
        };
        pairs.sort_unstable();
        self.memo.insert(key, pairs.clone());
        pairs
    }
}

/// Inverse of merging the last two coordinates: fill `v_{n−1}` up to `a_{n−1}`
/// first and put the excess into `v_n`.
fn unmerge(w: &[u32], a_prev: u32) -> Vec<u32> {
    let (&last, head) = w
        .split_last()
        .expect("merged vector has at least one coordinate");
    let mut v = head.to_vec();
    if last <= a_prev {
        v.push(last);
        v.push(0);
    } else {
        v.push(a_prev);
        v.push(last - a_prev);
    }
    v
}

/// Why a candidate matching fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// A source element has no image.
    Unassigned,
    /// The assignment has a key outside the source box.
    OutsideSource,
    /// The image is not an element of the target box.
    OutsideTarget,
    /// `v ≤ φ(v)` fails.
    NotDominating,
    /// The image was already used by an earlier source element.
    Collision { earlier: MultiIndex },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingViolation {
    pub kind: ViolationKind,
    pub source: MultiIndex,
    pub image: Option<MultiIndex>,
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.image {
            Some(w) => write!(f, "{:?} at {} -> {}", self.kind, self.source, w),
            None => write!(f, "{:?} at {}", self.kind, self.source),
        }
    }
}

/// Checks totality, injectivity, target membership and dominance. Source
/// elements are scanned in lexicographic order and the first failure wins.
pub fn verify_matching(m: &Matching) -> core::result::Result<(), MatchingViolation> {
    let mut used: BTreeMap<&MultiIndex, &MultiIndex> = BTreeMap::new();
    for v in m.source.elements() {
        let Some(w) = m.assignment.get(&v) else {
            return Err(MatchingViolation {
                kind: ViolationKind::Unassigned,
                source: v,
                image: None,
            });
        };
        let fail = |kind| {
            Err(MatchingViolation {
                kind,
                source: v.clone(),
                image: Some(w.clone()),
            })
        };
        if !m.target.contains(w) {
            return fail(ViolationKind::OutsideTarget);
        }
        if !v.dominated_by(w) {
            return fail(ViolationKind::NotDominating);
        }
        if let Some(&earlier) = used.get(w) {
            return fail(ViolationKind::Collision {
                earlier: earlier.clone(),
            });
        }
        let (key, _) = m.assignment.get_key_value(&v).expect("looked up above");
        used.insert(w, key);
    }
    for (v, w) in &m.assignment {
        if !m.source.contains(v) {
            return Err(MatchingViolation {
                kind: ViolationKind::OutsideSource,
                source: v.clone(),
                image: Some(w.clone()),
            });
        }
    }
    Ok(())
}

/// Whether `M^ℓ` can be matched injectively into `M^{σ−ℓ}` along dominance.
///
/// Runs augmenting paths on the bipartite dominance graph; independent of
/// the recursive construction.
pub fn hall_matching_exists(caps: &[u32], degree: u32) -> bool {
    let source = enumerate_box(caps, degree);
    if source.is_empty() {
        return true;
    }
    let sigma: u32 = caps.iter().sum();
    let target = enumerate_box(caps, sigma - degree.min(sigma));
    max_dominance_matching(&source, &target) == source.len()
}

/// Size of a maximum matching between `source` and `target` where `v` may be
/// matched to `w` iff `v ≤ w`.
pub fn max_dominance_matching(source: &[MultiIndex], target: &[MultiIndex]) -> usize {
    let adjacency: Vec<Vec<usize>> = source
        .iter()
        .map(|v| {
            (0..target.len())
                .filter(|&j| v.dominated_by(&target[j]))
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; target.len()];
    let mut size = 0;
    for i in 0..source.len() {
        let mut seen = vec![false; target.len()];
        if augment(i, &adjacency, &mut owner, &mut seen) {
            size += 1;
        }
    }
    size
}

fn augment(
    i: usize,
    adjacency: &[Vec<usize>],
    owner: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &j in &adjacency[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        let free = match owner[j] {
            None => true,
            Some(k) => augment(k, adjacency, owner, seen),
        };
        if free {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

/// The images of a matching as a set; handy for injectivity checks in tests.
pub fn image_set(m: &Matching) -> BTreeSet<MultiIndex> {
    m.assignment.values().cloned().collect()
}
