//! Dense linear algebra over a prime field 𝔽ₚ.
//!
//! Vectors are row vectors and a matrix of a linear map `f: A → B` has one
//! row per basis vector of `A` (the image of that basis vector, written in the
//! basis of `B`). Composition `A → B → C` is the product `M_AB · M_BC`, and a
//! map is injective iff its rank equals its number of rows.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p > u64::from(u32::MAX) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(i64::from(self.0)) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.0)) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.0 - b)
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.0)) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by Fermat's little theorem. `a` must be nonzero mod p.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.0 != 0, "zero has no inverse");
        self.pow(a, u64::from(self.0) - 2)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of 𝔽ₚ that remembers its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    p: Prime,
}

impl Fp {
    pub fn new(value: i64, p: Prime) -> Self {
        Fp {
            value: p.reduce(value),
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        Fp { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        Fp::new(1, p)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Fp) -> Result<Prime> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        Ok(self.p)
    }

    pub fn checked_add(self, other: Fp) -> Result<Fp> {
        let p = self.same_field(other)?;
        Ok(Fp {
            value: p.add(self.value, other.value),
            p,
        })
    }

    pub fn checked_mul(self, other: Fp) -> Result<Fp> {
        let p = self.same_field(other)?;
        Ok(Fp {
            value: p.mul(self.value, other.value),
            p,
        })
    }

    pub fn inv(self) -> Option<Fp> {
        (!self.is_zero()).then(|| Fp {
            value: self.p.inv(self.value),
            p: self.p,
        })
    }
}

impl core::ops::Neg for Fp {
    type Output = Fp;

    fn neg(self) -> Fp {
        Fp {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

/// A dense row-major matrix over 𝔽ₚ.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix mod {} ({}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = FpMatrix::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, cols: usize, rows: &[R]) -> Result<Self> {
        let mut m = FpMatrix::zeros(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                m.data[i * cols + j] = p.reduce(x);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from rows whose entries are already reduced mod p.
    pub fn from_reduced_rows<R: AsRef<[u32]>>(p: Prime, cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| x % p.get()));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.data[r * self.cols + c] = value % self.p.get();
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn scale(&self, factor: u32) -> FpMatrix {
        let p = self.p;
        let data = self
            .data
            .iter()
            .map(|&x| p.mul(x, factor % p.get()))
            .collect();
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    fn check_same_field(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    if b != 0 {
                        *d = p.add(*d, p.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks the rows of `other` below the rows of `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> FpMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        FpMatrix {
            p: self.p,
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    /// Reduced row-echelon form and rank.
    ///
    /// The echelon rows come first, ordered by pivot column, followed by zero
    /// rows, so the result has the same shape as `self`.
    pub fn row_reduce(&self) -> (FpMatrix, usize) {
        let echelon = Echelon::from_matrix(self);
        let rank = echelon.rank();
        let mut rref = FpMatrix::zeros(self.p, self.rows, self.cols);
        for (i, row) in echelon.into_sorted_rows().into_iter().enumerate() {
            rref.row_mut(i).copy_from_slice(&row);
        }
        (rref, rank)
    }

    pub fn rank(&self) -> usize {
        Echelon::from_matrix(self).rank()
    }

    /// The nonzero rows of the reduced row-echelon form.
    pub fn row_space_basis(&self) -> FpMatrix {
        let rows = Echelon::from_matrix(self).into_sorted_rows();
        FpMatrix::from_reduced_rows(self.p, self.cols, &rows).expect("echelon rows share width")
    }

    /// Pivot columns of the reduced row-echelon form, ascending.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = Echelon::from_matrix(self)
            .pivots
            .iter()
            .map(|pr| pr.col)
            .collect();
        cols.sort_unstable();
        cols
    }
}

struct PivotRow {
    col: usize,
    row: Vec<u32>,
}

/// Incrementally maintained reduced echelon basis of a row space.
///
/// Every stored row has a leading 1 at its pivot column and zeros at all
/// other pivot columns.
struct Echelon {
    p: Prime,
    cols: usize,
    pivots: Vec<PivotRow>,
    /// `slot[c]` is the index into `pivots` of the row pivoting at column `c`.
    slot: Vec<Option<usize>>,
}

impl Echelon {
    fn new(p: Prime, cols: usize) -> Self {
        Echelon {
            p,
            cols,
            pivots: Vec::new(),
            slot: vec![None; cols],
        }
    }

    fn from_matrix(m: &FpMatrix) -> Self {
        let mut e = Echelon::new(m.p, m.cols);
        for r in 0..m.rows {
            e.insert(m.row(r).to_vec());
        }
        e
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `dst -= factor * src` on columns `from..`.
    fn axpy(p: Prime, dst: &mut [u32], src: &[u32], factor: u32, from: usize) {
        let neg = p.neg(factor);
        for (d, &s) in dst[from..].iter_mut().zip(&src[from..]) {
            if s != 0 {
                *d = p.add(*d, p.mul(neg, s));
            }
        }
    }

    fn insert(&mut self, mut row: Vec<u32>) -> bool {
        let p = self.p;
        debug_assert_eq!(row.len(), self.cols);
        for pr in &self.pivots {
            let f = row[pr.col];
            if f != 0 {
                Self::axpy(p, &mut row, &pr.row, f, pr.col);
            }
        }
        let Some(lead) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = p.inv(row[lead]);
        for x in &mut row[lead..] {
            *x = p.mul(*x, inv);
        }
        for pr in &mut self.pivots {
            let f = pr.row[lead];
            if f != 0 {
                Self::axpy(p, &mut pr.row, &row, f, lead);
            }
        }
        self.slot[lead] = Some(self.pivots.len());
        self.pivots.push(PivotRow { col: lead, row });
        true
    }

    fn into_sorted_rows(self) -> Vec<Vec<u32>> {
        let mut pivots = self.pivots;
        pivots.sort_unstable_by_key(|pr| pr.col);
        pivots.into_iter().map(|pr| pr.row).collect()
    }
}

/// Dimension of the span of a list of coordinate rows.
pub fn span_dim<R: AsRef<[u32]>>(vectors: &[R], p: Prime) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let cols = first.as_ref().len();
    let mut e = Echelon::new(p, cols);
    for v in vectors {
        let v = v.as_ref();
        if v.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: v.len(),
            });
        }
        e.insert(v.iter().map(|&x| x % p.get()).collect());
    }
    Ok(e.rank())
}

/// Accumulates rows one at a time and tracks the rank of their span.
///
/// Useful when the rows are generated lazily and materializing the whole
/// matrix would be wasteful.
pub struct SpanBuilder {
    inner: Echelon,
}

impl SpanBuilder {
    pub fn new(p: Prime, cols: usize) -> Self {
        SpanBuilder {
            inner: Echelon::new(p, cols),
        }
    }

    /// Adds a row; returns whether it enlarged the span.
    pub fn push(&mut self, row: &[u32]) -> Result<bool> {
        if row.len() != self.inner.cols {
            return Err(Error::DimensionMismatch {
                expected: self.inner.cols,
                found: row.len(),
            });
        }
        let p = self.inner.p;
        Ok(self
            .inner
            .insert(row.iter().map(|&x| x % p.get()).collect()))
    }

    pub fn dim(&self) -> usize {
        self.inner.rank()
    }

    pub fn is_full(&self) -> bool {
        self.inner.rank() == self.inner.cols
    }
}
