//! Small exact counting helpers.

use alloc::vec::Vec;

use crate::fp::Prime;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc = C(n, i) * ... / i!
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Number of monomials of degree `ℓ` in `n` variables with every exponent at
/// most `p − 1`, by inclusion–exclusion over the variables whose exponent is
/// forced to reach `p`:
///
/// `Σ_{q=0}^{⌊ℓ/p⌋} (−1)^q · C(n, q) · C(n + ℓ − q·p − 1, n − 1)`.
pub fn truncated_count(n: u32, p: u32, degree: u32) -> u128 {
    if n == 0 {
        return u128::from(degree == 0);
    }
    let (n, p, degree) = (u64::from(n), u64::from(p), u64::from(degree));
    let mut total: i128 = 0;
    for q in 0..=degree / p {
        let term = (binomial(n, q) * binomial(n + degree - q * p - 1, n - 1)) as i128;
        if q % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    debug_assert!(total >= 0);
    total as u128
}

/// `k! mod p`.
pub fn factorial_mod(k: u32, p: Prime) -> u32 {
    falling_factorial_mod(k, k, p)
}

/// `k · (k−1) ⋯ (k−e+1) mod p`, i.e. `k!/(k−e)!`; zero when `e > k`.
pub fn falling_factorial_mod(k: u32, e: u32, p: Prime) -> u32 {
    if e > k {
        return 0;
    }
    let mut acc = 1 % p.get();
    for i in 0..e {
        acc = p.mul(acc, (k - i) % p.get());
    }
    acc
}

/// All `q`-element subsets of `0..n` as increasing index lists, in
/// lexicographic order.
pub fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if q > n {
        return out;
    }
    let mut current: Vec<usize> = (0..q).collect();
    loop {
        out.push(current.clone());
        // advance the rightmost index that still has room
        let mut i = q;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - q + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..q {
            current[j] = current[j - 1] + 1;
        }
    }
}
