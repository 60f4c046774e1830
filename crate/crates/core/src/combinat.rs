//! Small combinatorial helpers: binomial coefficients and subset walkers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `n choose k` in exact integer arithmetic.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// `n choose k` as f64 (fine at desk scale).
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r *= (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// `n*(n-1)/2`, the number of unordered pairs.
#[inline]
pub fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Calls `f` with every k-subset of `0..n` in lexicographic order.
/// `f` may return `false` to stop early; returns whether the walk completed.
pub fn for_each_combination<F: FnMut(&[usize]) -> bool>(n: usize, k: usize, mut f: F) -> bool {
    if k > n {
        return true;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        if !f(&c) {
            return false;
        }
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if c[i] != i + n - k {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Whether some mask is a submask of `w` (all its bits present in `w`).
#[inline]
#[allow(clippy::manual_contains)] // the suggested contains() is not equivalent
pub fn any_submask(masks: &[u32], w: u32) -> bool {
    masks.iter().any(|&m| m & w == m)
}

/// Exact rational `p^k (1-p)^(m-k)` sums: given per-popcount event counts over
/// subsets of an `m`-element ground set, assembles `sum_k counts[k] * p^k *
/// (1-p)^(m-k)`.
pub fn rational_from_popcount_counts(counts: &[u64], p: &BigRational) -> BigRational {
    let m = counts.len() - 1;
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    let mut p_pow = BigRational::one();
    let mut p_pows = Vec::with_capacity(m + 1);
    for _ in 0..=m {
        p_pows.push(p_pow.clone());
        p_pow *= p;
    }
    let mut q_pow = BigRational::one();
    let mut q_pows = vec![BigRational::one(); m + 1];
    for i in (0..=m).rev() {
        q_pows[i] = q_pow.clone();
        q_pow *= &q;
    }
    // q_pows[k] currently holds q^(m-k).
    for k in 0..=m {
        if counts[k] != 0 {
            total += BigRational::from(BigInt::from(counts[k])) * &p_pows[k] * &q_pows[k];
        }
    }
    total
}
