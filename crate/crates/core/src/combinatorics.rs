//! Binomials, multinomials, falling factorials and the small enumerations
//! (permutations, compositions) the rest of the crate is built on.

use num_bigint::BigInt;
use num_traits::One;

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(k_1 + ... + k_m)! / (k_1! ... k_m!)`
pub fn multinomial(parts: &[u32]) -> BigInt {
    let total: u32 = parts.iter().sum();
    let mut acc = BigInt::one();
    let mut seen = 0;
    for &k in parts {
        seen += k;
        acc *= binomial(seen, k);
    }
    debug_assert_eq!(seen, total);
    acc
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling(n: u64, k: u32) -> BigInt {
    (0..k as u64).fold(BigInt::one(), |acc, i| {
        if i >= n {
            BigInt::from(0)
        } else {
            acc * (n - i)
        }
    })
}

/// All permutations of `0..n` in lexicographic one-line order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    // Narayana's next-permutation.
    while let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) {
        let pivot = i - 1;
        let j = (i..n).rev().find(|&j| current[j] > current[pivot]).unwrap();
        current.swap(pivot, j);
        current[i..].reverse();
        out.push(current.clone());
    }
    out
}

/// All vectors of `parts` non-negative integers summing to `total`, in
/// lexicographically descending order: `(total,0,..)` first, `(..,0,total)` last.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            go(remaining - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Mixed-radix odometer over `{0..radix}^len`, lexicographic.
pub fn tuples(radix: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (radix as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    let mut current = vec![0usize; len];
    let mut emitted: u128 = 0;
    std::iter::from_fn(move || {
        if emitted >= total || (radix == 0 && len > 0) {
            return None;
        }
        let out = current.clone();
        emitted += 1;
        for slot in current.iter_mut().rev() {
            *slot += 1;
            if *slot < radix {
                break;
            }
            *slot = 0;
        }
        Some(out)
    })
}
