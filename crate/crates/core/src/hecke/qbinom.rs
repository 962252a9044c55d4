use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Number of k-dimensional subspaces of an n-dimensional space over a field
/// with `base` elements.
pub fn q_binomial(n: u32, k: u32, base: u64) -> Result<BigInt> {
    if k > n {
        return Err(Error::OutOfRange(format!(
            "q-binomial needs k ≤ n, got n={n}, k={k}"
        )));
    }
    if base < 2 {
        return Err(Error::OutOfRange(format!(
            "q-binomial base must be ≥ 2, got {base}"
        )));
    }
    Ok(q_binomial_or_zero(n, k, base))
}

/// As `q_binomial`, but 0 when k > n.
pub fn q_binomial_or_zero(n: u32, k: u32, base: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let b = BigInt::from(base);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= b.pow(n - i) - 1u32;
        den *= b.pow(i + 1) - 1u32;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts k-dimensional subspaces of F_p^n by row-reduced echelon forms.
    fn subspace_count(n: u32, k: u32, p: u64) -> u64 {
        // pivot sets; free entries: positions right of each pivot that are not pivots
        let mut total = 0;
        for mask in 0u32..1 << n {
            if mask.count_ones() != k {
                continue;
            }
            let pivots: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let free: u32 = pivots
                .iter()
                .map(|&c| (c + 1..n).filter(|j| mask >> j & 1 == 0).count() as u32)
                .sum();
            total += p.pow(free);
        }
        total
    }

    #[test]
    fn examples_and_oracle() {
        assert_eq!(q_binomial(2, 1, 2).unwrap(), BigInt::from(3));
        assert_eq!(q_binomial(4, 2, 2).unwrap(), BigInt::from(35));
        assert_eq!(q_binomial(5, 0, 9).unwrap(), BigInt::from(1));
        assert!(q_binomial(1, 2, 2).is_err());
        for p in [2u64, 3, 5] {
            for n in 0..=5 {
                for k in 0..=n {
                    assert_eq!(
                        q_binomial(n, k, p).unwrap(),
                        BigInt::from(subspace_count(n, k, p))
                    );
                    assert_eq!(
                        q_binomial(n, k, p).unwrap(),
                        q_binomial(n, n - k, p).unwrap()
                    );
                }
            }
        }
    }
}
