//! Squarefree decomposition of radicands.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_prime::nt_funcs::{factorize, factorize128};
use num_traits::{One, Pow, ToPrimitive, Zero};

/// Splits `n >= 0` as `n = square² · core` with `core` squarefree.
pub fn decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.sign() != num_bigint::Sign::Minus, "radicand must be non-negative");
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    if let Some(small) = n.to_u128() {
        let factors: BTreeMap<BigUint, usize> = factorize128(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
        return split(factors);
    }
    split(factorize(n.magnitude().clone()))
}

fn split(factors: BTreeMap<BigUint, usize>) -> (BigInt, BigInt) {
    let (mut square, mut core) = (BigUint::one(), BigUint::one());
    for (p, e) in factors {
        if e % 2 == 1 {
            core *= &p;
        }
        square *= Pow::pow(&p, e / 2);
    }
    (square.into(), core.into())
}

/// True when `n` is a perfect square (including 0 and 1).
pub fn is_square(n: &BigInt) -> bool {
    if n.sign() == num_bigint::Sign::Minus {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: u64) -> (u64, u64) {
        let mut best = 1;
        let mut s = 1;
        while s * s <= n {
            if n.is_multiple_of(s * s) {
                best = s;
            }
            s += 1;
        }
        (best, n / (best * best))
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..3000u64 {
            let (s, c) = decompose(&BigInt::from(n));
            assert_eq!((s, c), (BigInt::from(brute(n).0), BigInt::from(brute(n).1)), "n = {n}");
        }
    }

    #[test]
    fn large_values() {
        // 2^3 * 3^2 * 1000003^2 * 999983
        let n = BigInt::from(8u64) * 9u64 * BigInt::from(1_000_003u64).pow(2u32) * 999_983u64;
        let (s, c) = decompose(&n);
        assert_eq!(s, BigInt::from(2u64 * 3 * 1_000_003));
        assert_eq!(c, BigInt::from(2u64 * 999_983));
        let huge = BigInt::from(u128::MAX) * 4 * 7;
        let (s, c) = decompose(&huge);
        assert_eq!(&s * &s * &c, huge);
    }

    #[test]
    fn zero_and_one() {
        assert_eq!(decompose(&BigInt::zero()), (BigInt::zero(), BigInt::zero()));
        assert_eq!(decompose(&BigInt::one()), (BigInt::one(), BigInt::one()));
    }
}
