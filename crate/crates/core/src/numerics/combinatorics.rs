use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(n, j)`, zero outside `0 ≤ j ≤ n`.
pub fn binomial(n: u64, j: i64) -> BigInt {
    if j < 0 || j as u64 > n {
        return BigInt::zero();
    }
    let j = (j as u64).min(n - j as u64);
    let mut acc = BigInt::one();
    for i in 0..j {
        // Each partial product C(n, i+1) is an integer, so the division is exact.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `n·(n−1)·…·(n−i+1)`, which is 1 for `i = 0`.
pub fn falling_factorial(n: u64, i: u64) -> Result<BigInt> {
    if i > n {
        return Err(Error::InvalidIndex(format!("falling factorial length {i} exceeds {n}")));
    }
    Ok((0..i).fold(BigInt::one(), |acc, k| acc * (n - k)))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}
