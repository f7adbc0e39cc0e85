//! Test-only oracles, independent of the library's code paths.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Working precision of the arctangent oracle, in bits.
const PRECISION: u32 = 256;

/// `atan(1/m) * 2^PRECISION` by the alternating series.
fn atan_inv(m: u64) -> BigInt {
    let one = BigInt::one() << PRECISION;
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut power = &one / &m;
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if n.is_multiple_of(2) { sum += term } else { sum -= term }
        power /= &m2;
        n += 1;
    }
    sum
}

/// `atan(2^-k) * 2^PRECISION`; Machin's formula for `k = 0`.
pub fn atan_pow2_scaled(k: u32) -> BigInt {
    if k == 0 {
        return atan_inv(5) * 4 - atan_inv(239);
    }
    assert!(k < 32, "ROM indices only");
    atan_inv(1u64 << k)
}

/// `floor(atan(2^-k) * 2^30)` from the high-precision oracle.
pub fn rom_word_oracle(k: u32) -> i32 {
    let v: BigInt = atan_pow2_scaled(k) >> (PRECISION - 30);
    i32::try_from(v).expect("fits in 32 bits")
}

/// Uniform grid over `[0, pi/4]` with both endpoints.
pub fn grid(samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|i| std::f64::consts::FRAC_PI_4 * i as f64 / (samples - 1) as f64)
        .collect()
}
