//! Signed 32-bit Q2.30 words with two's-complement wrap-around semantics.
//!
//! One sign bit, one integer bit, thirty fraction bits. Quantization is
//! floor (truncation toward negative infinity), the convention of the
//! arctangent ROM: `floor(pi/4 * 2^30) = 0x3243F6A8`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// Number of fraction bits.
pub const FRAC_BITS: u32 = 30;

const SCALE: f64 = (1u64 << FRAC_BITS) as f64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q30Fixed(i32);

impl Q30Fixed {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1 << FRAC_BITS);
    /// Smallest positive step, 2^-30.
    pub const ULP: Self = Self(1);

    pub const fn from_raw(raw: i32) -> Self {
        Self(raw)
    }

    pub const fn raw(self) -> i32 {
        self.0
    }

    /// Quantizes `v` by truncation toward negative infinity.
    pub fn from_real(v: f64) -> Result<Self> {
        if !v.is_finite() || v.abs() >= 2.0 {
            return Err(Error::FixedOverflow(v));
        }
        // Scaling by a power of two is exact, so floor sees the true product.
        Ok(Self((v * SCALE).floor() as i32))
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / SCALE
    }

    /// Arithmetic (sign-extending) right shift. Amounts above 31 are a
    /// precondition violation.
    pub fn asr(self, amount: u32) -> Self {
        debug_assert!(amount <= 31, "shift amount {amount} out of range");
        Self(self.0 >> amount)
    }

    /// Right shift that saturates the amount at 31: on a 32-bit word any
    /// larger shift leaves only sign bits, which is what a shift by 31 gives.
    pub fn asr_saturating(self, amount: u32) -> Self {
        Self(self.0 >> amount.min(31))
    }

    pub fn wrapping_add(self, rhs: Self) -> Self {
        Self(self.0.wrapping_add(rhs.0))
    }

    pub fn wrapping_sub(self, rhs: Self) -> Self {
        Self(self.0.wrapping_sub(rhs.0))
    }

    pub fn wrapping_neg(self) -> Self {
        Self(self.0.wrapping_neg())
    }

    /// Addition that also reports whether the result wrapped.
    pub fn overflowing_add(self, rhs: Self) -> (Self, bool) {
        let (v, wrapped) = self.0.overflowing_add(rhs.0);
        (Self(v), wrapped)
    }

    pub fn overflowing_sub(self, rhs: Self) -> (Self, bool) {
        let (v, wrapped) = self.0.overflowing_sub(rhs.0);
        (Self(v), wrapped)
    }

    /// Full-width product truncated back to Q2.30 (floor). Only the
    /// conventional baseline's final gain compensation uses this.
    pub fn wrapping_mul(self, rhs: Self) -> Self {
        let wide = i64::from(self.0) * i64::from(rhs.0);
        Self((wide >> FRAC_BITS) as i32)
    }

    pub fn abs(self) -> Self {
        Self(self.0.wrapping_abs())
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Eight uppercase hex digits of the raw word.
    pub fn hex(self) -> String {
        format!("{:08X}", self.0 as u32)
    }
}

impl Add for Q30Fixed {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.wrapping_add(rhs)
    }
}

impl Sub for Q30Fixed {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self.wrapping_sub(rhs)
    }
}

impl Neg for Q30Fixed {
    type Output = Self;

    fn neg(self) -> Self {
        self.wrapping_neg()
    }
}

impl fmt::Debug for Q30Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q30Fixed(0x{} = {})", self.hex(), self.to_f64())
    }
}

impl fmt::Display for Q30Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_f64().fmt(f)
    }
}

impl fmt::UpperHex for Q30Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::UpperHex::fmt(&(self.0 as u32), f)
    }
}
