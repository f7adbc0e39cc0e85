//! Closest elementary angle selection and greedy angle decomposition.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fixedpoint::{Q30Fixed, FRAC_BITS};
use crate::variants::{elementary_angle, INDEX_COUNT};

const MAX_INDEX: u32 = INDEX_COUNT - 1;

/// `round(log2(1 / |theta|))`, half away from zero, clamped to [0, 31].
pub fn closest_index(theta: f64) -> Result<u32> {
    if !theta.is_finite() {
        return Err(Error::NonFinite(theta));
    }
    if theta == 0.0 {
        return Err(Error::ZeroAngle);
    }
    let k = (-theta.abs().log2()).round();
    Ok(k.clamp(0.0, f64::from(MAX_INDEX)) as u32)
}

/// Bit-pattern form of the closest-index rule on `|theta|`.
///
/// Reading the magnitude as a pure fraction `0.e1 e2 ...`, the first set
/// bit `e_i` gives `k = i` when `e_{i+1} = 0` and `k = i - 1` when it is
/// set. A leading-one detector plus one neighbouring bit; no logarithm.
pub fn closest_index_bits(theta: Q30Fixed) -> Result<u32> {
    let mag = theta.raw().unsigned_abs();
    if mag == 0 {
        return Err(Error::ZeroAngle);
    }
    // Bit 30 is the integer bit, bit 29 carries e1 (weight 2^-1).
    let msb = 31 - mag.leading_zeros();
    let position = FRAC_BITS as i32 - msb as i32;
    let next_set = msb > 0 && mag & (1 << (msb - 1)) != 0;
    let k = if next_set { position - 1 } else { position };
    Ok(k.clamp(0, MAX_INDEX as i32) as u32)
}

/// One greedy step: micro-rotation `sign * atan(2^-k)` and the residual after it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub k: u32,
    pub sign: i8,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Decomposition {
    pub steps: Vec<Step>,
    pub residual: f64,
}

impl Decomposition {
    /// `sum(sign * atan(2^-k)) + residual`.
    pub fn reconstruct(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| f64::from(s.sign) * elementary_angle(s.k))
            .sum::<f64>()
            + self.residual
    }

    /// Signed indices, e.g. `[1, -4, -7]`.
    pub fn signed_indices(&self) -> Vec<i64> {
        self.steps
            .iter()
            .map(|s| i64::from(s.sign) * i64::from(s.k))
            .collect()
    }

    /// `step,k,sign,residual` rows; `residual` is the angle left after the step.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,k,sign,residual\n");
        for (i, s) in self.steps.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{:e}", i + 1, s.k, s.sign, s.residual);
        }
        out
    }
}

/// Greedy decomposition of `theta` into signed elementary angles.
///
/// Stops after `max_steps`, once `|residual| <= stop_tolerance`, or when
/// even the smallest elementary angle would not shrink the residual. The same index may be chosen more than once.
pub fn decompose(theta: f64, max_steps: usize, stop_tolerance: f64) -> Result<Decomposition> {
    if !theta.is_finite() {
        return Err(Error::NonFinite(theta));
    }
    if theta.abs() > std::f64::consts::FRAC_PI_4 {
        return Err(Error::AngleOutOfRange(theta));
    }
    if max_steps == 0 {
        return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
    }
    let mut residual = theta;
    let mut steps = Vec::new();
    while steps.len() < max_steps && residual != 0.0 && residual.abs() > stop_tolerance {
        let k = closest_index(residual)?;
        let sign: i8 = if residual > 0.0 { 1 } else { -1 };
        let next = residual - f64::from(sign) * elementary_angle(k);
        // Below half the smallest ROM angle no micro-rotation helps.
        if next.abs() >= residual.abs() {
            break;
        }
        residual = next;
        steps.push(Step { k, sign, residual });
    }
    Ok(Decomposition { steps, residual })
}
