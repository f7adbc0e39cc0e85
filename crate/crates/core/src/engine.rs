//! Float-domain rotation-mode circular CORDIC.
//!
//! The conventional mode steps `k = 0..n` and compensates the gain at the
//! end. The scale-free mode picks the elementary angle closest to the
//! residual at every step and applies a variant's approximate rotation
//! matrix, with no compensation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use crate::error::{Error, Result};
use crate::fixedpoint::Q30Fixed;
use crate::refmath::scale_factor;
use crate::selector::{closest_index, closest_index_bits};
use crate::variants::{coefficients, elementary_angle, Variant, SCALE_FREE_MIN_INDEX};

pub const MAX_CONVENTIONAL_ITERATIONS: usize = 32;
pub const MAX_SCALE_FREE_ITERATIONS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CordicState {
    pub x: f64,
    pub y: f64,
    /// Residual angle in radians.
    pub z: f64,
}

impl CordicState {
    /// `(1, 0, theta)`.
    pub fn unit(theta: f64) -> Self {
        Self { x: 1.0, y: 0.0, z: theta }
    }

    pub fn magnitude(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Output of a sin/cos evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinCos {
    pub cos: f64,
    pub sin: f64,
    /// Angle not yet rotated when the iterations ran out.
    pub residual: f64,
}

/// How the scale-free loop picks its index from the residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexRule {
    /// `round(log2(1/|z|))`.
    #[default]
    RoundedLog,
    /// Leading-bit rule on `|z|` quantized to Q2.30, as the datapath does.
    LeadingBits,
}

impl IndexRule {
    /// Index applied for residual `z` (never below [`SCALE_FREE_MIN_INDEX`]).
    pub fn select(self, z: f64) -> Result<u32> {
        let k = match self {
            IndexRule::RoundedLog => closest_index(z)?,
            IndexRule::LeadingBits => closest_index_bits(Q30Fixed::from_real(z.abs())?)?,
        };
        Ok(k.max(SCALE_FREE_MIN_INDEX))
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::NonFinite(theta));
    }
    if theta.abs() > FRAC_PI_4 {
        return Err(Error::AngleOutOfRange(theta));
    }
    Ok(())
}

fn check_iterations(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::InvalidIterations { got: n, max });
    }
    Ok(())
}

/// Uncompensated conventional iterations `k = 0..n` from an arbitrary state.
pub fn rotate_conventional(mut s: CordicState, iterations: usize) -> Result<CordicState> {
    check_iterations(iterations, MAX_CONVENTIONAL_ITERATIONS)?;
    for k in 0..iterations {
        let eps = if s.z >= 0.0 { 1.0 } else { -1.0 };
        let t = 2f64.powi(-(k as i32));
        let (x, y) = (s.x - eps * t * s.y, s.y + eps * t * s.x);
        s = CordicState { x, y, z: s.z - eps * elementary_angle(k as u32) };
    }
    Ok(s)
}

/// Conventional CORDIC from `(1, 0, theta)`, scaled by `K(n)` at the end.
pub fn run_conventional(theta: f64, iterations: usize) -> Result<SinCos> {
    check_angle(theta)?;
    let s = rotate_conventional(CordicState::unit(theta), iterations)?;
    let gain = scale_factor(iterations);
    Ok(SinCos { cos: gain * s.x, sin: gain * s.y, residual: s.z })
}

/// Scale-free iterations from an arbitrary state. A zero residual skips
/// the rotation but still consumes the iteration.
pub fn rotate_scalefree(
    mut s: CordicState,
    iterations: usize,
    variant: Variant,
    rule: IndexRule,
) -> Result<CordicState> {
    if !variant.is_scale_free() {
        return Err(Error::NoCoefficients(variant));
    }
    check_iterations(iterations, MAX_SCALE_FREE_ITERATIONS)?;
    for _ in 0..iterations {
        if s.z == 0.0 {
            continue;
        }
        let k = rule.select(s.z)?;
        let eps = if s.z > 0.0 { 1.0 } else { -1.0 };
        let m = coefficients(variant, k)?;
        let (c, sn) = (m.cos_value, eps * m.sin_value);
        let (x, y) = (c * s.x - sn * s.y, sn * s.x + c * s.y);
        s = CordicState { x, y, z: s.z - eps * m.angle };
    }
    Ok(s)
}

/// Scale-free CORDIC from `(1, 0, theta)` with the rounded-log index rule.
pub fn run_scalefree(theta: f64, iterations: usize, variant: Variant) -> Result<SinCos> {
    run_scalefree_with(theta, iterations, variant, IndexRule::RoundedLog)
}

pub fn run_scalefree_with(
    theta: f64,
    iterations: usize,
    variant: Variant,
    rule: IndexRule,
) -> Result<SinCos> {
    check_angle(theta)?;
    let s = rotate_scalefree(CordicState::unit(theta), iterations, variant, rule)?;
    Ok(SinCos { cos: s.x, sin: s.y, residual: s.z })
}

/// Dispatches on the variant: conventional or scale-free.
pub fn run(theta: f64, iterations: usize, variant: Variant) -> Result<SinCos> {
    match variant {
        Variant::Conventional => run_conventional(theta, iterations),
        v => run_scalefree(theta, iterations, v),
    }
}

/// Sign and swap rules that map `(cos r, sin r)` of the reduced angle back
/// to the original one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reconstruction {
    pub swap: bool,
    pub negate_cos: bool,
    pub negate_sin: bool,
}

impl Reconstruction {
    pub fn apply(&self, cos_r: f64, sin_r: f64) -> (f64, f64) {
        let (c, s) = if self.swap { (sin_r, cos_r) } else { (cos_r, sin_r) };
        (
            if self.negate_cos { -c } else { c },
            if self.negate_sin { -s } else { s },
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedAngle {
    /// In [0, pi/4].
    pub reduced: f64,
    /// Octant 0..8 of the angle taken modulo 2 pi.
    pub octant: u8,
    pub reconstruction: Reconstruction,
}

/// Reconstruction rule for an octant.
pub fn octant_reconstruction(octant: u8) -> Reconstruction {
    // Odd octants mirror about the octant's upper edge, giving
    // (cos, sin) of pi/2 - r within the quadrant, hence the swap.
    let swap = octant % 2 == 1;
    let (negate_cos, negate_sin, quad_swap) = match (octant / 2) % 4 {
        0 => (false, false, false),
        1 => (true, false, true),
        2 => (true, true, false),
        _ => (false, true, true),
    };
    Reconstruction { swap: swap ^ quad_swap, negate_cos, negate_sin }
}

/// Maps `theta` into [0, pi/4], recording how to undo the mapping.
pub fn reduce_argument(theta: f64) -> Result<ReducedAngle> {
    if !theta.is_finite() {
        return Err(Error::NonFinite(theta));
    }
    let t = theta.rem_euclid(TAU);
    let octant = ((t / FRAC_PI_4).floor() as i64).clamp(0, 7) as u8;
    let quadrant_angle = t - f64::from(octant / 2) * FRAC_PI_2;
    let reduced = if octant.is_multiple_of(2) {
        quadrant_angle
    } else {
        FRAC_PI_2 - quadrant_angle
    };
    Ok(ReducedAngle {
        reduced: reduced.clamp(0.0, FRAC_PI_4),
        octant,
        reconstruction: octant_reconstruction(octant),
    })
}

/// Applies the octant's symmetry rule to `(cos, sin)` of the reduced angle.
pub fn reconstruct(octant: u8, cos_r: f64, sin_r: f64) -> (f64, f64) {
    octant_reconstruction(octant).apply(cos_r, sin_r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refmath::reference_sincos;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_6};

    fn grid(n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| FRAC_PI_4 * i as f64 / (n - 1) as f64)
    }

    #[test]
    fn conventional_examples() {
        let r = run_conventional(0.0, 32).unwrap();
        assert!((r.cos - 1.0).abs() <= 1e-9 && r.sin.abs() <= 1e-9);
        let r = run_conventional(FRAC_PI_4, 32).unwrap();
        assert!((r.cos - FRAC_1_SQRT_2).abs() <= 1e-8 && (r.sin - FRAC_1_SQRT_2).abs() <= 1e-8);
        let r = run_conventional(1f64.atan(), 1).unwrap();
        let k1 = scale_factor(1);
        assert!((r.cos - k1).abs() < 1e-15 && (r.sin - k1).abs() < 1e-15);
    }

    #[test]
    fn conventional_converges_on_grid() {
        for theta in grid(512) {
            let r = run_conventional(theta, 32).unwrap();
            let (c, s) = reference_sincos(theta);
            assert!((r.cos - c).abs() <= 1e-6 && (r.sin - s).abs() <= 1e-6);
            assert!((r.cos * r.cos + r.sin * r.sin - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn conventional_gain_matches_product() {
        let start = CordicState { x: 0.3, y: -0.7, z: 0.4 };
        for n in [1, 5, 17, 32] {
            let s = rotate_conventional(start, n).unwrap();
            let gain: f64 = (0..n).map(|k| (1.0 + 4f64.powi(-(k as i32))).sqrt()).product();
            assert!((s.magnitude() - start.magnitude() * gain).abs() <= 1e-12);
        }
    }

    #[test]
    fn scalefree_examples() {
        for v in Variant::SCALE_FREE {
            for n in [1, 4, 16] {
                let r = run_scalefree(0.0, n, v).unwrap();
                assert_eq!((r.cos, r.sin), (1.0, 0.0));
            }
        }
        let r = run_scalefree(0.5f64.atan(), 1, Variant::ProposedO3).unwrap();
        assert_eq!((r.cos, r.sin), (0.875, 0.4375));
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(run_conventional(0.1, 0), Err(Error::InvalidIterations { .. })));
        assert!(matches!(run_conventional(0.1, 33), Err(Error::InvalidIterations { .. })));
        assert!(matches!(run_scalefree(0.1, 17, Variant::ProposedO3), Err(Error::InvalidIterations { .. })));
        assert!(matches!(run_scalefree(0.1, 4, Variant::Conventional), Err(Error::NoCoefficients(_))));
        assert!(matches!(run_conventional(1.0, 4), Err(Error::AngleOutOfRange(_))));
        assert!(matches!(run_scalefree(f64::NAN, 4, Variant::ProposedO3), Err(Error::NonFinite(_))));
    }

    #[test]
    fn single_step_keeps_exact_tangent() {
        for v in [Variant::ProposedO3, Variant::ProposedO5] {
            for k in 1..=16u32 {
                let r = run_scalefree(elementary_angle(k), 1, v).unwrap();
                assert_eq!(r.sin / r.cos, 2f64.powi(-(k as i32)), "{v} k={k}");
            }
        }
    }

    #[test]
    fn magnitude_drift_bounded_by_omitted_terms() {
        // |c + i s| for O5 differs from 1 by at most the first omitted terms.
        for theta in grid(64) {
            let mut s = CordicState::unit(theta);
            let mut bound = 0.0;
            for _ in 0..5 {
                if s.z == 0.0 {
                    break;
                }
                let k = IndexRule::RoundedLog.select(s.z).unwrap();
                let x = 2f64.powi(-(k as i32));
                bound += 5.0 / 16.0 * x.powi(6) + 5.0 / 16.0 * x.powi(7);
                s = rotate_scalefree(s, 1, Variant::ProposedO5, IndexRule::RoundedLog).unwrap();
            }
            assert!((s.magnitude() - 1.0).abs() <= bound + 1e-15, "theta={theta}");
        }
    }

    #[test]
    fn dominance_of_proposed_sine() {
        for n in [3, 4, 5] {
            let mse = |v| {
                grid(512)
                    .map(|t| (run_scalefree(t, n, v).unwrap().sin - t.sin()).powi(2))
                    .sum::<f64>()
                    / 512.0
            };
            let (a, b, o3) = (mse(Variant::CompetitorA), mse(Variant::CompetitorB), mse(Variant::ProposedO3));
            assert!(o3 < b && b < a, "n={n}: {o3} {b} {a}");
        }
    }

    #[test]
    fn deterministic() {
        for theta in grid(32) {
            let a = run_scalefree(theta, 5, Variant::ProposedO5).unwrap();
            let b = run_scalefree(theta, 5, Variant::ProposedO5).unwrap();
            assert_eq!(a.cos.to_bits(), b.cos.to_bits());
            assert_eq!(a.sin.to_bits(), b.sin.to_bits());
        }
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_argument(FRAC_PI_3).unwrap();
        assert!((r.reduced - FRAC_PI_6).abs() < 1e-15);
        assert!(r.reconstruction.swap);
        let r = reduce_argument(-FRAC_PI_4).unwrap();
        assert!((r.reduced - FRAC_PI_4).abs() < 1e-15);
        assert!(r.reconstruction.negate_sin && !r.reconstruction.negate_cos);
        let r = reduce_argument(7.0).unwrap();
        assert_eq!(r.octant, 0);
        assert!((r.reduced - (7.0 - TAU)).abs() < 1e-15);
        assert!((r.reduced - 0.7168).abs() < 1e-4);
        assert!(reduce_argument(f64::INFINITY).is_err());
    }

    proptest! {
        #[test]
        fn reduction_reconstructs_reference(theta in -50.0f64..50.0) {
            let r = reduce_argument(theta).unwrap();
            prop_assert!((0.0..=FRAC_PI_4).contains(&r.reduced));
            let (c, s) = reference_sincos(r.reduced);
            let (c, s) = reconstruct(r.octant, c, s);
            let (rc, rs) = reference_sincos(theta);
            prop_assert!((c - rc).abs() <= 1e-12 && (s - rs).abs() <= 1e-12);
        }
    }
}
