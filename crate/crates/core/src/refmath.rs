//! Reference oracle: exact rational Maclaurin series and their truncated
//! composition, double-precision sin/cos, the conventional gain constant and
//! 2x2 rotation matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Functions whose Maclaurin series are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFn {
    Sin,
    Cos,
    Arctan,
}

/// Univariate polynomial with exact rational coefficients; `coeffs[i]`
/// multiplies `x^i`. Trailing zeros are always stripped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    /// Builds a polynomial from `(numerator, denominator)` pairs.
    pub fn from_ratios(ratios: &[(i64, i64)]) -> Self {
        Self::new(
            ratios
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![BigRational::one()])
    }

    /// The polynomial `x`.
    pub fn identity() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Product with every term above `order` discarded.
    pub fn mul_truncated(&self, other: &Self, order: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(order + 1);
        let mut out = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).cloned().collect())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                _ => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Maclaurin polynomial of `f` truncated at total degree `order`.
pub fn taylor_series(f: SeriesFn, order: usize) -> RationalPoly {
    let coeffs = (0..=order)
        .map(|d| {
            let sign = |m: usize| if m.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
            match f {
                SeriesFn::Sin if d % 2 == 1 => {
                    BigRational::new(sign(d / 2), factorial(d as u32))
                }
                SeriesFn::Cos if d % 2 == 0 => {
                    BigRational::new(sign(d / 2), factorial(d as u32))
                }
                SeriesFn::Arctan if d % 2 == 1 => {
                    BigRational::new(sign(d / 2), BigInt::from(d))
                }
                _ => BigRational::zero(),
            }
        })
        .collect();
    RationalPoly::new(coeffs)
}

/// Substitutes `inner` into `outer` and keeps terms up to degree `order`.
///
/// `inner` must vanish at zero, otherwise high-degree terms of `outer`
/// would feed the low degrees and truncating the operands first would be
/// unsound.
pub fn compose_truncate(
    outer: &RationalPoly,
    inner: &RationalPoly,
    order: usize,
) -> Result<RationalPoly> {
    if !inner.coeff(0).is_zero() {
        return Err(Error::NonZeroConstant);
    }
    let inner = inner.truncate(order);
    // Horner in the ring of polynomials truncated at `order`.
    let mut acc = RationalPoly::zero();
    for c in outer.coeffs().iter().rev() {
        acc = acc
            .mul_truncated(&inner, order)
            .add(&RationalPoly::new(vec![c.clone()]));
    }
    Ok(acc.truncate(order))
}

/// `(cos theta, sin theta)` from the platform's libm.
pub fn reference_sincos(theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (c, s)
}

/// Conventional CORDIC gain compensation `prod_{k=0}^{n-1} 1/sqrt(1 + 2^-2k)`.
pub fn scale_factor(n: usize) -> f64 {
    (0..n)
        .map(|k| 1.0 / (1.0 + 4f64.powi(-(k as i32))).sqrt())
        .product()
}

/// Row-major 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RotationMatrix2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// Exact rotation by `theta`.
    pub fn rotation(theta: f64) -> Self {
        let (c, s) = reference_sincos(theta);
        Self::new(c, -s, s, c)
    }

    /// Approximate rotation built from a cosine/sine pair, `[[c, -s], [s, c]]`.
    pub fn from_cos_sin(c: f64, s: f64) -> Self {
        Self::new(c, -s, s, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (self.a * x + self.b * y, self.c * x + self.d * y)
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sin_and_arctan_series() {
        assert_eq!(
            taylor_series(SeriesFn::Sin, 5),
            RationalPoly::from_ratios(&[(0, 1), (1, 1), (0, 1), (-1, 6), (0, 1), (1, 120)])
        );
        assert_eq!(
            taylor_series(SeriesFn::Arctan, 5),
            RationalPoly::from_ratios(&[(0, 1), (1, 1), (0, 1), (-1, 3), (0, 1), (1, 5)])
        );
        assert_eq!(taylor_series(SeriesFn::Cos, 0), RationalPoly::one());
        assert_eq!(taylor_series(SeriesFn::Cos, 4).coeff(4), q(1, 24));
        // order 16 needs 16! in a denominator
        assert_eq!(taylor_series(SeriesFn::Cos, 16).coeff(16), BigRational::new(1.into(), factorial(16)));
    }

    #[test]
    fn composed_cos_and_sin_of_arctan() {
        let atan = taylor_series(SeriesFn::Arctan, 5);
        let cos = compose_truncate(&taylor_series(SeriesFn::Cos, 5), &atan, 5).unwrap();
        let sin = compose_truncate(&taylor_series(SeriesFn::Sin, 5), &atan, 5).unwrap();
        assert_eq!(cos, RationalPoly::from_ratios(&[(1, 1), (0, 1), (-1, 2), (0, 1), (3, 8)]));
        assert_eq!(
            sin,
            RationalPoly::from_ratios(&[(0, 1), (1, 1), (0, 1), (-1, 2), (0, 1), (3, 8)])
        );
    }

    #[test]
    fn composition_with_identity_outer() {
        let p = RationalPoly::from_ratios(&[(0, 1), (2, 3), (-1, 7), (5, 2)]);
        assert_eq!(compose_truncate(&RationalPoly::identity(), &p, 3).unwrap(), p);
        assert_eq!(compose_truncate(&RationalPoly::identity(), &p, 5).unwrap(), p);
    }

    #[test]
    fn composition_rejects_constant_inner() {
        let inner = RationalPoly::from_ratios(&[(1, 2), (1, 1)]);
        assert!(matches!(
            compose_truncate(&RationalPoly::identity(), &inner, 3),
            Err(Error::NonZeroConstant)
        ));
    }

    #[test]
    fn truncating_operands_first_does_not_change_result() {
        // Expand the untruncated powers of the arctan series, then truncate.
        let atan = taylor_series(SeriesFn::Arctan, 5);
        let cos = taylor_series(SeriesFn::Cos, 5);
        let mut full = RationalPoly::zero();
        let mut power = RationalPoly::one();
        for c in cos.coeffs() {
            full = full.add(&power.scale(c));
            power = power.mul_truncated(&atan, 64);
        }
        assert_eq!(full.truncate(5), compose_truncate(&cos, &atan, 5).unwrap());
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let p = RationalPoly::from_ratios(&[(2, 4), (0, 1), (0, 3)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.coeff(0), q(1, 2));
        assert_eq!(p.coeff(0).denom(), &BigInt::from(2));
        assert_eq!(RationalPoly::from_ratios(&[(0, 1)]).degree(), None);
    }

    #[test]
    fn display_is_readable() {
        let p = RationalPoly::from_ratios(&[(1, 1), (0, 1), (-1, 2), (0, 1), (3, 8)]);
        assert_eq!(p.to_string(), "1 - 1/2*x^2 + 3/8*x^4");
    }

    #[test]
    fn ratio_of_exact_composed_functions_is_identity() {
        for i in 0..=100 {
            let x = f64::from(i) / 100.0;
            let (c, s) = reference_sincos(x.atan());
            if c != 0.0 {
                assert!((s / c - x).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn reference_values() {
        assert_eq!(reference_sincos(0.0), (1.0, 0.0));
        let (c, s) = reference_sincos(FRAC_PI_4);
        assert!((c - FRAC_1_SQRT_2).abs() < 1e-15 && (s - FRAC_1_SQRT_2).abs() < 1e-15);
        let (c, s) = reference_sincos(0.5f64.atan());
        let expected_c = 1.0 / 1.25f64.sqrt();
        assert!((c - expected_c).abs() < 1e-15);
        assert!((s - 0.5 * expected_c).abs() < 1e-15);
        assert!((c - 0.894_427_190_9).abs() < 1e-10 && (s - 0.447_213_595_4).abs() < 1e-10);
    }

    #[test]
    fn scale_factor_values() {
        assert!((scale_factor(1) - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((scale_factor(2) - FRAC_1_SQRT_2 / 1.25f64.sqrt()).abs() < 1e-15);
        assert!((scale_factor(2) - 0.632_455_532_0).abs() < 1e-10);
        assert!((scale_factor(32) - 0.60725).abs() < 5e-6);
        // factors round to 1.0 in f64 once 4^-k drops below the ulp of 1
        for n in 1..20 {
            assert!(scale_factor(n + 1) < scale_factor(n));
        }
        for n in 20..40 {
            assert!(scale_factor(n + 1) <= scale_factor(n));
        }
        assert!((scale_factor(40) - scale_factor(32)).abs() < 1e-9);
    }

    #[test]
    fn rotation_matrices_compose() {
        for i in 0..20 {
            let a = -1.3 + 0.17 * f64::from(i);
            let b = 0.9 - 0.11 * f64::from(i);
            let prod = RotationMatrix2::rotation(a).mul(&RotationMatrix2::rotation(b));
            assert!(prod.max_abs_diff(&RotationMatrix2::rotation(a + b)) <= 1e-14);
            assert!((RotationMatrix2::rotation(a).determinant() - 1.0).abs() <= 1e-15);
        }
    }
}
