//! Micro-rotation coefficient sets.
//!
//! Every scale-free scheme replaces the rotation by `theta_k = atan(2^-k)`
//! with `[[c_k, -s_k], [s_k, c_k]]`, where `c_k` and `s_k` are sums of
//! signed powers of two so that the datapath needs only shifts and adds.
//! The proposed coefficients are derived at first use from the truncated
//! compositions `cos(atan x)` and `sin(atan x)`, then evaluated at
//! `x = 2^-k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::refmath::{compose_truncate, taylor_series, RationalPoly, SeriesFn};

/// Number of micro-rotation indices (ROM depth).
pub const INDEX_COUNT: u32 = 32;

/// Smallest index a scale-free micro-rotation uses. At `k = 0` the
/// truncated polynomials are evaluated at `x = 1`, where the order-3
/// cosine collapses to 0.5, so selected indices are floored at 1.
pub const SCALE_FREE_MIN_INDEX: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Conventional,
    CompetitorA,
    CompetitorB,
    ProposedO3,
    ProposedO4,
    ProposedO5,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Conventional,
        Variant::CompetitorA,
        Variant::CompetitorB,
        Variant::ProposedO3,
        Variant::ProposedO4,
        Variant::ProposedO5,
    ];

    pub const SCALE_FREE: [Variant; 5] = [
        Variant::CompetitorA,
        Variant::CompetitorB,
        Variant::ProposedO3,
        Variant::ProposedO4,
        Variant::ProposedO5,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Variant::Conventional => "conventional",
            Variant::CompetitorA => "competitor-a",
            Variant::CompetitorB => "competitor-b",
            Variant::ProposedO3 => "proposed-o3",
            Variant::ProposedO4 => "proposed-o4",
            Variant::ProposedO5 => "proposed-o5",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Variant::Conventional => "conventional CORDIC, sequential k with final gain compensation",
            Variant::CompetitorA => "scale-free, c = 1 - 2^(-2k-1), s = 2^-k - 2^(-3k-3)",
            Variant::CompetitorB => "scale-free, c = 1 - 2^(-2k-1), s = 2^-k - 2^(-3k-2)",
            Variant::ProposedO3 => "scale-free, composed Taylor truncated at degree 3",
            Variant::ProposedO4 => "scale-free, composed Taylor truncated at degree 4",
            Variant::ProposedO5 => "scale-free, composed Taylor truncated at degree 5",
        }
    }

    pub fn is_scale_free(self) -> bool {
        self != Variant::Conventional
    }

    /// Truncation degree for the composed-Taylor variants.
    pub fn taylor_order(self) -> Option<usize> {
        match self {
            Variant::ProposedO3 => Some(3),
            Variant::ProposedO4 => Some(4),
            Variant::ProposedO5 => Some(5),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let ids: Vec<_> = Variant::ALL.iter().map(|v| v.id()).collect();
                format!("unknown variant '{s}' (expected one of {})", ids.join(", "))
            })
    }
}

/// One addend `sign * 2^-shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShiftTerm {
    pub negative: bool,
    pub shift: u32,
}

impl ShiftTerm {
    pub fn plus(shift: u32) -> Self {
        Self { negative: false, shift }
    }

    pub fn minus(shift: u32) -> Self {
        Self { negative: true, shift }
    }
}

/// `sum(sign_i * 2^-shift_i)`, sorted by shift, at most one term per shift.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ShiftAddForm {
    terms: Vec<ShiftTerm>,
}

impl ShiftAddForm {
    /// Normalizes: equal-shift pairs of opposite sign cancel, equal-shift
    /// pairs of the same sign merge into one term one position up.
    pub fn new(terms: impl IntoIterator<Item = ShiftTerm>) -> Self {
        let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
        for t in terms {
            *counts.entry(t.shift).or_default() += if t.negative { -1 } else { 1 };
        }
        let mut out = Vec::new();
        while let Some((shift, count)) = counts.pop_last() {
            if count == 0 {
                continue;
            }
            let carry = count / 2;
            let rest = count - 2 * carry;
            if carry != 0 && shift > 0 {
                *counts.entry(shift - 1).or_default() += carry;
            } else {
                // 2^0 cannot carry further up; keep the repeated unit terms.
                for _ in 0..carry.abs() * 2 {
                    out.push(ShiftTerm { negative: carry < 0, shift });
                }
            }
            if rest != 0 {
                out.push(ShiftTerm { negative: rest < 0, shift });
            }
        }
        out.sort_by_key(|t| (t.shift, t.negative));
        Self { terms: out }
    }

    /// Shift-add form of `coeff * 2^-extra_shift` for a dyadic `coeff`,
    /// one term per set bit of the numerator.
    pub fn from_dyadic(coeff: &BigRational, extra_shift: u32) -> Result<Self> {
        if coeff.is_zero() {
            return Ok(Self::default());
        }
        let denom = coeff.denom();
        let denom_bits = denom.bits() - 1;
        if *denom != BigInt::one() << denom_bits {
            return Err(Error::NotDyadic(coeff.to_string()));
        }
        let negative = coeff.is_negative();
        let numer = coeff.numer().abs();
        let mut terms = Vec::new();
        for bit in 0..numer.bits() {
            if numer.bit(bit) {
                let shift = i64::from(extra_shift) + denom_bits as i64 - bit as i64;
                let shift = u32::try_from(shift)
                    .map_err(|_| Error::NotDyadic(format!("{coeff} * 2^-{extra_shift}")))?;
                terms.push(ShiftTerm { negative, shift });
            }
        }
        Ok(Self::new(terms))
    }

    pub fn terms(&self) -> &[ShiftTerm] {
        &self.terms
    }

    pub fn value(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let v = 2f64.powi(-(t.shift as i32));
                if t.negative { -v } else { v }
            })
            .sum()
    }

    pub fn to_rational(&self) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, t| {
            let v = BigRational::new(BigInt::one(), BigInt::one() << t.shift);
            if t.negative { acc - v } else { acc + v }
        })
    }
}

impl fmt::Display for ShiftAddForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            match (i, t.negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "2^-{}", t.shift)?;
        }
        Ok(())
    }
}

/// Elementary rotation `theta_k = atan(2^-k)` with one variant's approximants.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroRotation {
    pub k: u32,
    pub angle: f64,
    pub cos_approx: ShiftAddForm,
    pub sin_approx: ShiftAddForm,
    /// `cos_approx.value()`, cached for the float engine.
    pub cos_value: f64,
    /// `sin_approx.value()`, cached for the float engine.
    pub sin_value: f64,
}

/// Elementary angle `atan(2^-k)` in double precision.
pub fn elementary_angle(k: u32) -> f64 {
    2f64.powi(-(k as i32)).atan()
}

/// Shift-add form of `poly(2^-k)` for a polynomial with dyadic coefficients.
fn poly_at_power_of_two(poly: &RationalPoly, k: u32) -> Result<ShiftAddForm> {
    let mut terms = Vec::new();
    for (degree, c) in poly.coeffs().iter().enumerate() {
        let form = ShiftAddForm::from_dyadic(c, degree as u32 * k)?;
        terms.extend_from_slice(form.terms());
    }
    Ok(ShiftAddForm::new(terms))
}

/// Truncated `cos(atan x)` and `sin(atan x)` for a proposed variant's order.
pub fn composed_polys(order: usize) -> (RationalPoly, RationalPoly) {
    let atan = taylor_series(SeriesFn::Arctan, order);
    let cos = compose_truncate(&taylor_series(SeriesFn::Cos, order), &atan, order)
        .expect("arctan series has no constant term");
    let sin = compose_truncate(&taylor_series(SeriesFn::Sin, order), &atan, order)
        .expect("arctan series has no constant term");
    (cos, sin)
}

fn build(variant: Variant, k: u32) -> Result<MicroRotation> {
    let (cos_approx, sin_approx) = match variant {
        Variant::Conventional => return Err(Error::NoCoefficients(variant)),
        Variant::CompetitorA => (
            ShiftAddForm::new([ShiftTerm::plus(0), ShiftTerm::minus(2 * k + 1)]),
            ShiftAddForm::new([ShiftTerm::plus(k), ShiftTerm::minus(3 * k + 3)]),
        ),
        Variant::CompetitorB => (
            ShiftAddForm::new([ShiftTerm::plus(0), ShiftTerm::minus(2 * k + 1)]),
            ShiftAddForm::new([ShiftTerm::plus(k), ShiftTerm::minus(3 * k + 2)]),
        ),
        Variant::ProposedO3 | Variant::ProposedO4 | Variant::ProposedO5 => {
            let order = variant.taylor_order().unwrap_or(3);
            let (cos, sin) = composed_polys(order);
            (poly_at_power_of_two(&cos, k)?, poly_at_power_of_two(&sin, k)?)
        }
    };
    Ok(MicroRotation {
        k,
        angle: elementary_angle(k),
        cos_value: cos_approx.value(),
        sin_value: sin_approx.value(),
        cos_approx,
        sin_approx,
    })
}

fn table(variant: Variant) -> Result<&'static [MicroRotation]> {
    static TABLES: OnceLock<Vec<Vec<MicroRotation>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        Variant::SCALE_FREE
            .iter()
            .map(|&v| {
                (0..INDEX_COUNT)
                    .map(|k| build(v, k).expect("built-in coefficient sets are dyadic"))
                    .collect()
            })
            .collect()
    });
    let slot = Variant::SCALE_FREE
        .iter()
        .position(|&v| v == variant)
        .ok_or(Error::NoCoefficients(variant))?;
    Ok(&tables[slot])
}

/// Coefficients of `variant` at index `k`.
pub fn coefficients(variant: Variant, k: u32) -> Result<&'static MicroRotation> {
    if k >= INDEX_COUNT {
        return Err(Error::IndexOutOfRange(k));
    }
    Ok(&table(variant)?[k as usize])
}

/// Closed-form `(c_k, s_k)` as exact rationals, independent of the
/// series machinery.
pub fn closed_form(variant: Variant, k: u32) -> Result<(BigRational, BigRational)> {
    let p = |e: u32| BigRational::new(BigInt::one(), BigInt::one() << e);
    let three = BigRational::from_integer(3.into());
    let one = BigRational::one();
    let base_cos = &one - p(2 * k + 1);
    Ok(match variant {
        Variant::Conventional => return Err(Error::NoCoefficients(variant)),
        Variant::CompetitorA => (base_cos, p(k) - p(3 * k + 3)),
        Variant::CompetitorB => (base_cos, p(k) - p(3 * k + 2)),
        Variant::ProposedO3 => (base_cos, p(k) - p(3 * k + 1)),
        Variant::ProposedO4 => (base_cos + &three * p(4 * k + 3), p(k) - p(3 * k + 1)),
        Variant::ProposedO5 => (
            base_cos + &three * p(4 * k + 3),
            p(k) - p(3 * k + 1) + &three * p(5 * k + 3),
        ),
    })
}

/// Listing of every variant's closed-form coefficients.
pub fn list_variants() -> String {
    let mut out = String::new();
    for v in Variant::ALL {
        out.push_str(&format!("{:<14} {}\n", v.id(), v.description()));
        let (c, s) = match v {
            Variant::Conventional => (
                "1 (gain K folded into the output)".to_string(),
                "2^-k".to_string(),
            ),
            Variant::CompetitorA => ("1 - 2^(-2k-1)".into(), "2^-k - 2^(-3k-3)".into()),
            Variant::CompetitorB => ("1 - 2^(-2k-1)".into(), "2^-k - 2^(-3k-2)".into()),
            Variant::ProposedO3 => ("1 - 2^(-2k-1)".into(), "2^-k - 2^(-3k-1)".into()),
            Variant::ProposedO4 => (
                "1 - 2^(-2k-1) + 3*2^(-4k-3)".into(),
                "2^-k - 2^(-3k-1)".into(),
            ),
            Variant::ProposedO5 => (
                "1 - 2^(-2k-1) + 3*2^(-4k-3)".into(),
                "2^-k - 2^(-3k-1) + 3*2^(-5k-3)".into(),
            ),
        };
        out.push_str(&format!("{:<14}   c_k = {c}\n", ""));
        out.push_str(&format!("{:<14}   s_k = {s}\n", ""));
    }
    out
}

/// `(c_k, s_k)` evaluated in double precision.
pub fn coefficient_values(variant: Variant, k: u32) -> Result<(f64, f64)> {
    let m = coefficients(variant, k)?;
    Ok((m.cos_value, m.sin_value))
}
