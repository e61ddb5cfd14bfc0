//! Arbitrary-precision reals with a declared precision, backed by
//! `astro-float`.
//!
//! Every arithmetic result is correctly rounded to nearest at the larger of
//! the operands' precisions, so each operation contributes a relative error
//! of at most `2^(1 - precision_bits)`. Callers that certify bounds count
//! operations and use [`unit_roundoff`] to turn the count into an allowance.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest precision accepted anywhere in the crate.
pub const MIN_PRECISION_BITS: usize = 64;
/// Precision used when the caller does not choose one.
pub const DEFAULT_PRECISION_BITS: usize = 128;
/// Extra bits carried internally over the caller's precision.
pub const GUARD_BITS: usize = 32;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

#[derive(Clone)]
pub struct PrecReal {
    value: BigFloat,
    precision_bits: usize,
}

impl PrecReal {
    fn wrap(value: BigFloat, precision_bits: usize) -> Self {
        debug_assert!(!value.is_nan(), "NaN escaped into PrecReal: {:?}", value.err());
        PrecReal { value, precision_bits }
    }

    pub fn zero(precision_bits: usize) -> Self {
        Self::wrap(BigFloat::from_u64(0, precision_bits), precision_bits)
    }

    pub fn one(precision_bits: usize) -> Self {
        Self::from_u64(1, precision_bits)
    }

    pub fn from_u64(v: u64, precision_bits: usize) -> Self {
        Self::wrap(BigFloat::from_u64(v, precision_bits), precision_bits)
    }

    pub fn from_i64(v: i64, precision_bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(v, precision_bits), precision_bits)
    }

    /// Exact conversion of a finite `f64` (rounded only if `precision_bits < 53`).
    pub fn from_f64(v: f64, precision_bits: usize) -> Self {
        assert!(v.is_finite(), "non-finite f64 {v}");
        Self::wrap(BigFloat::from_f64(v, precision_bits), precision_bits)
    }

    /// `v` rounded to `precision_bits`.
    pub fn from_int(v: &BigInt, precision_bits: usize) -> Self {
        let (sign, words) = v.to_u64_digits();
        if words.is_empty() {
            return Self::zero(precision_bits);
        }
        let s = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
        let exponent = (words.len() * 64) as i32;
        let mut bf = BigFloat::from_words(&words, s, exponent);
        bf.set_precision(precision_bits, RM).expect("valid precision");
        Self::wrap(bf, precision_bits)
    }

    /// `v` as numerator over denominator; at most three roundings.
    pub fn from_ratio(v: &BigRational, precision_bits: usize) -> Self {
        let wp = precision_bits + GUARD_BITS;
        let n = Self::from_int(v.numer(), wp);
        let d = Self::from_int(v.denom(), wp);
        (&n / &d).with_precision(precision_bits)
    }

    /// `2^e`, exact.
    pub fn pow2(e: i32, precision_bits: usize) -> Self {
        let mut bf = BigFloat::from_u64(1, precision_bits);
        bf.set_exponent(e + 1);
        Self::wrap(bf, precision_bits)
    }

    /// Parses a decimal string such as `3.14159e+0`.
    pub fn parse(s: &str, precision_bits: usize) -> Result<Self> {
        let bf = with_consts(|cc| BigFloat::parse(s, Radix::Dec, precision_bits, RM, cc));
        if bf.is_nan() || bf.is_inf() {
            return Err(Error::Domain(format!("cannot parse {s:?} as a finite real")));
        }
        Ok(Self::wrap(bf, precision_bits))
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    /// Same value rounded to a new declared precision.
    pub fn with_precision(&self, precision_bits: usize) -> Self {
        let mut bf = self.value.clone();
        bf.set_precision(precision_bits, RM).expect("valid precision");
        Self::wrap(bf, precision_bits)
    }

    fn op_prec(&self, other: &Self) -> usize {
        self.precision_bits.max(other.precision_bits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive() && !self.value.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.precision_bits)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.value.reciprocal(self.precision_bits, RM), self.precision_bits)
    }

    /// `self^n` by binary powering: at most `2 log2(n)` roundings.
    pub fn powi(&self, n: u32) -> Self {
        Self::wrap(self.value.powi(n as usize, self.precision_bits, RM), self.precision_bits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.precision_bits, RM), self.precision_bits)
    }

    pub fn cos(&self) -> Self {
        let p = self.precision_bits;
        Self::wrap(with_consts(|cc| self.value.cos(p, RM, cc)), p)
    }

    pub fn sin(&self) -> Self {
        let p = self.precision_bits;
        Self::wrap(with_consts(|cc| self.value.sin(p, RM, cc)), p)
    }

    pub fn exp(&self) -> Self {
        let p = self.precision_bits;
        Self::wrap(with_consts(|cc| self.value.exp(p, RM, cc)), p)
    }

    pub fn ln(&self) -> Self {
        let p = self.precision_bits;
        Self::wrap(with_consts(|cc| self.value.ln(p, RM, cc)), p)
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        let s = with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).expect("formattable");
        s.parse::<f64>().expect("decimal output parses as f64")
    }

    /// Decimal scientific notation with roughly `precision_bits * log10(2)` digits.
    pub fn to_decimal_string(&self) -> String {
        let mut bf = self.value.clone();
        bf.set_precision(self.precision_bits, RM).expect("valid precision");
        with_consts(|cc| bf.format(Radix::Dec, RM, cc)).expect("formattable")
    }

    /// Binary exponent `e` with `2^(e-1) <= |self| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        if self.value.is_zero() {
            None
        } else {
            self.value.exponent()
        }
    }
}

/// `pi` correctly rounded to `precision_bits`.
pub fn pi_at(precision_bits: usize) -> PrecReal {
    PrecReal::wrap(with_consts(|cc| cc.pi(precision_bits, RM)), precision_bits)
}

/// Per-operation relative rounding error `2^(1 - precision_bits)`.
pub fn unit_roundoff(precision_bits: usize) -> PrecReal {
    PrecReal::pow2(1 - precision_bits as i32, MIN_PRECISION_BITS)
}

/// Allowance for `ops` roundings on quantities of total magnitude `magnitude`,
/// doubled to absorb second-order terms.
pub fn rounding_allowance(ops: u64, magnitude: &PrecReal, precision_bits: usize) -> PrecReal {
    let scale = PrecReal::from_u64(ops.saturating_mul(2).max(2), MIN_PRECISION_BITS);
    &(&scale * &unit_roundoff(precision_bits)) * &magnitude.abs().with_precision(MIN_PRECISION_BITS)
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<'a> $tr<&'a PrecReal> for &'a PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: &'a PrecReal) -> PrecReal {
                let p = self.op_prec(rhs);
                PrecReal::wrap(self.value.$inner(&rhs.value, p, RM), p)
            }
        }

        impl $tr<PrecReal> for PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: PrecReal) -> PrecReal {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $tr<&'a PrecReal> for PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: &'a PrecReal) -> PrecReal {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for &PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        PrecReal::wrap(BigFloat::neg(&self.value), self.precision_bits)
    }
}

impl Neg for PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        -&self
    }
}

impl PartialEq for PrecReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for PrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl fmt::Debug for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{} bits]", self.to_decimal_string(), self.precision_bits)
    }
}

impl Serialize for PrecReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PrecReal", 2)?;
        st.serialize_field("decimal", &self.to_decimal_string())?;
        st.serialize_field("precision_bits", &self.precision_bits)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PrecReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            decimal: String,
            precision_bits: usize,
        }
        let raw = Raw::deserialize(deserializer)?;
        PrecReal::parse(&raw.decimal, raw.precision_bits).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459";

    #[test]
    fn pi_at_64_bits_matches_known_digits() {
        let pi = pi_at(64);
        let s = pi.to_decimal_string();
        assert!(s.starts_with("3.141592653589793238"), "{s}");
        let reference = PrecReal::parse(PI_DIGITS, 256).unwrap();
        let err = (&pi.with_precision(256) - &reference).abs();
        assert!(err <= PrecReal::pow2(-63, 64) * pi_at(64));
    }

    #[test]
    fn pi_refinement_is_consistent() {
        for p in [64usize, 128, 200, 333] {
            let lo = pi_at(p);
            let hi = pi_at(p + 64);
            let diff = (&hi - &lo.with_precision(p + 64)).abs();
            assert!(diff <= PrecReal::pow2(1 - p as i32, 64), "p = {p}");
        }
    }

    #[test]
    fn sine_of_pi_is_tiny() {
        for p in [64usize, 128, 256] {
            let s = pi_at(p).sin().abs();
            assert!(s <= PrecReal::pow2(4 - p as i32, 64), "p = {p}: {s}");
        }
    }

    #[test]
    fn integer_and_rational_conversion() {
        let big: BigInt = "123456789012345678901234567890123456789".parse().unwrap();
        let x = PrecReal::from_int(&big, 256);
        assert_eq!(x.to_decimal_string().replace('.', "")[..39], *"123456789012345678901234567890123456789");
        assert_eq!(PrecReal::from_int(&(-big.clone()), 256), -x);
        let third = PrecReal::from_ratio(&BigRational::new(1.into(), 3.into()), 128);
        let three = PrecReal::from_u64(3, 128);
        let err = (&(&third * &three) - &PrecReal::one(128)).abs();
        assert!(err <= unit_roundoff(126));
        assert!(PrecReal::from_int(&BigInt::from(0), 64).is_zero());
    }

    #[test]
    fn pow2_and_f64_roundtrip() {
        assert_eq!(PrecReal::pow2(-3, 64).to_f64(), 0.125);
        assert_eq!(PrecReal::pow2(10, 64).to_f64(), 1024.0);
        for v in [0.1, -2.5e-300, 1.0e300, std::f64::consts::PI] {
            assert_eq!(PrecReal::from_f64(v, 128).to_f64(), v);
        }
        assert_eq!(PrecReal::pow2(0, 64).exponent(), Some(1));
    }

    #[test]
    fn serde_round_trip() {
        let x = pi_at(128);
        let json = serde_json::to_string(&x).unwrap();
        assert!(json.contains("\"precision_bits\":128"));
        let back: PrecReal = serde_json::from_str(&json).unwrap();
        let err = (&back - &x).abs();
        assert!(err <= PrecReal::pow2(-120, 64));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(PrecReal::parse("not a number", 64).is_err());
    }
}
