//! Exact closed forms `r · π^k` built from Euler numbers, and the numerical
//! check of the Hurwitz-zeta relation at odd arguments.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, euler_numbers, euler_star_numbers, EulerTable, ExactInt, ExactRational};
use crate::precision::{pi_at, rounding_allowance, PrecReal, GUARD_BITS};
use crate::report::VerificationReport;
use crate::series::{hurwitz_zeta, zeta_direct, SeriesValue};

/// `coefficient · π^pi_power`, held exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPolyValue {
    pub coefficient: ExactRational,
    pub pi_power: u32,
}

impl PiPolyValue {
    pub fn new(coefficient: ExactRational, pi_power: u32) -> Self {
        PiPolyValue { coefficient, pi_power }
    }

    pub fn zero() -> Self {
        PiPolyValue { coefficient: ExactRational::zero(), pi_power: 0 }
    }

    /// Numerical value at `precision_bits`, with a bound covering every rounding.
    pub fn evaluate(&self, precision_bits: usize) -> SeriesValue {
        let wp = precision_bits + GUARD_BITS;
        let c = PrecReal::from_ratio(&self.coefficient, wp);
        let pk = pi_at(wp).powi(self.pi_power);
        let value = &c * &pk;
        let ops = 4 + 2 * (32 - self.pi_power.leading_zeros()) as u64;
        let raw_bound = rounding_allowance(ops, &value, wp);
        let rounded = value.with_precision(precision_bits);
        let bound = &raw_bound + &rounding_allowance(1, &value, precision_bits);
        SeriesValue { value: rounded, error_bound: bound, terms_used: 0 }
    }

    /// `coefficient` as `"p/q"`.
    pub fn coefficient_string(&self) -> String {
        format!("{}/{}", self.coefficient.numer(), self.coefficient.denom())
    }
}

impl Serialize for PiPolyValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PiPolyValue", 2)?;
        st.serialize_field("coeff", &self.coefficient_string())?;
        st.serialize_field("pi_power", &self.pi_power)?;
        st.end()
    }
}

pub(crate) fn factorial(n: u64) -> ExactInt {
    (1..=n).fold(ExactInt::one(), |acc, k| acc * k)
}

fn ratio(num: ExactInt, den: ExactInt) -> ExactRational {
    ExactRational::new(num, den)
}

fn pow2(e: u32) -> ExactInt {
    ExactInt::one() << e
}

/// `(-1)^n` as an exact integer.
pub(crate) fn parity_sign(n: u64) -> ExactInt {
    if n % 2 == 0 {
        ExactInt::one()
    } else {
        -ExactInt::one()
    }
}

/// `sum_{l=0}^{n} C(2n, 2l) E_{2l} E_{2n-2l}`.
pub fn euler_convolution(n: u64, table: &EulerTable) -> ExactInt {
    (0..=n)
        .map(|l| {
            let a = table.get(2 * l as usize).expect("table covers 2n");
            let b = table.get((2 * n - 2 * l) as usize).expect("table covers 2n");
            binomial(2 * n, 2 * l).expect("2l <= 2n") * a * b
        })
        .sum()
}

/// `β(2n+1) = (-1)^n E_{2n} / (2 · (2n)! · 2^{2n+1}) · π^{2n+1}`.
pub fn beta_closed(n: u32) -> PiPolyValue {
    let table = euler_numbers(2 * n as usize);
    let e = table.get(2 * n as usize).unwrap();
    let num = parity_sign(n as u64) * e;
    let den = 2 * factorial(2 * n as u64) * pow2(2 * n + 1);
    PiPolyValue::new(ratio(num, den), 2 * n + 1)
}

/// `ζ(2n+2)` from the Euler-number convolution:
/// `(-1)^n / ((1 - 2^{-(2n+2)}) (2n+1)!) · (1/2) · (π/2)^{2n+2} · sum_l C(2n,2l) E_{2l} E_{2n-2l}`.
pub fn zeta_even_closed(n: u32) -> PiPolyValue {
    let table = euler_numbers(2 * n as usize);
    let conv = euler_convolution(n as u64, &table);
    let k = 2 * n + 2;
    // 1 / (1 - 2^{-k}) = 2^k / (2^k - 1); combined with (1/2)(1/2)^k this leaves 1 / (2 (2^k - 1))
    let num = parity_sign(n as u64) * conv;
    let den = 2 * (pow2(k) - ExactInt::one()) * factorial(2 * n as u64 + 1);
    PiPolyValue::new(ratio(num, den), k)
}

/// `ζ(2n) = (-1)^{n-1} (2π)^{2n} / (4 (2n-1)! (1 - 4^n)) · E*_{2n-1}` for `n >= 1`.
pub fn zeta_even_via_estar(n: u32) -> Result<PiPolyValue> {
    if n == 0 {
        return Err(Error::Domain("zeta_even_via_estar needs n >= 1".into()));
    }
    let estar = euler_star_numbers(2 * n as usize - 1);
    let e = &estar[2 * n as usize - 1];
    let sign = parity_sign(n as u64 - 1);
    let num = sign * pow2(2 * n);
    let den = 4 * factorial(2 * n as u64 - 1) * (ExactInt::one() - pow2(2 * n));
    Ok(PiPolyValue::new(ratio(num, den) * e, 2 * n))
}

/// Right side of the Hurwitz relation at `s = 2n+1`:
/// `(-1)^n E_{2n} / (2 (2n)!) · π^{2n+1} · 2^{2n}`.
pub fn eq9_rhs(n: u32) -> PiPolyValue {
    let table = euler_numbers(2 * n as usize);
    let e = table.get(2 * n as usize).unwrap();
    let num = parity_sign(n as u64) * e * pow2(2 * n);
    let den = 2 * factorial(2 * n as u64);
    PiPolyValue::new(ratio(num, den), 2 * n + 1)
}

/// The integer `2^{2n} (1 - 2^{2n+1})` multiplying `ζ(2n+1)`.
pub fn eq9_zeta_coefficient(n: u32) -> BigInt {
    pow2(2 * n) * (ExactInt::one() - pow2(2 * n + 1))
}

/// Checks `ζ(2n+1, 1/4) + 2^{2n}(1 - 2^{2n+1}) ζ(2n+1) = (-1)^n E_{2n} π^{2n+1} 2^{2n} / (2 (2n)!)`.
///
/// The left side uses the Hurwitz series and a direct odd-zeta sum, each
/// with its own certified bound; the terms are budgeted so that the left
/// bound stays below half of `tolerance`.
pub fn verify_eq9(n: u32, precision_bits: usize, tolerance: f64) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::Domain("both sides diverge at n = 0 (pole of zeta at 1); use n >= 1".into()));
    }
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let s = 2 * n + 1;
    let coeff = eq9_zeta_coefficient(n);
    let quarter = PrecReal::pow2(-2, precision_bits);
    let h_target = PrecReal::from_f64(tolerance / 4.0, precision_bits);
    let coeff_abs = coeff.abs().to_string().parse::<f64>().expect("finite coefficient");
    let z_target = PrecReal::from_f64(tolerance / (4.0 * coeff_abs), precision_bits);

    let hurwitz = hurwitz_zeta(s as f64, &quarter, &h_target)?;
    let zeta = zeta_direct(s, &z_target)?;
    let lhs = hurwitz.add(&zeta.mul_by(&SeriesValue::exact(PrecReal::from_int(&coeff, precision_bits))));
    let rhs = eq9_rhs(n).evaluate(precision_bits);
    let tol = PrecReal::from_f64(tolerance, precision_bits);
    Ok(VerificationReport::compare("hurwitz-quarter", n, lhs, rhs).require_within(&tol))
}
