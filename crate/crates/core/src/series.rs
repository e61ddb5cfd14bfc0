//! Rigorously truncated series at arbitrary precision.
//!
//! Every routine returns a [`SeriesValue`]: the value, a bound on the
//! distance to the true sum (truncation plus accumulated rounding), and the
//! number of terms that were summed. Entry points that take a target bound
//! pick the term count themselves and fail rather than return a bound that
//! misses the target.
//!
//! Two truncation strategies are used:
//!
//! * direct partial sums with the alternating-series remainder, or with an
//!   integral-comparison tail for positive convex terms;
//! * Cohen–Villegas–Zagier acceleration for alternating sums whose terms are
//!   moments `a_k = ∫₀¹ x^k dμ` of a positive measure. With
//!   `P_n(x) = T_n(1 - 2x)` the remainder is at most `S / P_n(-1) <= a_0 / d_n`
//!   where `d_n = T_n(3) >= (3 + √8)^n / 2`. Both `(2k+1)^{-s}` and `(k+1)^{-s}`
//!   have this form.
//!
//! The direct route is used whenever it needs only a handful of terms; the
//! accelerated route covers small exponents where direct truncation would
//! need astronomically many terms.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{rounding_allowance, PrecReal, GUARD_BITS, MIN_PRECISION_BITS};

/// Term budget for sums that converge only algebraically.
pub const TERM_BUDGET: u64 = 10_000_000;

/// A value with a certified bound `|true - value| <= error_bound`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: PrecReal,
    pub error_bound: PrecReal,
    pub terms_used: u64,
}

impl SeriesValue {
    /// A value known without truncation error.
    pub fn exact(value: PrecReal) -> Self {
        let p = value.precision_bits();
        SeriesValue { value, error_bound: PrecReal::zero(p), terms_used: 0 }
    }

    pub fn precision_bits(&self) -> usize {
        self.value.precision_bits()
    }

    pub fn lower(&self) -> PrecReal {
        &self.value - &self.error_bound
    }

    pub fn upper(&self) -> PrecReal {
        &self.value + &self.error_bound
    }

    /// True when `x` lies in `[value - bound, value + bound]`.
    pub fn contains(&self, x: &PrecReal) -> bool {
        (&self.value - x).abs() <= self.error_bound
    }

    /// `|self - other|`.
    pub fn gap(&self, other: &SeriesValue) -> PrecReal {
        (&self.value - &other.value).abs()
    }

    /// Both enclosures intersect, allowing one rounding for the subtraction.
    pub fn agrees_with(&self, other: &SeriesValue) -> bool {
        self.gap(other) <= comparison_budget(self, other)
    }

    /// Value times an exact-or-rounded factor `factor` with its own bound
    /// `factor_bound`, propagating `|ab - a'b'| <= |a|e_b + |b|e_a + e_a e_b`.
    pub fn mul_by(&self, factor: &SeriesValue) -> SeriesValue {
        let p = self.precision_bits().max(factor.precision_bits());
        let value = &self.value * &factor.value;
        let bound = &(&(&self.value.abs() * &factor.error_bound) + &(&factor.value.abs() * &self.error_bound))
            + &(&self.error_bound * &factor.error_bound);
        let bound = &bound + &rounding_allowance(1, &value, p);
        SeriesValue { value, error_bound: inflate(&bound), terms_used: self.terms_used + factor.terms_used }
    }

    /// Sum of two enclosures.
    pub fn add(&self, other: &SeriesValue) -> SeriesValue {
        let p = self.precision_bits().max(other.precision_bits());
        let value = &self.value + &other.value;
        let bound = &(&self.error_bound + &other.error_bound) + &rounding_allowance(1, &value, p);
        SeriesValue { value, error_bound: inflate(&bound), terms_used: self.terms_used + other.terms_used }
    }
}

/// `lhs.bound + rhs.bound + rounding of the subtraction`.
pub fn comparison_budget(lhs: &SeriesValue, rhs: &SeriesValue) -> PrecReal {
    let p = lhs.precision_bits().max(rhs.precision_bits());
    let magnitude = &lhs.value.abs() + &rhs.value.abs();
    &(&lhs.error_bound + &rhs.error_bound) + &rounding_allowance(1, &magnitude, p)
}

// Bounds are kept at low precision; nudge them upward so rounding the bound
// itself never makes it smaller than the quantity it bounds.
pub(crate) fn inflate(bound: &PrecReal) -> PrecReal {
    let b = bound.with_precision(MIN_PRECISION_BITS);
    &b + &(&b * &PrecReal::pow2(-40, MIN_PRECISION_BITS))
}

pub(crate) fn check_target(target: &PrecReal) -> Result<(usize, f64)> {
    if !target.is_positive() {
        return Err(Error::Domain(format!("target bound must be positive, got {target}")));
    }
    let p = target.precision_bits().max(MIN_PRECISION_BITS);
    Ok((p, target.to_f64()))
}

/// Rounds a working-precision result to the caller's precision and checks it
/// against the requested target.
pub(crate) fn finish(raw: SeriesValue, target: &PrecReal, precision_bits: usize) -> Result<SeriesValue> {
    let value = raw.value.with_precision(precision_bits);
    let rounding = rounding_allowance(1, &raw.value, precision_bits);
    let bound = inflate(&(&raw.error_bound + &rounding));
    if bound > *target {
        return Err(Error::Precision {
            requested: target.to_f64(),
            rounding: rounding.to_f64(),
            precision_bits,
        });
    }
    Ok(SeriesValue { value, error_bound: bound, terms_used: raw.terms_used })
}

/// `x^{-s}` for an integer or real exponent, with the number of roundings
/// (relative) it costs.
#[derive(Clone, Debug)]
enum Power {
    Int(u32),
    Real(PrecReal),
}

impl Power {
    fn from_f64(s: f64, wp: usize) -> Self {
        if s.fract() == 0.0 && s <= u32::MAX as f64 {
            Power::Int(s as u32)
        } else {
            Power::Real(PrecReal::from_f64(s, wp))
        }
    }

    fn as_f64(&self) -> f64 {
        match self {
            Power::Int(s) => *s as f64,
            Power::Real(s) => s.to_f64(),
        }
    }

    /// `x^{-s}`.
    fn neg_pow(&self, x: &PrecReal) -> PrecReal {
        match self {
            Power::Int(s) => x.powi(*s).recip(),
            Power::Real(s) => (-(&(s * &x.ln()))).exp(),
        }
    }

    /// `x^{1-s} / (s - 1)`, the integral of `t^{-s}` from `x` to infinity.
    fn tail_integral(&self, x: &PrecReal) -> PrecReal {
        let wp = x.precision_bits();
        let one = PrecReal::one(wp);
        match self {
            Power::Int(s) => {
                let denom = PrecReal::from_u64(*s as u64 - 1, wp);
                &x.powi(s - 1).recip() / &denom
            }
            Power::Real(s) => {
                let sm1 = s - &one;
                &(-(&(&sm1 * &x.ln()))).exp() / &sm1
            }
        }
    }

    /// Relative error, in roundings, of `neg_pow` for arguments up to `x_max`.
    fn ops(&self, x_max: f64) -> u64 {
        match self {
            Power::Int(s) => 2 * (32 - s.leading_zeros()) as u64 + 4,
            Power::Real(s) => 8 + (2.0 * s.to_f64().abs() * x_max.max(2.0).ln()).ceil() as u64,
        }
    }
}

/// `(2k+1)^{-s}` as a term generator.
fn odd_term(s: u32, wp: usize) -> impl Fn(u64) -> PrecReal {
    move |k| PrecReal::from_u64(2 * k + 1, wp).powi(s).recip()
}

/// `(k+1)^{-s}`.
fn natural_term(s: u32, wp: usize) -> impl Fn(u64) -> PrecReal {
    move |k| PrecReal::from_u64(k + 1, wp).powi(s).recip()
}

fn int_power_ops(s: u32) -> u64 {
    Power::Int(s).ops(0.0)
}

/// `sum_{k<terms} (-1)^k term(k)` with the absolute sum for rounding control.
fn alternating_partial(terms: u64, term: &impl Fn(u64) -> PrecReal, wp: usize) -> (PrecReal, PrecReal) {
    let mut sum = PrecReal::zero(wp);
    let mut abs_sum = PrecReal::zero(MIN_PRECISION_BITS);
    for k in 0..terms {
        let t = term(k);
        abs_sum = &abs_sum + &t.with_precision(MIN_PRECISION_BITS);
        sum = if k % 2 == 0 { &sum + &t } else { &sum - &t };
    }
    (sum, abs_sum)
}

/// Coefficients of the Cohen–Villegas–Zagier scheme for `n` terms: the
/// weights `c_k` (k < n) and the normaliser `d_n = T_n(3)`, all exact.
pub fn cvz_weights(n: usize) -> (Vec<BigInt>, BigInt) {
    // T_n(1 - 2x) as coefficient vectors in x.
    let mut prev: Vec<BigInt> = vec![BigInt::one()];
    let mut cur: Vec<BigInt> = vec![BigInt::one(), BigInt::from(-2)];
    if n == 0 {
        return (Vec::new(), BigInt::one());
    }
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j] += 2 * c;
            next[j + 1] -= 4 * c;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= c;
        }
        prev = cur;
        cur = next;
    }
    // P_n(x) = sum (-1)^j p_j x^j with p_j >= 0.
    let p: Vec<BigInt> = cur.iter().enumerate().map(|(j, c)| if j % 2 == 0 { c.clone() } else { -c }).collect();
    let d: BigInt = p.iter().sum();
    let mut weights = vec![BigInt::zero(); n];
    let mut tail = BigInt::zero();
    for k in (0..n).rev() {
        tail += &p[k + 1];
        weights[k] = tail.clone();
    }
    (weights, d)
}

/// Smallest `n` whose CVZ normaliser satisfies `a0 / d_n <= goal`.
fn cvz_terms_for(goal: &PrecReal, a0: &PrecReal) -> usize {
    let goal_f = goal.to_f64();
    let guess = if goal_f > 0.0 {
        ((2.0 * a0.to_f64() / goal_f).ln() / (3.0 + 8f64.sqrt()).ln()).ceil().max(1.0) as usize
    } else {
        1
    };
    let mut n = guess.saturating_sub(2).max(1);
    loop {
        let (_, d) = cvz_weights(n);
        let bound = a0 / &PrecReal::from_int(&d, MIN_PRECISION_BITS);
        if bound <= *goal {
            return n;
        }
        n += 1;
    }
}

/// Accelerated `sum_{k>=0} (-1)^k term(k)` using `n` terms, for totally
/// monotone terms with `term(0) <= a0`.
fn cvz_sum(n: usize, term: &impl Fn(u64) -> PrecReal, term_ops: u64, a0: &PrecReal, wp: usize) -> SeriesValue {
    let (weights, d) = cvz_weights(n);
    let d_real = PrecReal::from_int(&d, wp);
    let mut sum = PrecReal::zero(wp);
    let mut abs_sum = PrecReal::zero(MIN_PRECISION_BITS);
    for (k, c) in weights.iter().enumerate() {
        let w = &PrecReal::from_int(c, wp) / &d_real;
        let t = &w * &term(k as u64);
        abs_sum = &abs_sum + &t.with_precision(MIN_PRECISION_BITS);
        sum = if k % 2 == 0 { &sum + &t } else { &sum - &t };
    }
    let truncation = a0 / &PrecReal::from_int(&d, MIN_PRECISION_BITS);
    let rounding = rounding_allowance(n as u64 + term_ops + 4, &abs_sum, wp);
    SeriesValue { value: sum, error_bound: inflate(&(&truncation + &rounding)), terms_used: n as u64 }
}

fn check_beta_exponent(s: u32) -> Result<()> {
    if s < 1 {
        return Err(Error::Domain("Dirichlet beta series needs s >= 1".into()));
    }
    Ok(())
}

fn beta_partial_at(s: u32, terms: u64, wp: usize) -> SeriesValue {
    let term = odd_term(s, wp);
    let (sum, abs_sum) = alternating_partial(terms, &term, wp);
    let remainder = term(terms);
    let ops = terms + int_power_ops(s) + 2;
    let rounding = rounding_allowance(ops, &(&abs_sum + &remainder.with_precision(MIN_PRECISION_BITS)), wp);
    SeriesValue { value: sum, error_bound: inflate(&(&remainder + &rounding)), terms_used: terms }
}

/// `sum_{k<terms} (-1)^k / (2k+1)^s`, bounded by the first omitted term.
pub fn dirichlet_beta_partial(s: u32, terms: u64, precision_bits: usize) -> Result<SeriesValue> {
    check_beta_exponent(s)?;
    let wp = precision_bits + GUARD_BITS;
    let raw = beta_partial_at(s, terms, wp);
    let rounding = rounding_allowance(1, &raw.value, precision_bits);
    Ok(SeriesValue {
        value: raw.value.with_precision(precision_bits),
        error_bound: inflate(&(&raw.error_bound + &rounding)),
        terms_used: terms,
    })
}

/// Accelerated `β(s)` with `terms` CVZ terms.
pub fn dirichlet_beta_accelerated(s: u32, terms: usize, precision_bits: usize) -> Result<SeriesValue> {
    check_beta_exponent(s)?;
    let wp = precision_bits + GUARD_BITS;
    let raw = cvz_sum(terms, &odd_term(s, wp), int_power_ops(s), &PrecReal::one(MIN_PRECISION_BITS), wp);
    let rounding = rounding_allowance(1, &raw.value, precision_bits);
    Ok(SeriesValue {
        value: raw.value.with_precision(precision_bits),
        error_bound: inflate(&(&raw.error_bound + &rounding)),
        terms_used: raw.terms_used,
    })
}

fn beta_at(s: u32, goal: &PrecReal, wp: usize) -> SeriesValue {
    let one = PrecReal::one(MIN_PRECISION_BITS);
    let acc_terms = cvz_terms_for(goal, &one);
    let goal_f = goal.to_f64();
    let direct = ((2.0 / goal_f).powf(1.0 / s as f64) - 1.0) / 2.0;
    if direct.is_finite() && direct <= 4.0 * acc_terms as f64 {
        let mut k = direct.ceil().max(1.0) as u64;
        loop {
            let v = beta_partial_at(s, k, wp);
            if v.error_bound <= *goal || k > 8 * acc_terms as u64 {
                return v;
            }
            k += 1;
        }
    }
    cvz_sum(acc_terms, &odd_term(s, wp), int_power_ops(s), &one, wp)
}

/// Dirichlet beta `β(s) = sum_{k>=0} (-1)^k / (2k+1)^s` to within `target_bound`.
///
/// Precision is taken from `target_bound`; the work is done with
/// [`GUARD_BITS`] extra bits.
pub fn dirichlet_beta_series(s: u32, target_bound: &PrecReal) -> Result<SeriesValue> {
    check_beta_exponent(s)?;
    let (p, _) = check_target(target_bound)?;
    let wp = p + GUARD_BITS;
    let goal = target_bound * &PrecReal::pow2(-1, MIN_PRECISION_BITS);
    finish(beta_at(s, &goal, wp), target_bound, p)
}

/// Accelerated Dirichlet eta `η(s) = sum_{k>=0} (-1)^k / (k+1)^s`.
pub fn dirichlet_eta_accelerated(s: u32, terms: usize, precision_bits: usize) -> Result<SeriesValue> {
    if s < 1 {
        return Err(Error::Domain("Dirichlet eta series needs s >= 1".into()));
    }
    let wp = precision_bits + GUARD_BITS;
    let raw = cvz_sum(terms, &natural_term(s, wp), int_power_ops(s), &PrecReal::one(MIN_PRECISION_BITS), wp);
    let rounding = rounding_allowance(1, &raw.value, precision_bits);
    Ok(SeriesValue {
        value: raw.value.with_precision(precision_bits),
        error_bound: inflate(&(&raw.error_bound + &rounding)),
        terms_used: raw.terms_used,
    })
}

fn check_lambda_exponent(s: u32) -> Result<()> {
    if s < 2 {
        return Err(Error::Domain(format!("odd lambda series diverges at s = {s}; needs s >= 2")));
    }
    Ok(())
}

/// `∫_{K - 1/2}^∞ (2t+1)^{-s} dt = (2K)^{1-s} / (2(s-1))`. For convex
/// decreasing terms this dominates `sum_{k>=K} (2k+1)^{-s}`.
fn odd_lambda_tail(s: u32, terms: u64, wp: usize) -> PrecReal {
    let base = PrecReal::from_u64(2 * terms, wp);
    &base.powi(s - 1).recip() / &PrecReal::from_u64(2 * (s as u64 - 1), wp)
}

fn lambda_partial_at(s: u32, terms: u64, wp: usize) -> SeriesValue {
    let term = odd_term(s, wp);
    let mut sum = PrecReal::zero(wp);
    for k in 0..terms {
        sum = &sum + &term(k);
    }
    let tail = odd_lambda_tail(s, terms.max(1), wp);
    let ops = terms + int_power_ops(s) + 2;
    let rounding = rounding_allowance(ops, &(&sum + &tail), wp);
    SeriesValue { value: sum, error_bound: inflate(&(&tail + &rounding)), terms_used: terms }
}

/// `sum_{k<terms} 1/(2k+1)^s` with an integral-comparison tail bound.
pub fn odd_lambda_partial(s: u32, terms: u64, precision_bits: usize) -> Result<SeriesValue> {
    check_lambda_exponent(s)?;
    if terms == 0 {
        return Err(Error::Domain("odd lambda partial sum needs at least one term".into()));
    }
    let wp = precision_bits + GUARD_BITS;
    let raw = lambda_partial_at(s, terms, wp);
    let rounding = rounding_allowance(1, &raw.value, precision_bits);
    Ok(SeriesValue {
        value: raw.value.with_precision(precision_bits),
        error_bound: inflate(&(&raw.error_bound + &rounding)),
        terms_used: terms,
    })
}

/// `(1 - 2^{-s}) / (1 - 2^{1-s})`, the factor turning `η(s)` into `λ(s)`.
fn eta_to_lambda_factor(s: u32, wp: usize) -> PrecReal {
    let one = PrecReal::one(wp);
    let num = &one - &PrecReal::pow2(-(s as i32), wp);
    let den = &one - &PrecReal::pow2(1 - s as i32, wp);
    &num / &den
}

fn lambda_at(s: u32, goal: &PrecReal, wp: usize) -> SeriesValue {
    let one = PrecReal::one(MIN_PRECISION_BITS);
    // the factor is at most 3/2 for s >= 2
    let eta_goal = &(goal * &PrecReal::from_u64(2, MIN_PRECISION_BITS)) / &PrecReal::from_u64(3, MIN_PRECISION_BITS);
    let acc_terms = cvz_terms_for(&eta_goal, &one);
    let goal_f = goal.to_f64();
    let direct = 0.5 * (1.0 / (goal_f * (s as f64 - 1.0))).powf(1.0 / (s as f64 - 1.0));
    if direct.is_finite() && direct <= 4.0 * acc_terms as f64 {
        let mut k = direct.ceil().max(1.0) as u64;
        loop {
            let v = lambda_partial_at(s, k, wp);
            if v.error_bound <= *goal || k > 8 * acc_terms as u64 {
                return v;
            }
            k += 1;
        }
    }
    let eta = cvz_sum(acc_terms, &natural_term(s, wp), int_power_ops(s), &one, wp);
    let factor = SeriesValue {
        error_bound: rounding_allowance(3, &PrecReal::from_u64(2, MIN_PRECISION_BITS), wp),
        value: eta_to_lambda_factor(s, wp),
        terms_used: 0,
    };
    eta.mul_by(&factor)
}

/// Odd-denominator sum `λ(s) = sum_{k>=0} 1/(2k+1)^s` to within `target_bound`.
pub fn odd_lambda_series(s: u32, target_bound: &PrecReal) -> Result<SeriesValue> {
    check_lambda_exponent(s)?;
    let (p, _) = check_target(target_bound)?;
    let wp = p + GUARD_BITS;
    let goal = target_bound * &PrecReal::pow2(-1, MIN_PRECISION_BITS);
    finish(lambda_at(s, &goal, wp), target_bound, p)
}

/// `ζ(s) = λ(s) / (1 - 2^{-s})`.
pub fn zeta_from_lambda(s: u32, target_bound: &PrecReal) -> Result<SeriesValue> {
    check_lambda_exponent(s)?;
    let (p, _) = check_target(target_bound)?;
    let wp = p + GUARD_BITS;
    let one = PrecReal::one(wp);
    let scale = &one - &PrecReal::pow2(-(s as i32), wp);
    // λ error e becomes e / (1 - 2^{-s}) <= 4e/3
    let goal = &(target_bound * &PrecReal::from_u64(3, MIN_PRECISION_BITS)) / &PrecReal::from_u64(8, MIN_PRECISION_BITS);
    let lambda = lambda_at(s, &goal, wp);
    let value = &lambda.value / &scale;
    let bound = &(&lambda.error_bound / &scale.with_precision(MIN_PRECISION_BITS)) + &rounding_allowance(2, &value, wp);
    let raw = SeriesValue { value, error_bound: inflate(&bound), terms_used: lambda.terms_used };
    finish(raw, target_bound, p)
}

fn hurwitz_at(power: &Power, a: &PrecReal, terms: u64, wp: usize) -> SeriesValue {
    let mut sum = PrecReal::zero(wp);
    let a = a.with_precision(wp);
    for n in 0..terms {
        let x = &PrecReal::from_u64(n, wp) + &a;
        sum = &sum + &power.neg_pow(&x);
    }
    let edge = &PrecReal::from_u64(terms, wp) + &a;
    let half = PrecReal::pow2(-1, wp);
    let tail = power.tail_integral(&edge);
    let outer = power.tail_integral(&(&edge - &half));
    let value = &sum + &tail;
    let x_max = edge.to_f64();
    let ops = terms + power.ops(x_max) + 4;
    let rounding = rounding_allowance(ops, &(&value + &outer), wp);
    let truncation = &outer - &tail;
    SeriesValue { value, error_bound: inflate(&(&truncation.abs() + &rounding)), terms_used: terms }
}

/// Hurwitz zeta `ζ(s, a) = sum_{n>=0} (n + a)^{-s}` for `s > 1`, `a > 0`.
///
/// The partial sum over `n < N` is completed with `∫_N^∞ (t+a)^{-s} dt`.
/// Since the terms are convex, the true tail lies between that integral and
/// the one starting at `N - 1/2`; their difference is the truncation bound.
pub fn hurwitz_zeta(s: f64, a: &PrecReal, target_bound: &PrecReal) -> Result<SeriesValue> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("Hurwitz zeta series needs s > 1, got {s}")));
    }
    if !a.is_positive() {
        return Err(Error::Domain(format!("Hurwitz zeta needs a > 0, got {a}")));
    }
    let (p, target_f) = check_target(target_bound)?;
    let wp = p + GUARD_BITS;
    let power = Power::from_f64(s, wp);
    let a_f = a.to_f64();
    // truncation <= (N + a - 1)^{-s} / 2 once N >= 1
    let needed = (target_f.powf(-1.0 / power.as_f64()) - a_f + 1.0).ceil().max(1.0);
    if !(needed <= TERM_BUDGET as f64) {
        let at_budget = hurwitz_truncation(&power, a, TERM_BUDGET, wp);
        return Err(Error::Capacity {
            what: format!("Hurwitz zeta at s = {s} needs about {needed:e} terms (budget {TERM_BUDGET})"),
            achieved: at_budget.to_f64(),
        });
    }
    let mut terms = needed as u64;
    loop {
        let raw = hurwitz_at(&power, a, terms, wp);
        let goal = target_bound * &PrecReal::pow2(-1, MIN_PRECISION_BITS);
        if raw.error_bound <= goal || terms >= TERM_BUDGET {
            return finish(raw, target_bound, p);
        }
        terms = (terms + terms / 4 + 1).min(TERM_BUDGET);
    }
}

fn hurwitz_truncation(power: &Power, a: &PrecReal, terms: u64, wp: usize) -> PrecReal {
    let edge = &PrecReal::from_u64(terms, wp) + &a.with_precision(wp);
    let half = PrecReal::pow2(-1, wp);
    &power.tail_integral(&(&edge - &half)) - &power.tail_integral(&edge)
}

/// `ζ(s) = sum_{k>=1} k^{-s}` by direct summation, for integer `s >= 2`.
///
/// The tail after `N - 1` terms lies in `[∫_N^∞, ∫_{N-1/2}^∞]`; the value
/// uses the midpoint and the bound is the half-width.
pub fn zeta_direct(s: u32, target_bound: &PrecReal) -> Result<SeriesValue> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta series diverges at s = {s}")));
    }
    let (p, target_f) = check_target(target_bound)?;
    let wp = p + GUARD_BITS;
    let power = Power::Int(s);
    let needed = ((2.0 * target_f).powf(-1.0 / s as f64) + 0.5).ceil().max(1.0);
    if !(needed <= TERM_BUDGET as f64) {
        return Err(Error::Capacity {
            what: format!("zeta({s}) by direct summation needs about {needed:e} terms (budget {TERM_BUDGET})"),
            achieved: f64::NAN,
        });
    }
    let goal = target_bound * &PrecReal::pow2(-1, MIN_PRECISION_BITS);
    let mut n_edge = needed as u64;
    loop {
        let term = natural_term(s, wp);
        let mut sum = PrecReal::zero(wp);
        for k in 0..n_edge - 1 {
            sum = &sum + &term(k);
        }
        let edge = PrecReal::from_u64(n_edge, wp);
        let inner = power.tail_integral(&edge);
        let outer = power.tail_integral(&(&edge - &PrecReal::pow2(-1, wp)));
        let half = PrecReal::pow2(-1, wp);
        let value = &sum + &(&(&inner + &outer) * &half);
        let half_width = &(&outer - &inner) * &half;
        let ops = n_edge + int_power_ops(s) + 6;
        let rounding = rounding_allowance(ops, &(&value + &outer), wp);
        let raw = SeriesValue { value, error_bound: inflate(&(&half_width + &rounding)), terms_used: n_edge - 1 };
        if raw.error_bound <= goal || n_edge >= TERM_BUDGET {
            return finish(raw, target_bound, p);
        }
        n_edge = (n_edge + n_edge / 4 + 1).min(TERM_BUDGET);
    }
}
