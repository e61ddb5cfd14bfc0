//! Sums of independent hyperbolic secant variables and the central limit
//! checks.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::{euler_convolution, factorial, parity_sign, PiPolyValue};
use crate::error::{Error, Result};
use crate::exact::{euler_numbers, ExactRational};
use crate::precision::{pi_at, rounding_allowance, PrecReal, GUARD_BITS, MIN_PRECISION_BITS};
use crate::sech::{quantile, uniform_open, RngStream};
use crate::series::{check_target, finish, odd_lambda_series, SeriesValue};

const TWO_OVER_PI_SQ: f64 = 2.0 / (PI * PI);

/// Below this `|a|` the density of `X + Y` uses its Taylor form.
pub const TAYLOR_SWITCH: f64 = 1e-3;

/// Density of `X + Y`, `4a / (π² (e^a - e^{-a}))`.
pub fn sum_density_2(a: f64) -> f64 {
    let t = a.abs();
    if t < TAYLOR_SWITCH {
        let a2 = t * t;
        return TWO_OVER_PI_SQ * (1.0 - a2 / 6.0 + 7.0 * a2 * a2 / 360.0);
    }
    // 2t / (e^t - e^{-t}) = 2t e^{-t} / (1 - e^{-2t})
    TWO_OVER_PI_SQ * 2.0 * t * (-t).exp() / -(-2.0 * t).exp_m1()
}

/// [`sum_density_2`] in multiprecision; the Taylor switch sits at
/// `2^{-precision_bits/5}`.
pub fn sum_density_2_prec(a: &PrecReal) -> PrecReal {
    let p = a.precision_bits();
    let wp = p + GUARD_BITS;
    let t = a.abs().with_precision(wp);
    let pi = pi_at(wp);
    let two_over_pi_sq = &PrecReal::from_u64(2, wp) / &(&pi * &pi);
    let switch = PrecReal::pow2(-((p / 5) as i32), wp);
    let ratio = if t < switch {
        let a2 = &t * &t;
        let one = PrecReal::one(wp);
        let c2 = &a2 / &PrecReal::from_u64(6, wp);
        let c4 = &(&(&a2 * &a2) * &PrecReal::from_u64(7, wp)) / &PrecReal::from_u64(360, wp);
        &(&one - &c2) + &c4
    } else {
        let e = (-&t).exp();
        let two_t = &t * &PrecReal::from_u64(2, wp);
        &(&two_t * &e) / &(&PrecReal::one(wp) - &(&e * &e))
    };
    (&two_over_pi_sq * &ratio).with_precision(p)
}

/// `E[(X+Y)^{2n}] = (-1)^n (π/2)^{2n} Σ_l C(2n,2l) E_{2l} E_{2n-2l}`.
pub fn sum_moment_closed(n: u32) -> PiPolyValue {
    let table = euler_numbers(2 * n as usize);
    let num = parity_sign(n as u64) * euler_convolution(n as u64, &table);
    let den = BigInt::from(1) << (2 * n);
    PiPolyValue::new(ExactRational::new(num, den), 2 * n)
}

/// `(8/π²)(2n+1)! λ(2n+2)`.
pub fn sum_moment_series(n: u32, target_bound: &PrecReal) -> Result<SeriesValue> {
    let (p, _) = check_target(target_bound)?;
    let wp = p + GUARD_BITS;
    let pi = pi_at(wp);
    let scale = &PrecReal::from_int(&(factorial(2 * n as u64 + 1) * 8u32), wp) / &(&pi * &pi);
    let factor = SeriesValue { error_bound: rounding_allowance(3, &scale, wp), value: scale.clone(), terms_used: 0 };
    let goal = (&(target_bound / &scale.with_precision(MIN_PRECISION_BITS)) * &PrecReal::pow2(-2, MIN_PRECISION_BITS))
        .with_precision(wp);
    let lambda = odd_lambda_series(2 * n + 2, &goal)?;
    finish(lambda.mul_by(&factor), target_bound, p)
}

/// Largest number of trapezoid nodes [`nfold_density`] will use.
pub const NODE_BUDGET: usize = 2_000_000;

// `sech(πt/2)^n` without overflow.
fn sech_pow(n: u32, t: f64) -> f64 {
    let e = (-FRAC_PI_2 * t).exp();
    (2.0 * e / (1.0 + e * e)).powi(n as i32)
}

/// Trapezoid step, node count and the two truncation bounds for
/// `(1/π) ∫_0^∞ cos(tx) sech^n(πt/2) dt`.
struct Grid {
    h: f64,
    nodes: usize,
    truncation: f64,
}

fn grid(n: u32, x: f64, goal: f64) -> Result<Grid> {
    let nf = n as f64;
    // The integrand is analytic for |Im t| < 1. On the strip |Im t| <= 1/2
    // |cos(tx)| <= cosh(x/2) and |sech| <= √2 sech(Re), giving a
    // discretisation error of (2/π) cosh(x/2) 2^{n/2} / (e^{π/h} - 1).
    let strip = |h: f64| FRAC_2_PI * (0.5 * x.abs()).cosh() * 2f64.powf(nf / 2.0) / (PI / h).exp_m1();
    let mut h = 0.05f64;
    if x != 0.0 {
        h = h.min(PI / (4.0 * x.abs()));
    }
    while strip(h) > goal / 2.0 {
        h /= 2.0;
        if h < 1e-6 {
            return Err(Error::Capacity { what: format!("step for n = {n}, x = {x}"), achieved: strip(h) });
        }
    }
    // Omitted nodes j > J: (h/π) Σ 2^n e^{-nπjh/2}.
    let decay = nf * FRAC_PI_2 * h;
    let tail = |j: f64| h / PI * 2f64.powf(nf) * (-decay * (j + 1.0)).exp() / -(-decay).exp_m1();
    let need = ((h / PI * 2f64.powf(nf) / -(-decay).exp_m1() / (goal / 2.0)).ln() / decay).ceil().max(0.0);
    let nodes = need as usize + 1;
    if nodes > NODE_BUDGET {
        return Err(Error::Capacity { what: format!("{nodes} nodes for n = {n}, x = {x}"), achieved: tail(NODE_BUDGET as f64) });
    }
    Ok(Grid { h, nodes, truncation: strip(h) + tail(need) })
}

/// Density of `X_1 + … + X_n` at `x` by inverting the characteristic
/// function `sech^n(πt/2)`: `(1/π) ∫_0^∞ cos(tx) sech^n(πt/2) dt`.
///
/// The sum is done in double precision, so targets much below `1e-14` end in
/// a precision error.
pub fn nfold_density(n: u32, x: f64, target_bound: &PrecReal) -> Result<SeriesValue> {
    if n == 0 || !x.is_finite() {
        return Err(Error::Domain(format!("n-fold density needs n >= 1 and finite x, got n = {n}, x = {x}")));
    }
    let (p, goal) = check_target(target_bound)?;
    let (value, bound, nodes) = nfold_density_f64(n, x, goal)?;
    if bound > goal {
        return Err(Error::Precision { requested: goal, rounding: bound, precision_bits: 53 });
    }
    Ok(SeriesValue {
        value: PrecReal::from_f64(value, p),
        error_bound: PrecReal::from_f64(bound, MIN_PRECISION_BITS),
        terms_used: nodes as u64,
    })
}

/// Value, bound and node count; the bound may exceed `goal` when rounding
/// dominates.
pub fn nfold_density_f64(n: u32, x: f64, goal: f64) -> Result<(f64, f64, usize)> {
    let g = grid(n, x, goal)?;
    let mut sum = 0.5; // node t = 0
    let mut weight = 0.5;
    let mut roundoff = 0.0;
    for j in 1..g.nodes {
        let t = j as f64 * g.h;
        let s = sech_pow(n, t);
        sum += (t * x).cos() * s;
        weight += s;
        roundoff += s * (t * x).abs();
    }
    let scale = g.h / PI;
    let eps = f64::EPSILON;
    // cos of a rounded argument, the power, and the running sum.
    let rounding = 2.0 * eps * scale * (roundoff + weight * (n as f64 + 8.0 + g.nodes as f64));
    let value = scale * sum;
    let bound = (g.truncation + rounding) * (1.0 + 1e-10);
    Ok((value, bound, g.nodes))
}

/// `(π/2)√n · f_{S_n}((π/2)√n · y)`, the standardised density of the sum.
pub fn clt_normalized_density(n: u32, y: f64, target_bound: &PrecReal) -> Result<SeriesValue> {
    let c = FRAC_PI_2 * (n as f64).sqrt();
    let inner = target_bound / &PrecReal::from_f64(c * 1.0000001, MIN_PRECISION_BITS);
    let d = nfold_density(n, c * y, &inner)?;
    let cp = PrecReal::from_f64(c, d.precision_bits());
    let value = &cp * &d.value;
    let bound = &(&cp * &d.error_bound) + &PrecReal::from_f64(4.0 * f64::EPSILON * value.to_f64().abs(), MIN_PRECISION_BITS);
    Ok(SeriesValue { value, error_bound: bound.with_precision(MIN_PRECISION_BITS), terms_used: d.terms_used })
}

pub fn normal_pdf(y: f64) -> f64 {
    (-0.5 * y * y).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function `erfc(-y/√2) / 2`.
pub fn normal_cdf(y: f64) -> f64 {
    0.5 * libm::erfc(-y / std::f64::consts::SQRT_2)
}

/// Kolmogorov–Smirnov distance of a sorted sample from the standard normal law.
pub fn ks_statistic(sorted: &[f64]) -> f64 {
    crate::sech::ks_distance(sorted, normal_cdf)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CltReport {
    pub fold_count: u32,
    pub sample_count: usize,
    pub ks_statistic: f64,
    pub sup_density_gap: f64,
}

/// Grid `y = -4, -3.95, …, 4` used by [`clt_sup_gap`].
pub fn clt_grid() -> Vec<f64> {
    (0..=160).map(|i| -4.0 + 0.05 * i as f64).collect()
}

/// Bound requested for each density evaluation inside [`clt_sup_gap`].
pub const CLT_DENSITY_BOUND: f64 = 1e-12;

/// `max_y |clt_normalized_density(n, y) - normal_pdf(y)|` over [`clt_grid`],
/// padded by the largest evaluation bound.
pub fn clt_sup_gap(n: u32) -> Result<f64> {
    let target = PrecReal::from_f64(CLT_DENSITY_BOUND, MIN_PRECISION_BITS);
    let gaps: Vec<(f64, f64)> = clt_grid()
        .par_iter()
        .map(|&y| {
            let d = clt_normalized_density(n, y, &target)?;
            Ok(((d.value.to_f64() - normal_pdf(y)).abs(), d.error_bound.to_f64()))
        })
        .collect::<Result<_>>()?;
    let gap = gaps.iter().map(|g| g.0).fold(0.0, f64::max);
    let slack = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    Ok(gap + slack)
}

/// Batches handled by one random partition in [`clt_ks_check`].
pub const BATCHES_PER_PARTITION: usize = 4096;

/// Standardised sums of `m` batches of `n` draws, in batch order.
pub fn standardized_batch_sums(n: u32, m: usize, stream: &RngStream) -> Vec<f64> {
    let scale = 1.0 / (FRAC_PI_2 * (n as f64).sqrt());
    let parts = m.div_ceil(BATCHES_PER_PARTITION);
    let blocks: Vec<Vec<f64>> = (0..parts)
        .into_par_iter()
        .map(|i| {
            let len = BATCHES_PER_PARTITION.min(m - i * BATCHES_PER_PARTITION);
            let mut rng = stream.partition(i as u64);
            (0..len)
                .map(|_| {
                    let s: f64 = (0..n).map(|_| quantile(uniform_open(&mut rng)).expect("open interval")).sum();
                    s * scale
                })
                .collect()
        })
        .collect();
    blocks.concat()
}

/// Draws `m` batches of `n` samples and measures how far the standardised
/// batch sums are from the standard normal law.
pub fn clt_ks_check(n: u32, m: usize, stream: &RngStream) -> Result<CltReport> {
    if n == 0 || m < 100 {
        return Err(Error::Domain(format!("CLT check needs n >= 1 and m >= 100, got n = {n}, m = {m}")));
    }
    let mut sums = standardized_batch_sums(n, m, stream);
    sums.sort_by(f64::total_cmp);
    Ok(CltReport {
        fold_count: n,
        sample_count: m,
        ks_statistic: ks_statistic(&sums),
        sup_density_gap: clt_sup_gap(n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use crate::sech::pdf;

    fn target(b: f64) -> PrecReal {
        PrecReal::from_f64(b, 128)
    }

    #[test]
    fn two_fold_density_values() {
        assert!((sum_density_2(0.0) - 2.0 / (PI * PI)).abs() <= 1e-16);
        assert_eq!(sum_density_2(1.3), sum_density_2(-1.3));
        let a: f64 = 1.0;
        assert!((sum_density_2(a) - 4.0 * a / (PI * PI * (a.exp() - (-a).exp()))).abs() < 1e-16);
        assert!(sum_density_2(800.0) >= 0.0);
        // Both branches agree at the switch.
        let lo = sum_density_2(TAYLOR_SWITCH * (1.0 - 1e-12));
        let hi = sum_density_2(TAYLOR_SWITCH);
        assert!((lo - hi).abs() < 1e-15);
    }

    #[test]
    fn two_fold_density_in_multiprecision() {
        for a in [0.0, 1e-9, 0.25, 3.0] {
            let v = sum_density_2_prec(&PrecReal::from_f64(a, 128));
            assert!((v.to_f64() - sum_density_2(a)).abs() <= 1e-16, "a = {a}");
        }
    }

    #[test]
    fn two_fold_density_integrates_to_one() {
        let q = integrate(sum_density_2, -80.0, 80.0, 1e-13, 0.0).unwrap();
        assert!((q.value - 1.0).abs() <= 1e-10);
        let m4 = integrate(|a: f64| a.powi(4) * sum_density_2(a), -120.0, 120.0, 0.0, 1e-14).unwrap();
        let closed = sum_moment_closed(2).evaluate(64).value.to_f64();
        assert!((m4.value - closed).abs() <= 1e-10, "{} vs {closed}", m4.value);
    }

    #[test]
    fn closed_sum_moments() {
        assert_eq!(sum_moment_closed(0), PiPolyValue::new(ExactRational::from_integer(1.into()), 0));
        assert_eq!(sum_moment_closed(1), PiPolyValue::new(ExactRational::new(1.into(), 2.into()), 2));
    }

    #[test]
    fn series_sum_moments_match_closed_forms() {
        for n in 0..=6 {
            let closed = sum_moment_closed(n).evaluate(128);
            let t = target(1e-30 * closed.value.to_f64().max(1.0));
            let s = sum_moment_series(n, &t).unwrap();
            assert!(s.agrees_with(&closed), "n = {n}");
        }
        // Absolute 1e-30 is below 128-bit rounding once the moment is large.
        assert!(matches!(sum_moment_series(6, &target(1e-30)), Err(Error::Precision { .. })));
        let one = sum_moment_series(0, &target(1e-30)).unwrap();
        assert!(one.contains(&PrecReal::one(128)));
    }

    #[test]
    fn one_fold_density_is_the_pdf() {
        for x in [0.0, 0.7, -2.0, 9.0] {
            let d = nfold_density(1, x, &target(1e-12)).unwrap();
            assert!((d.value.to_f64() - pdf(x)).abs() <= d.error_bound.to_f64() + 1e-16, "x = {x}");
        }
    }

    #[test]
    fn two_fold_density_by_inversion() {
        for x in [0.0, 0.5, -0.5, 1.0, -1.0, 3.0, -3.0] {
            let d = nfold_density(2, x, &target(1e-10)).unwrap();
            assert!((d.value.to_f64() - sum_density_2(x)).abs() <= 1e-10, "x = {x}");
        }
    }

    #[test]
    fn unreachable_density_bound() {
        assert!(matches!(nfold_density(2, 1.0, &target(1e-20)), Err(Error::Precision { .. })));
        assert!(matches!(nfold_density(0, 1.0, &target(1e-8)), Err(Error::Domain(_))));
    }

    #[test]
    fn mass_and_variance_add_up() {
        for n in [1u32, 2, 4] {
            let f = |x: f64| nfold_density_f64(n, x, 1e-13).unwrap().0;
            let mass = integrate(f, -80.0, 80.0, 1e-11, 0.0).unwrap();
            assert!((mass.value - 1.0).abs() <= 1e-8, "n = {n}: mass {}", mass.value);
            let var = integrate(|x| x * x * f(x), -80.0, 80.0, 1e-10, 0.0).unwrap();
            let want = n as f64 * FRAC_PI_2 * FRAC_PI_2;
            assert!((var.value - want).abs() <= 1e-7, "n = {n}: var {}", var.value);
        }
    }

    #[test]
    fn normalized_density_examples() {
        let d = clt_normalized_density(1, 0.0, &target(1e-12)).unwrap();
        assert!((d.value.to_f64() - 0.5).abs() <= 1e-12);
        let d16 = clt_normalized_density(16, 0.0, &target(1e-12)).unwrap();
        assert!((d16.value.to_f64() - normal_pdf(0.0)).abs() <= 0.01);
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for y in [0.3, 1.0, 2.5, 6.0] {
            assert!((normal_cdf(y) + normal_cdf(-y) - 1.0).abs() <= 1e-15);
        }
        assert!((normal_cdf(1.959964) - 0.975).abs() <= 1e-6);
        // Against a quadrature of the Gaussian density.
        let q = integrate(normal_pdf, -40.0, 0.7, 1e-16, 0.0).unwrap();
        assert!((normal_cdf(0.7) - q.value).abs() <= 1e-14);
    }

    #[test]
    fn density_gap_shrinks() {
        let gaps: Vec<f64> = [2, 4, 8, 16].iter().map(|&n| clt_sup_gap(n).unwrap()).collect();
        assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
        assert!(gaps[3] <= 0.01);
    }

    #[test]
    fn small_ks_run_is_valid() {
        let r = clt_ks_check(4, 100, &RngStream::new(0, 0)).unwrap();
        assert!((0.0..=1.0).contains(&r.ks_statistic));
        assert_eq!(r.sample_count, 100);
        assert!(matches!(clt_ks_check(4, 99, &RngStream::new(0, 0)), Err(Error::Domain(_))));
        assert_eq!(r, clt_ks_check(4, 100, &RngStream::new(0, 0)).unwrap());
    }
}
