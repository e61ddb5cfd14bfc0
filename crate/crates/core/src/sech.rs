//! The hyperbolic secant distribution with density `sech(x) / π`.

use std::f64::consts::{FRAC_2_PI, PI};

use num_bigint::BigInt;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{factorial, parity_sign, PiPolyValue};
use crate::error::{Error, Result};
use crate::exact::{euler_numbers, ExactRational};
use crate::precision::{pi_at, rounding_allowance, PrecReal, GUARD_BITS, MIN_PRECISION_BITS};
use crate::quadrature::{integrate, Quadrature};
use crate::series::{check_target, dirichlet_beta_series, finish, SeriesValue};

/// Density `sech(x) / π`, written as `2e^{-|x|} / (1 + e^{-2|x|}) / π`.
pub fn pdf(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e) / PI
}

/// Distribution function `(2/π) atan(e^x)`.
pub fn cdf(x: f64) -> f64 {
    if x <= 0.0 {
        FRAC_2_PI * x.exp().atan()
    } else {
        1.0 - FRAC_2_PI * (-x).exp().atan()
    }
}

/// Inverse of [`cdf`], `ln(tan(πu/2))`.
///
/// Near the median the equivalent `2 atanh(tan(π(u - 1/2)/2))` keeps full
/// relative accuracy; above `3/4` the antisymmetry is used.
pub fn quantile(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("quantile needs 0 < u < 1, got {u}")));
    }
    if u == 0.5 {
        return Ok(0.0);
    }
    if u > 0.75 {
        return Ok(-quantile(1.0 - u)?);
    }
    if u >= 0.25 {
        return Ok(2.0 * (0.5 * PI * (u - 0.5)).tan().atanh());
    }
    Ok((0.5 * PI * u).tan().ln())
}

/// A reproducible random stream identified by `(seed, stream_id)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

// Each partition owns 2^48 consecutive 32-bit words of its stream.
const PARTITION_WORDS: u128 = 1 << 48;
/// Number of samples drawn from one partition by [`sample`].
pub const SAMPLE_CHUNK: usize = 1 << 16;

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Generator for the `index`-th disjoint block of this stream.
    pub fn partition(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.rng();
        rng.set_word_pos(index as u128 * PARTITION_WORDS);
        rng
    }
}

/// Uniform on the open interval `(0, 1)`: the 52-bit grid shifted by half a
/// step. (A 53-bit grid would round its top point up to 1.)
pub fn uniform_open<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

fn draw<R: RngCore>(rng: &mut R) -> f64 {
    quantile(uniform_open(rng)).expect("uniform_open stays inside (0, 1)")
}

/// `count` draws by inverse transform. Blocks of [`SAMPLE_CHUNK`] come from
/// consecutive partitions and are generated in parallel, so the output does
/// not depend on the thread count.
pub fn sample(stream: &RngStream, count: usize) -> Vec<f64> {
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let blocks: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = SAMPLE_CHUNK.min(count - i * SAMPLE_CHUNK);
            let mut rng = stream.partition(i as u64);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    blocks.concat()
}

/// `E[e^{tX}] = 1 / cos(πt/2)` for `|t| < 1`.
pub fn mgf(t: f64, precision_bits: usize) -> Result<PrecReal> {
    if !(t.abs() < 1.0) {
        return Err(Error::Domain(format!("moment generating function needs |t| < 1, got {t}")));
    }
    let wp = precision_bits.max(MIN_PRECISION_BITS) + GUARD_BITS;
    let arg = &(&PrecReal::from_f64(t, wp) * &pi_at(wp)) * &PrecReal::pow2(-1, wp);
    Ok(arg.cos().recip().with_precision(precision_bits.max(MIN_PRECISION_BITS)))
}

/// `E[X^order]`: `(-1)^n E_{2n} / 4^n · π^{2n}` for `order = 2n`, zero for odd orders.
pub fn moment_closed(order: u32) -> PiPolyValue {
    if order % 2 == 1 {
        return PiPolyValue::zero();
    }
    let n = order / 2;
    let table = euler_numbers(order as usize);
    let num = parity_sign(n as u64) * &table.values()[order as usize];
    let den = BigInt::from(1) << (2 * n);
    PiPolyValue::new(ExactRational::new(num, den), order)
}

/// Moment by two routes: the series `(4/π)(order)! β(order + 1)`, which is
/// the returned value, and direct quadrature of `x^order pdf(x)` as a check.
#[derive(Clone, Debug, Serialize)]
pub struct MomentQuadrature {
    pub order: u32,
    pub value: SeriesValue,
    pub quadrature: f64,
    /// Quadrature error estimate plus the analytic tail bound.
    pub quadrature_bound: f64,
    /// `|quadrature - value|`.
    pub discrepancy: f64,
}

impl MomentQuadrature {
    /// The two routes agree within the quadrature bound.
    pub fn consistent(&self) -> bool {
        self.discrepancy <= self.quadrature_bound + self.value.error_bound.to_f64()
    }
}

/// `(4/π) k! e^{-L} Σ_{j<=k} L^j / j!`, bounding `2∫_L^∞ x^k pdf(x) dx`.
pub fn moment_tail_bound(order: u32, l: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..=order {
        term *= l / j as f64;
        sum += term;
    }
    let k_fact: f64 = (1..=order).map(|j| j as f64).product();
    4.0 / PI * k_fact * (-l).exp() * sum
}

pub fn moment_quadrature(order: u32, target_bound: &PrecReal) -> Result<MomentQuadrature> {
    let (p, _) = check_target(target_bound)?;
    let value = if order % 2 == 1 {
        SeriesValue::exact(PrecReal::zero(p))
    } else {
        let wp = p + GUARD_BITS;
        let scale = &PrecReal::from_int(&(factorial(order as u64) * 4u32), wp) / &pi_at(wp);
        let factor = SeriesValue {
            error_bound: rounding_allowance(2, &scale, wp),
            value: scale.clone(),
            terms_used: 0,
        };
        let goal = (&(target_bound / &scale.with_precision(MIN_PRECISION_BITS)) * &PrecReal::pow2(-2, MIN_PRECISION_BITS))
            .with_precision(wp);
        let beta = dirichlet_beta_series(order + 1, &goal)?;
        finish(beta.mul_by(&factor), target_bound, p)?
    };

    let l = 50f64.max(10.0 * order as f64);
    let tail = moment_tail_bound(order, l);
    if !tail.is_finite() {
        return Err(Error::Capacity { what: format!("tail bound for order {order} overflows"), achieved: tail });
    }
    let q = moment_by_quadrature(order, l)?;
    let quadrature_bound = q.error_estimate + tail;
    let discrepancy = (q.value - value.value.to_f64()).abs();
    Ok(MomentQuadrature { order, value, quadrature: q.value, quadrature_bound, discrepancy })
}

fn moment_by_quadrature(order: u32, l: f64) -> Result<Quadrature> {
    let f = |x: f64| x.powi(order as i32) * pdf(x);
    let left = integrate(f, -l, 0.0, 0.0, 1e-14)?;
    let right = integrate(f, 0.0, l, 0.0, 1e-14)?;
    let scale = left.value.abs() + right.value.abs();
    let error_estimate = left.error_estimate + right.error_estimate + 4.0 * f64::EPSILON * scale;
    Ok(Quadrature { value: left.value + right.value, error_estimate, evaluations: left.evaluations + right.evaluations })
}

/// Sample mean of `x^order` with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub order: u32,
    pub estimate: f64,
    pub standard_error: f64,
    pub sample_count: usize,
}

impl MomentEstimate {
    /// `|estimate - expected| <= k · standard_error`.
    pub fn within(&self, expected: f64, k: f64) -> bool {
        (self.estimate - expected).abs() <= k * self.standard_error
    }
}

pub fn moment_monte_carlo(samples: &[f64], order: u32) -> Result<MomentEstimate> {
    let m = samples.len();
    if m < 2 {
        return Err(Error::Domain(format!("moment estimate needs at least 2 samples, got {m}")));
    }
    let mean = samples.iter().map(|x| x.powi(order as i32)).sum::<f64>() / m as f64;
    let ss: f64 = samples.iter().map(|x| (x.powi(order as i32) - mean).powi(2)).sum();
    let sd = (ss / (m - 1) as f64).sqrt();
    Ok(MomentEstimate { order, estimate: mean, standard_error: sd / (m as f64).sqrt(), sample_count: m })
}

/// Kolmogorov distance between the empirical law of `sorted` and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let m = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d: f64, (i, &x)| {
        let f = cdf(x);
        d.max((i + 1) as f64 / m - f).max(f - i as f64 / m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pdf_basics() {
        assert!(close(pdf(0.0), 1.0 / PI, 1e-16));
        assert_eq!(pdf(2.5), pdf(-2.5));
        assert!(close(pdf(1.0), 1.0 / (PI * 1f64.cosh()), 1e-16));
        assert_eq!(pdf(1e4), 0.0);
        assert!(pdf(700.5) > 0.0 && pdf(700.5).is_finite());
    }

    #[test]
    fn pdf_has_unit_mass() {
        let q = integrate(pdf, -60.0, 60.0, 1e-14, 0.0).unwrap();
        assert!(close(q.value, 1.0, 1e-13));
    }

    #[test]
    fn cdf_limits_and_symmetry() {
        assert_eq!(cdf(0.0), 0.5);
        assert_eq!(cdf(f64::NEG_INFINITY), 0.0);
        assert_eq!(cdf(f64::INFINITY), 1.0);
        for x in [0.1, 1.0, 3.7, 20.0] {
            assert!(close(cdf(x) + cdf(-x), 1.0, 1e-15));
        }
    }

    #[test]
    fn cdf_derivative_is_pdf() {
        let h = 1e-6;
        for x in [-2.0, 0.0, 1.0] {
            let d = (cdf(x + h) - cdf(x - h)) / (2.0 * h);
            assert!(close(d, pdf(x), 1e-9), "x = {x}: {d} vs {}", pdf(x));
        }
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(quantile(0.5).unwrap(), 0.0);
        assert!(close(quantile(cdf(1.0)).unwrap(), 1.0, 1e-12));
        let q = quantile(1e-12).unwrap();
        assert!(close(q, (PI * 1e-12 / 2.0).ln(), 1e-9));
        assert!(close(quantile(0.3).unwrap(), -quantile(0.7).unwrap(), 1e-15));
        for bad in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(quantile(bad), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn quantile_round_trip_on_log_grid() {
        for i in 0..=200 {
            let e = -10.0 + 10.0 * i as f64 / 200.0;
            let u = 10f64.powf(e) * 0.5;
            for v in [u, 1.0 - u] {
                let r = cdf(quantile(v).unwrap());
                assert!(close(r, v, 1e-12), "u = {v}: {r}");
            }
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let s = RngStream::new(7, 3);
        assert_eq!(sample(&s, 1000), sample(&s, 1000));
        assert!(sample(&s, 0).is_empty());
        assert_ne!(sample(&s, 10), sample(&RngStream::new(7, 4), 10));
        assert_ne!(sample(&s, 10), sample(&RngStream::new(8, 3), 10));
        let long = sample(&s, SAMPLE_CHUNK + 5);
        assert_eq!(&long[..10], &sample(&s, 10)[..]);
    }

    #[test]
    fn uniforms_avoid_endpoints() {
        struct Fixed(u64);
        impl rand_core::RngCore for Fixed {
            fn next_u32(&mut self) -> u32 {
                self.0 as u32
            }
            fn next_u64(&mut self) -> u64 {
                self.0
            }
            fn fill_bytes(&mut self, _: &mut [u8]) {}
            fn try_fill_bytes(&mut self, _: &mut [u8]) -> std::result::Result<(), rand_core::Error> {
                Ok(())
            }
        }
        let lo = uniform_open(&mut Fixed(0));
        let hi = uniform_open(&mut Fixed(u64::MAX));
        assert!(lo > 0.0 && hi < 1.0);
        assert!(quantile(lo).unwrap().is_finite() && quantile(hi).unwrap().is_finite());
    }

    #[test]
    fn empirical_cdf_is_close() {
        let mut xs = sample(&RngStream::new(0, 0), 100_000);
        xs.sort_by(f64::total_cmp);
        let d = ks_distance(&xs, cdf);
        assert!(d <= 1.5 * 1.36 / (1e5f64).sqrt(), "KS distance {d}");
    }

    #[test]
    fn mgf_values() {
        assert_eq!(mgf(0.0, 128).unwrap().to_f64(), 1.0);
        assert!(close(mgf(0.5, 128).unwrap().to_f64(), 2f64.sqrt(), 1e-15));
        assert!(matches!(mgf(1.0, 128), Err(Error::Domain(_))));
        assert!(matches!(mgf(-1.2, 128), Err(Error::Domain(_))));
        assert!(mgf(-0.999, 64).unwrap().is_positive());
    }

    #[test]
    fn mgf_curvature_is_the_variance() {
        let h = 1e-4;
        let two = PrecReal::from_u64(2, 128);
        let d2 = &(&(&mgf(h, 128).unwrap() - &two) + &mgf(-h, 128).unwrap()) / &PrecReal::from_f64(h * h, 128);
        let var = moment_closed(2).evaluate(64).value.to_f64();
        assert!(close(d2.to_f64(), var, 1e-6), "{d2} vs {var}");
    }

    #[test]
    fn closed_moments() {
        assert_eq!(moment_closed(0), PiPolyValue::new(ExactRational::from_integer(1.into()), 0));
        assert_eq!(moment_closed(2), PiPolyValue::new(ExactRational::new(1.into(), 4.into()), 2));
        assert_eq!(moment_closed(4), PiPolyValue::new(ExactRational::new(5.into(), 16.into()), 4));
        assert_eq!(moment_closed(6), PiPolyValue::new(ExactRational::new(61.into(), 64.into()), 6));
        assert_eq!(moment_closed(5), PiPolyValue::zero());
    }

    #[test]
    fn quadrature_routes_match_closed_forms() {
        let target = PrecReal::from_f64(1e-10, 128);
        for order in 0..=12 {
            let m = moment_quadrature(order, &target).unwrap();
            let closed = moment_closed(order).evaluate(128);
            assert!(m.value.agrees_with(&closed), "order {order}");
            assert!(m.value.error_bound <= target);
            assert!(m.consistent(), "order {order}: discrepancy {} > {}", m.discrepancy, m.quadrature_bound);
        }
    }

    #[test]
    fn odd_moment_quadrature_is_zero() {
        let m = moment_quadrature(1, &PrecReal::from_f64(1e-10, 128)).unwrap();
        assert!(m.value.value.is_zero());
        assert!(m.quadrature.abs() <= 1e-10);
    }

    #[test]
    fn monte_carlo_moments() {
        let xs = sample(&RngStream::new(0, 0), 1_000_000);
        let second = moment_monte_carlo(&xs, 2).unwrap();
        let mean = moment_monte_carlo(&xs, 1).unwrap();
        let se = PI * PI / (2.0 * 1e3);
        assert!(close(second.estimate, PI * PI / 4.0, 5.0 * se));
        assert!(close(mean.estimate, 0.0, 5.0 * se));
        assert!(second.within(PI * PI / 4.0, 5.0));
        assert!(matches!(moment_monte_carlo(&xs[..1], 2), Err(Error::Domain(_))));
    }

    #[test]
    fn tail_bound_dominates_tail() {
        // Gamma-tail formula against direct quadrature of the tail.
        let (k, l) = (4, 10.0);
        let exact = 2.0 * integrate(|x: f64| x.powi(k) * pdf(x), l, 80.0, 1e-16, 1e-12).unwrap().value;
        assert!(exact <= moment_tail_bound(k as u32, l));
    }

    proptest! {
        #[test]
        fn quantile_is_antisymmetric(u in 1e-9f64..0.5) {
            prop_assert!((quantile(u).unwrap() + quantile(1.0 - u).unwrap()).abs() <= 1e-12 * (1.0 + quantile(u).unwrap().abs()));
        }

        #[test]
        fn cdf_is_monotone(x in -40f64..40.0, dx in 0f64..1.0) {
            prop_assert!(cdf(x) <= cdf(x + dx));
        }

        #[test]
        fn even_moments_are_positive(n in 0u32..30) {
            prop_assert!(moment_closed(2 * n).coefficient > ExactRational::zero());
        }
    }
}
