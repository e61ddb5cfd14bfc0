//! Command-line front end: exact tables, verification suites, sampling and
//! the CLT table.

use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::closed_forms::{beta_closed, verify_eq9, zeta_even_closed, zeta_even_via_estar, PiPolyValue};
use crate::convolution::{clt_ks_check, nfold_density_f64, sum_moment_closed, sum_moment_series};
use crate::error::Result;
use crate::exact::{euler_numbers, euler_star_numbers, zigzag_numbers, ExactRational};
use crate::precision::{PrecReal, MIN_PRECISION_BITS};
use crate::quadrature::integrate;
use crate::report::VerificationReport;
use crate::sech::{moment_closed, moment_quadrature, sample, RngStream};
use crate::series::{dirichlet_beta_series, zeta_from_lambda, SeriesValue};

pub const SCHEMA_VERSION: u32 = 1;
/// Largest index accepted by `euler` and by `--n-range`.
pub const N_LIMIT: u32 = 200;
/// Absolute tolerance floor for the Hurwitz relation suite.
pub const EQ9_TOLERANCE_FLOOR: f64 = 1e-12;
/// Relative tolerance floor for the variance suite, which runs in double precision.
pub const CLT_TOLERANCE_FLOOR: f64 = 1e-6;

const EXIT_PASS: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "eulersech", version, about = "Euler numbers, the hyperbolic secant law and certified series checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

/// Inclusive index range written `A..B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub start: u32,
    pub end: u32,
}

impl NRange {
    pub fn is_empty(&self) -> bool {
        self.start > self.end
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad bound {t:?}: {e}"));
        Ok(NRange { start: parse(a)?, end: parse(b)? })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// Little-endian 64-bit floats; `sample` only.
    Bin,
}

#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Working precision in bits (at least 64).
    #[arg(long, default_value_t = 128, global = true)]
    pub precision_bits: usize,
    /// Target error bound for series evaluations.
    #[arg(long = "bound", default_value_t = 1e-30, global = true)]
    pub target_bound: f64,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Inclusive index range, e.g. 0..10.
    #[arg(long, default_value = "0..10", global = true)]
    pub n_range: NRange,
    #[arg(long = "samples", default_value_t = 1_000_000, global = true)]
    pub sample_count: usize,
    #[arg(long = "format", value_enum, default_value_t = Format::Json, global = true)]
    pub output_format: Format,
    /// Add wall-clock runtimes to verification output (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: 128,
            target_bound: 1e-30,
            seed: 0,
            n_range: NRange { start: 0, end: 10 },
            sample_count: 1_000_000,
            output_format: Format::Json,
            timings: false,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Table of E_n, E*_n and A_n.
    Euler {
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// Run one verification suite over --n-range.
    Verify { suite: Suite },
    /// Draw --samples values from the hyperbolic secant law.
    Sample {
        #[arg(long, default_value_t = 0)]
        stream_id: u64,
    },
    /// Kolmogorov–Smirnov and density gaps of standardised sums.
    Clt {
        /// Fold counts n.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u32, 4, 16, 64])]
        folds: Vec<u32>,
        /// Batches m per fold count.
        #[arg(long, default_value_t = 100_000)]
        batches: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// β(2n+1) by series against its Euler-number closed form.
    Beta,
    /// ζ(2n+2) by the odd-lambda series against the closed form.
    ZetaEven,
    /// ζ(2n+2) from E* numbers against the closed form, exactly.
    ZetaStar,
    /// Hurwitz relation at s = 2n+1 (n >= 1).
    Eq9,
    /// E[X^{2n}] by series against the closed form.
    Moments,
    /// E[(X+Y)^{2n}] by series against the closed form.
    SumMoments,
    /// Var(S_{n+1}) = (n+1)(π/2)^2 by quadrature of the inverted density.
    Clt,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Beta => "beta",
            Suite::ZetaEven => "zeta-even",
            Suite::ZetaStar => "zeta-star",
            Suite::Eq9 => "eq9",
            Suite::Moments => "moments",
            Suite::SumMoments => "sum-moments",
            Suite::Clt => "clt",
        }
    }
}

fn usage(msg: impl fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

/// Runs a parsed command, writing results to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    let cfg = &cli.config;
    if cfg.precision_bits < MIN_PRECISION_BITS {
        return usage(format!("--precision-bits must be at least {MIN_PRECISION_BITS}"));
    }
    if !(cfg.target_bound > 0.0 && cfg.target_bound.is_finite()) {
        return usage("--bound must be positive and finite");
    }
    if cfg.output_format == Format::Bin && !matches!(cli.command, Command::Sample { .. }) {
        return usage("--format bin is only available for sample");
    }
    let result = match &cli.command {
        Command::Euler { n_max } => {
            if *n_max > N_LIMIT {
                return usage(format!("n_max must be at most {N_LIMIT}"));
            }
            cmd_euler(*n_max, cfg.output_format, out).map(|_| EXIT_PASS)
        }
        Command::Verify { suite } => {
            if cfg.n_range.is_empty() {
                return usage(format!("empty --n-range {}", cfg.n_range));
            }
            if cfg.n_range.end > N_LIMIT {
                return usage(format!("--n-range must end at most at {N_LIMIT}"));
            }
            if *suite == Suite::Eq9 && cfg.n_range.end == 0 {
                return usage("eq9 needs n >= 1");
            }
            match cmd_verify(*suite, cfg) {
                Ok(reports) => emit_reports(*suite, cfg, &reports, out)
                    .map(|_| if reports.iter().all(|r| r.pass) { EXIT_PASS } else { EXIT_FAIL }),
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_FAIL;
                }
            }
        }
        Command::Sample { stream_id } => {
            cmd_sample(cfg.sample_count, &RngStream::new(cfg.seed, *stream_id), cfg.output_format, out).map(|_| EXIT_PASS)
        }
        Command::Clt { folds, batches } => {
            if folds.is_empty() || folds.contains(&0) || *batches < 100 {
                return usage("--folds must be nonempty with every n >= 1, and --batches at least 100");
            }
            match cmd_clt(folds, *batches, cfg.seed) {
                Ok(rows) => emit_clt(&rows, cfg.output_format, out).map(|_| EXIT_PASS),
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_FAIL;
                }
            }
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

/// One row of the exact table.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EulerRow {
    pub n: u32,
    pub euler: String,
    pub euler_star: String,
    pub zigzag: String,
}

pub fn euler_rows(n_max: u32) -> Vec<EulerRow> {
    let n = n_max as usize;
    let e = euler_numbers(n);
    let es = euler_star_numbers(n);
    let a = zigzag_numbers(n);
    (0..=n)
        .map(|k| EulerRow {
            n: k as u32,
            euler: e.values()[k].to_string(),
            euler_star: es[k].to_string(),
            zigzag: a.values()[k].to_string(),
        })
        .collect()
}

pub fn cmd_euler(n_max: u32, format: Format, out: &mut dyn Write) -> io::Result<()> {
    let rows = euler_rows(n_max);
    match format {
        Format::Json => {
            let doc = json!({ "schema": SCHEMA_VERSION, "command": "euler", "n_max": n_max, "rows": rows });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)
        }
        _ => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(["n", "euler", "euler_star", "zigzag"])?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()
        }
    }
}

fn target(cfg: &RunConfig, scale: f64) -> PrecReal {
    PrecReal::from_f64(cfg.target_bound * scale.max(1.0), cfg.precision_bits)
}

/// Variance of `S_k` by quadrature of `x^2` against the inverted density.
pub fn nfold_variance(k: u32) -> Result<SeriesValue> {
    let l = 60.0 + 4.0 * k as f64;
    let goal = 1e-13;
    let worst = Cell::new(0.0f64);
    let f = |x: f64| {
        let (v, b, _) = nfold_density_f64(k, x, goal).expect("grid fits the node budget");
        worst.set(worst.get().max(b));
        x * x * v
    };
    // The integrand carries double-precision noise, so ask for 1e-10 only.
    let left = integrate(f, -l, 0.0, 0.0, 1e-10)?;
    let right = integrate(f, 0.0, l, 0.0, 1e-10)?;
    // Shifting the inversion contour to Im = -1/2 gives
    // f(x) <= 2^{k/2} e^{-|x|/2} / π, so the two tails hold at most
    // (2 · 2^{k/2} / π) e^{-L/2} (2L^2 + 8L + 16).
    let tail = 2.0 * 2f64.powf(k as f64 / 2.0) / std::f64::consts::PI * (-l / 2.0).exp() * (2.0 * l * l + 8.0 * l + 16.0);
    let pointwise = worst.get() * 2.0 * l.powi(3) / 3.0;
    let bound = left.error_estimate + right.error_estimate + tail + pointwise;
    Ok(SeriesValue {
        value: PrecReal::from_f64(left.value + right.value, MIN_PRECISION_BITS),
        error_bound: PrecReal::from_f64(bound, MIN_PRECISION_BITS),
        terms_used: (left.evaluations + right.evaluations) as u64,
    })
}

pub fn verify_one(suite: Suite, n: u32, cfg: &RunConfig) -> Result<VerificationReport> {
    let p = cfg.precision_bits;
    let report = match suite {
        Suite::Beta => {
            let lhs = dirichlet_beta_series(2 * n + 1, &target(cfg, 1.0))?;
            VerificationReport::compare("beta(2n+1)", n, lhs, beta_closed(n).evaluate(p))
        }
        Suite::ZetaEven => {
            let lhs = zeta_from_lambda(2 * n + 2, &target(cfg, 1.0))?;
            VerificationReport::compare("zeta(2n+2)", n, lhs, zeta_even_closed(n).evaluate(p))
        }
        Suite::ZetaStar => {
            let lhs = zeta_even_via_estar(n + 1)?;
            let rhs = zeta_even_closed(n);
            let equal = lhs == rhs;
            VerificationReport::exact("zeta(2n+2) via E*", n, lhs.evaluate(p), rhs.evaluate(p), equal)
        }
        Suite::Eq9 => verify_eq9(n, p, cfg.target_bound.max(EQ9_TOLERANCE_FLOOR))?,
        Suite::Moments => {
            let closed = moment_closed(2 * n).evaluate(p);
            let t = target(cfg, closed.value.to_f64());
            let m = moment_quadrature(2 * n, &t)?;
            let consistent = m.consistent();
            let mut r = VerificationReport::compare("E[X^2n]", n, m.value.clone(), closed)
                .require_within(&t)
                .with_note(format!("quadrature {:e} differs by {:e} (bound {:e})", m.quadrature, m.discrepancy, m.quadrature_bound));
            r.pass &= consistent;
            r
        }
        Suite::SumMoments => {
            let closed = sum_moment_closed(n).evaluate(p);
            let t = target(cfg, closed.value.to_f64());
            let lhs = sum_moment_series(n, &t)?;
            VerificationReport::compare("E[(X+Y)^2n]", n, lhs, closed).require_within(&t)
        }
        Suite::Clt => {
            let k = n + 1;
            let rhs = PiPolyValue::new(ExactRational::new(BigInt::from(k), BigInt::from(4)), 2).evaluate(p);
            let tol = cfg.target_bound.max(CLT_TOLERANCE_FLOOR) * rhs.value.to_f64();
            let lhs = nfold_variance(k)?;
            VerificationReport::compare("Var(S_(n+1))", n, lhs, rhs).require_within(&PrecReal::from_f64(tol, MIN_PRECISION_BITS))
        }
    };
    Ok(report)
}

/// One report per `n` in the range, in order; the work runs in parallel.
pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<Vec<VerificationReport>> {
    let ns: Vec<u32> = cfg.n_range.iter().filter(|&n| suite != Suite::Eq9 || n >= 1).collect();
    ns.par_iter()
        .map(|&n| {
            let start = Instant::now();
            verify_one(suite, n, cfg).map(|r| r.with_runtime(start.elapsed()))
        })
        .collect()
}

fn emit_reports(suite: Suite, cfg: &RunConfig, reports: &[VerificationReport], out: &mut dyn Write) -> io::Result<()> {
    let pass = reports.iter().all(|r| r.pass);
    match cfg.output_format {
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("report serializes");
                    if cfg.timings {
                        v["runtime_ms"] = json!(r.runtime.as_secs_f64() * 1e3);
                    }
                    v
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "verify",
                "suite": suite.name(),
                "config": {
                    "precision_bits": cfg.precision_bits,
                    "bound": cfg.target_bound,
                    "n_range": [cfg.n_range.start, cfg.n_range.end],
                },
                "pass": pass,
                "reports": rows,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)
        }
        _ => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["suite", "n", "identity", "lhs", "lhs_bound", "rhs", "rhs_bound", "gap", "allowed", "pass", "note"];
            if cfg.timings {
                header.push("runtime_ms");
            }
            w.write_record(&header)?;
            for r in reports {
                let mut rec = vec![
                    suite.name().to_string(),
                    r.n.to_string(),
                    r.identity.clone(),
                    r.lhs.value.to_decimal_string(),
                    r.lhs.error_bound.to_decimal_string(),
                    r.rhs.value.to_decimal_string(),
                    r.rhs.error_bound.to_decimal_string(),
                    r.gap.to_decimal_string(),
                    r.allowed.to_decimal_string(),
                    r.pass.to_string(),
                    r.note.clone().unwrap_or_default(),
                ];
                if cfg.timings {
                    rec.push(format!("{}", r.runtime.as_secs_f64() * 1e3));
                }
                w.write_record(&rec)?;
            }
            w.flush()
        }
    }
}

pub fn cmd_sample(count: usize, stream: &RngStream, format: Format, out: &mut dyn Write) -> io::Result<()> {
    let xs = sample(stream, count);
    let mut out = io::BufWriter::new(out);
    match format {
        Format::Bin => {
            for x in &xs {
                out.write_all(&x.to_le_bytes())?;
            }
        }
        Format::Csv => {
            for x in &xs {
                writeln!(out, "{x:?}")?;
            }
        }
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "sample",
                "seed": stream.seed,
                "stream_id": stream.stream_id,
                "count": count,
                "values": xs,
            });
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
        }
    }
    out.flush()
}

pub fn cmd_clt(folds: &[u32], batches: usize, seed: u64) -> Result<Vec<crate::convolution::CltReport>> {
    let stream = RngStream::new(seed, 0);
    folds.iter().map(|&n| clt_ks_check(n, batches, &stream)).collect()
}

fn emit_clt(rows: &[crate::convolution::CltReport], format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            let doc = json!({ "schema": SCHEMA_VERSION, "command": "clt", "scale": FRAC_PI_2, "rows": rows });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)
        }
        _ => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(["fold_count", "sample_count", "ks_statistic", "sup_density_gap"])?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()
        }
    }
}
