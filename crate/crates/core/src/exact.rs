//! Exact integer and rational sequences: binomials, Euler numbers, Euler
//! star numbers, zigzag numbers, and a brute-force count of alternating
//! permutations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type ExactInt = BigInt;
pub type ExactRational = BigRational;

/// Largest `n` for which [`count_alternating_permutations`] will walk all of `S_n`.
pub const ENUMERATION_LIMIT: usize = 10;

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> Result<ExactInt> {
    if k > n {
        return Err(Error::Domain(format!("binomial({n}, {k}) needs k <= n")));
    }
    let k = k.min(n - k);
    let mut acc = ExactInt::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// Rows `0..=n_max` of Pascal's triangle.
fn pascal_rows(n_max: usize) -> Vec<Vec<ExactInt>> {
    let mut rows: Vec<Vec<ExactInt>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = Vec::with_capacity(n + 1);
        row.push(ExactInt::one());
        if n > 0 {
            let prev = &rows[n - 1];
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(ExactInt::one());
        }
        rows.push(row);
    }
    rows
}

fn serialize_decimal<S: Serializer>(values: &[ExactInt], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

/// Euler numbers `E_0..=E_{n_max}`, the Taylor coefficients of `sech x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EulerTable {
    #[serde(serialize_with = "serialize_decimal")]
    values: Vec<ExactInt>,
}

impl EulerTable {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[ExactInt] {
        &self.values
    }

    /// `E_n`, or `None` past the end of the table.
    pub fn get(&self, n: usize) -> Option<&ExactInt> {
        self.values.get(n)
    }
}

/// Euler numbers from `cosh(x) * sech(x) = 1`: `E_0 = 1` and
/// `sum_{k=0}^{n} C(2n, 2k) E_{2k} = 0` for `n >= 1`; odd entries vanish.
pub fn euler_numbers(n_max: usize) -> EulerTable {
    let half = n_max / 2;
    let pascal = pascal_rows(2 * half);
    let mut even: Vec<ExactInt> = Vec::with_capacity(half + 1);
    even.push(ExactInt::one());
    for n in 1..=half {
        let row = &pascal[2 * n];
        let acc: ExactInt = (0..n).map(|k| &row[2 * k] * &even[k]).sum();
        even.push(-acc);
    }
    let values = (0..=n_max)
        .map(|i| if i % 2 == 0 { even[i / 2].clone() } else { ExactInt::zero() })
        .collect();
    EulerTable { values }
}

/// Euler star numbers `E*_0..=E*_{n_max}`, the coefficients of `2/(e^t + 1)`.
///
/// From `(e^t + 1) * sum E*_n t^n/n! = 2`: `E*_0 = 1` and
/// `2 E*_n = -sum_{k<n} C(n, k) E*_k` for `n >= 1`.
pub fn euler_star_numbers(n_max: usize) -> Vec<ExactRational> {
    let pascal = pascal_rows(n_max);
    let two = ExactRational::from_integer(ExactInt::from(2));
    let mut out: Vec<ExactRational> = Vec::with_capacity(n_max + 1);
    out.push(ExactRational::one());
    for n in 1..=n_max {
        let row = &pascal[n];
        let acc: ExactRational = (0..n)
            .map(|k| &out[k] * ExactRational::from_integer(row[k].clone()))
            .sum();
        out.push(-acc / &two);
    }
    out
}

/// Zigzag numbers `A_0..=A_{n_max}`: Taylor coefficients of `sec x + tan x`,
/// equivalently the number of alternating permutations of `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ZigzagTable {
    #[serde(serialize_with = "serialize_decimal")]
    values: Vec<ExactInt>,
}

impl ZigzagTable {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[ExactInt] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&ExactInt> {
        self.values.get(n)
    }
}

/// Zigzag numbers via the Seidel boustrophedon triangle: each row starts at 0
/// and accumulates the previous row read backwards; `A_n` is the last entry
/// of row `n`.
pub fn zigzag_numbers(n_max: usize) -> ZigzagTable {
    let mut values = Vec::with_capacity(n_max + 1);
    let mut row = vec![ExactInt::one()];
    values.push(ExactInt::one());
    for n in 1..=n_max {
        let mut next = Vec::with_capacity(n + 1);
        next.push(ExactInt::zero());
        for k in 1..=n {
            let v = &next[k - 1] + &row[n - k];
            next.push(v);
        }
        values.push(next[n].clone());
        row = next;
    }
    ZigzagTable { values }
}

fn is_alternating(perm: &[u8]) -> bool {
    perm.windows(2)
        .enumerate()
        .all(|(i, w)| if i % 2 == 0 { w[0] > w[1] } else { w[0] < w[1] })
}

/// Advances `perm` to its lexicographic successor; false once it wraps.
fn next_permutation(perm: &mut [u8]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).expect("successor exists");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

fn check_enumeration_guard(n: usize) -> Result<()> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: format!("enumerating S_{n} exceeds the limit n <= {ENUMERATION_LIMIT}"),
            achieved: f64::NAN,
        });
    }
    Ok(())
}

/// Every permutation of `{1..n}` with `a_1 > a_2 < a_3 > ...`, in
/// lexicographic order.
pub fn alternating_permutations(n: usize) -> Result<Vec<Vec<u8>>> {
    check_enumeration_guard(n)?;
    let mut perm: Vec<u8> = (1..=n as u8).collect();
    let mut out = Vec::new();
    loop {
        if is_alternating(&perm) {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

/// Counts alternating permutations of `{1..n}` by walking all of `S_n`.
/// The empty permutation counts once.
pub fn count_alternating_permutations(n: usize) -> Result<ExactInt> {
    check_enumeration_guard(n)?;
    let mut perm: Vec<u8> = (1..=n as u8).collect();
    let mut count: u64 = 0;
    loop {
        if is_alternating(&perm) {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(ExactInt::from(count))
}

/// `true` when `r` is in lowest terms with a positive denominator.
pub fn is_normalized(r: &ExactRational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}
