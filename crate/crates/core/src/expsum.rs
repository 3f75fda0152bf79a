//! Exponential sums over restricted sets and primes, and the digit-column
//! counting function `u(n, b, D)`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::digitset::{DigitSystem, RestrictedSet};
use crate::error::{Error, Result};
use crate::phase::{e_frac_index, e_mul, CompensatedComplex, CompensatedSum};
use crate::primes::PrimeTable;

pub type ComplexValue = Complex64;

/// Cap on `|D|^k` for the direct-sum form of `f`.
pub const DIRECT_SUM_CAP: u64 = 10_000_000;

/// Cap on `|D|^(2s)` for the exhaustive column oracle.
pub const ORACLE_TUPLE_CAP: u64 = 100_000_000;

/// Frequencies `d * b^j` for every digit and place, place by place.
fn place_frequencies(set: &RestrictedSet) -> Vec<Vec<u64>> {
    let b = set.system().base();
    (0..set.k())
        .map(|j| {
            let p = b.pow(j);
            set.system().digits().iter().map(|&d| d * p).collect()
        })
        .collect()
}

/// `f(alpha) = sum over A_k of e(n alpha)`, evaluated as the product over
/// digit places of `sum_d e(d b^j alpha)`.
pub fn eval_f(set: &RestrictedSet, alpha: f64) -> ComplexValue {
    place_frequencies(set)
        .iter()
        .map(|freqs| freqs.iter().map(|&c| e_mul(c, alpha)).sum::<Complex64>())
        .product()
}

/// `f(a/q)` by the product form with every phase reduced exactly mod `q`.
pub fn eval_f_ratio(set: &RestrictedSet, a: u64, q: u64) -> ComplexValue {
    let a = a % q;
    place_frequencies(set)
        .iter()
        .map(|freqs| {
            freqs
                .iter()
                .map(|&c| e_frac_index(mul_mod(c % q, a, q), q))
                .sum::<Complex64>()
        })
        .product()
}

/// Direct sum `sum_{n in A_k} e(n alpha)`; the oracle for [`eval_f`].
pub fn eval_f_direct(set: &RestrictedSet, alpha: f64) -> Result<ComplexValue> {
    if set.cardinality() > DIRECT_SUM_CAP {
        return Err(Error::CapExceeded {
            what: "|D|^k for the direct sum",
            size: set.cardinality() as u128,
            cap: DIRECT_SUM_CAP as u128,
        });
    }
    let mut acc = CompensatedComplex::default();
    for n in set.members() {
        acc.add(e_mul(n, alpha));
    }
    Ok(acc.value())
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `S(alpha) = sum_{P < p < X} e(p alpha) log p`.
pub fn eval_s(table: &PrimeTable, alpha: f64) -> ComplexValue {
    let mut acc = CompensatedComplex::default();
    for (p, w) in table.weighted() {
        acc.add(e_mul(p, alpha) * w);
    }
    acc.value()
}

/// Sign of `r(n, minor arcs)` for an even member `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Map `n -> eta(n)` over positive members of a restricted set. Absent keys
/// read as zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignVector {
    signs: BTreeMap<u64, Sign>,
}

impl SignVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `eta(n)`; `n` must be a positive member of `set`.
    pub fn insert(&mut self, set: &RestrictedSet, n: u64, sign: Sign) -> Result<()> {
        if n == 0 || !set.contains(n) {
            return Err(Error::domain(format!(
                "{n} is not a positive member of the set"
            )));
        }
        self.signs.insert(n, sign);
        Ok(())
    }

    pub fn get(&self, n: u64) -> Sign {
        self.signs.get(&n).copied().unwrap_or(Sign::Zero)
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Sign)> + '_ {
        self.signs.iter().map(|(&n, &s)| (n, s))
    }

    /// Entries with a nonzero sign.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.iter()
            .filter(|(_, s)| *s != Sign::Zero)
            .map(|(n, s)| (n, s.value()))
    }
}

/// `K(alpha) = sum eta(n) e(-n alpha)`.
pub fn eval_k(signs: &SignVector, alpha: f64) -> ComplexValue {
    let mut acc = CompensatedComplex::default();
    for (n, eta) in signs.nonzero() {
        acc.add(e_mul(n, -alpha) * eta as f64);
    }
    acc.value()
}

/// `K(a/q)` with exact phase reduction.
pub fn eval_k_ratio(signs: &SignVector, a: u64, q: u64) -> ComplexValue {
    let a = a % q;
    let mut acc = CompensatedComplex::default();
    for (n, eta) in signs.nonzero() {
        let r = mul_mod(n % q, a, q);
        acc.add(e_frac_index((q - r) % q, q) * eta as f64);
    }
    acc.value()
}

/// `sum_{d in D} e(d a / b)`, the digit sum at frequency `a/b`.
pub fn digit_character_sum(system: &DigitSystem, a: u64) -> ComplexValue {
    let b = system.base();
    system
        .digits()
        .iter()
        .map(|&d| e_frac_index(mul_mod(d, a % b, b), b))
        .sum()
}

fn check_order(s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::domain("moment order s must be at least 1"));
    }
    Ok(())
}

/// `u(n, b, D)` for every residue `n < b`:
/// `(1/b) sum_{a<b} |sum_d e(da/b)|^(2s) e(-na/b)`.
///
/// The sum is real by conjugate symmetry in `a`; an imaginary residue above
/// `1e-8 |D|^(2s)` is reported as an invariant violation.
pub fn u_column_all(system: &DigitSystem, s: u32) -> Result<Vec<f64>> {
    check_order(s)?;
    let b = system.base();
    let powers: Vec<f64> = (0..b)
        .map(|a| digit_character_sum(system, a).norm_sqr().powi(s as i32))
        .collect();
    let scale = (system.len() as f64).powi(2 * s as i32);
    (0..b)
        .map(|n| {
            let mut acc = CompensatedComplex::default();
            for (a, &w) in powers.iter().enumerate() {
                let r = mul_mod(n, a as u64, b);
                acc.add(e_frac_index((b - r) % b, b) * w);
            }
            let v = acc.value() / b as f64;
            if v.im.abs() >= 1e-8 * scale {
                return Err(Error::invariant(format!(
                    "u({n}) has imaginary part {} for base {b}",
                    v.im
                )));
            }
            Ok(v.re)
        })
        .collect()
}

/// `u(n, b, D)` for a single residue `0 <= n < b`.
pub fn u_column(system: &DigitSystem, s: u32, n: u64) -> Result<f64> {
    if n >= system.base() {
        return Err(Error::domain(format!(
            "n = {n} must be below the base {}",
            system.base()
        )));
    }
    Ok(u_column_all(system, s)?[n as usize])
}

/// Exhaustive count of `2s`-tuples `(x_1..x_s, y_1..y_s)` of digits with
/// `sum (x_i - y_i) = n (mod b)`, for every `n < b`.
pub fn u_oracle_all(system: &DigitSystem, s: u32) -> Result<Vec<u64>> {
    check_order(s)?;
    let tuples = (system.len() as u128)
        .checked_pow(2 * s)
        .unwrap_or(u128::MAX);
    if tuples > ORACLE_TUPLE_CAP as u128 {
        return Err(Error::CapExceeded {
            what: "|D|^(2s) tuple space",
            size: tuples,
            cap: ORACLE_TUPLE_CAP as u128,
        });
    }
    let b = system.base();
    let plus: Vec<u64> = system.digits().to_vec();
    let minus: Vec<u64> = plus.iter().map(|&d| (b - d) % b).collect();
    let mut counts = vec![0u64; b as usize];
    walk_tuples(&plus, &minus, b, s as usize, 2 * s as usize, 0, &mut counts);
    Ok(counts)
}

fn walk_tuples(
    plus: &[u64],
    minus: &[u64],
    b: u64,
    s: usize,
    remaining: usize,
    acc: u64,
    counts: &mut [u64],
) {
    if remaining == 0 {
        counts[acc as usize] += 1;
        return;
    }
    let digits = if remaining > s { plus } else { minus };
    for &d in digits {
        let mut next = acc + d;
        if next >= b {
            next -= b;
        }
        walk_tuples(plus, minus, b, s, remaining - 1, next, counts);
    }
}

/// Exhaustive count for a single residue `n < b`.
pub fn u_oracle(system: &DigitSystem, s: u32, n: u64) -> Result<u64> {
    if n >= system.base() {
        return Err(Error::domain(format!(
            "n = {n} must be below the base {}",
            system.base()
        )));
    }
    Ok(u_oracle_all(system, s)?[n as usize])
}

/// `max_{n<b} u(n, b, D)`.
pub fn u_max(system: &DigitSystem, s: u32) -> Result<f64> {
    Ok(u_column_all(system, s)?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `b * max_n u(n, b, D) / |D|^(2s)`.
pub fn u_max_ratio(system: &DigitSystem, s: u32) -> Result<f64> {
    let scale = (system.len() as f64).powi(2 * s as i32);
    Ok(system.base() as f64 * u_max(system, s)? / scale)
}

/// The residue-free majorant `(1/b) sum_{a<b} |sum_d e(da/b)|^(2s)`.
///
/// This is the `n = 0` column value; it dominates every `u(n, b, D)` because
/// each term of the defining sum is nonnegative before the twist `e(-na/b)`.
pub fn u_majorant(system: &DigitSystem, s: u32) -> Result<f64> {
    check_order(s)?;
    let mut acc = CompensatedSum::new();
    for a in 0..system.base() {
        acc.add(digit_character_sum(system, a).norm_sqr().powi(s as i32));
    }
    Ok(acc.value() / system.base() as f64)
}
