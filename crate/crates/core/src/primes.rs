//! Log-weighted prime tables on `(P, X)` and exact Goldbach representation
//! counts.

use rayon::prelude::*;

use crate::digitset::RestrictedSet;
use crate::error::{Error, Result};
use crate::phase::CompensatedSum;

/// Largest `X` a prime table may be built for.
pub const TABLE_X_CAP: u64 = 1_000_000_000;

/// Default `delta0`, giving `P = X^0.3`.
pub const DEFAULT_DELTA0: f64 = 0.05;

/// Odd numbers per sieve segment.
const SEGMENT_ODDS: usize = 1 << 20;

/// `floor(X^(6 delta0))`, the prime cutoff and the major-arc denominator cap.
///
/// A relative nudge of `1e-12` keeps exact powers (for example
/// `100^(1/2)`) from landing one below their integer value.
pub fn power_cutoff(x: u64, delta0: f64) -> u64 {
    let v = (x as f64).powf(6.0 * delta0);
    (v * (1.0 + 1e-12)).floor() as u64
}

pub fn check_delta0(delta0: f64) -> Result<()> {
    if !(delta0 > 0.0 && delta0 < 1.0 / 6.0) {
        return Err(Error::config(format!(
            "delta0 must lie in (0, 1/6), got {delta0}"
        )));
    }
    Ok(())
}

/// Bit-packed primality of the odd numbers below a limit: bit `i` of the
/// little-endian word array stands for `2i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddSieve {
    limit: u64,
    words: Vec<u64>,
}

impl OddSieve {
    /// Segmented sieve of Eratosthenes over the odd numbers below `limit`.
    pub fn new(limit: u64) -> Self {
        let odds = (limit / 2) as usize; // odd numbers 1, 3, ..., < limit
        let mut words = vec![u64::MAX; odds.div_ceil(64)];
        if odds % 64 != 0 {
            *words.last_mut().unwrap() = (1u64 << (odds % 64)) - 1;
        }
        if odds > 0 {
            words[0] &= !1; // 1 is not prime
        }

        let root = (limit as f64).sqrt() as u64 + 1;
        let base = small_odd_primes(root);
        let mut lo = 0usize;
        while lo < odds {
            let hi = (lo + SEGMENT_ODDS).min(odds);
            for &p in &base {
                let p = p as usize;
                // first odd multiple of p in the segment, no smaller than p^2
                let sq_idx = (p * p) / 2;
                if sq_idx >= hi {
                    break;
                }
                let mut idx = if sq_idx >= lo {
                    sq_idx
                } else {
                    let rem = (lo - sq_idx) % p;
                    if rem == 0 {
                        lo
                    } else {
                        lo + (p - rem)
                    }
                };
                while idx < hi {
                    words[idx / 64] &= !(1u64 << (idx % 64));
                    idx += p;
                }
            }
            lo = hi;
        }
        Self { limit, words }
    }

    /// Rebuilds a sieve from packed words, as read back from a cache file.
    pub fn from_words(limit: u64, words: Vec<u64>) -> Result<Self> {
        let odds = (limit / 2) as usize;
        if words.len() != odds.div_ceil(64) {
            return Err(Error::config(format!(
                "sieve for limit {limit} needs {} words, got {}",
                odds.div_ceil(64),
                words.len()
            )));
        }
        Ok(Self { limit, words })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Primality for any `n < limit`, including 2.
    pub fn is_prime(&self, n: u64) -> bool {
        if n >= self.limit {
            return false;
        }
        if n % 2 == 0 {
            return n == 2;
        }
        let idx = (n / 2) as usize;
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Primes in ascending order (2 first when below the limit).
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let two = (self.limit > 2).then_some(2u64);
        two.into_iter().chain(
            self.words
                .iter()
                .enumerate()
                .flat_map(|(w, &word)| BitIter(word).map(move |b| 2 * (64 * w as u64 + b) + 1)),
        )
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as u64;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

fn small_odd_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize + 1;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            if i > 2 {
                out.push(i as u64);
            }
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes `P < p < X` with weights `log p`.
///
/// Weights are natural logarithms computed on demand; the table keeps only
/// the primes and the underlying sieve.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    x: u64,
    cutoff: u64,
    sieve: OddSieve,
    primes: Vec<u32>,
}

impl PrimeTable {
    /// Table for `X` with cutoff `P = floor(X^(6 delta0))`.
    pub fn build(x: u64, delta0: f64) -> Result<Self> {
        check_delta0(delta0)?;
        Self::with_cutoff(x, power_cutoff(x, delta0))
    }

    /// Table for `X` with an explicit cutoff `P < X`.
    pub fn with_cutoff(x: u64, cutoff: u64) -> Result<Self> {
        check_x(x)?;
        Self::from_sieve(cutoff, OddSieve::new(x))
    }

    /// Table over an existing sieve whose limit is `X`.
    pub fn from_sieve(cutoff: u64, sieve: OddSieve) -> Result<Self> {
        let x = sieve.limit();
        check_x(x)?;
        if cutoff >= x {
            return Err(Error::config(format!(
                "cutoff P = {cutoff} must be below X = {x}"
            )));
        }
        let primes = sieve
            .primes()
            .filter(|&p| p > cutoff)
            .map(|p| p as u32)
            .collect();
        Ok(Self {
            x,
            cutoff,
            sieve,
            primes,
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    /// The cutoff `P`; stored primes satisfy `P < p < X`.
    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn sieve(&self) -> &OddSieve {
        &self.sieve
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `log p` for the `i`-th stored prime.
    pub fn weight(&self, i: usize) -> f64 {
        (self.primes[i] as f64).ln()
    }

    /// Iterator over `(p, log p)`.
    pub fn weighted(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.primes.iter().map(|&p| (p as u64, (p as f64).ln()))
    }

    /// Whether `n` is one of the stored primes.
    pub fn contains(&self, n: u64) -> bool {
        n > self.cutoff && self.sieve.is_prime(n)
    }

    /// Index range of stored primes `p` with `lo < p < hi`.
    fn range(&self, lo: u64, hi: u64) -> std::ops::Range<usize> {
        let start = self.primes.partition_point(|&p| (p as u64) <= lo);
        let end = self.primes.partition_point(|&p| (p as u64) < hi);
        start..end.max(start)
    }

    fn check_even(&self, n: u64) -> Result<()> {
        if n % 2 != 0 {
            return Err(Error::domain(format!("n = {n} is odd")));
        }
        if n == 0 || n >= 2 * self.x {
            return Err(Error::domain(format!(
                "n = {n} outside (0, 2X) with X = {}",
                self.x
            )));
        }
        Ok(())
    }

    /// Ordered prime pairs `p1 + p2 = n` from the table, both counted and
    /// log-weighted.
    pub fn weighted_rep(&self, n: u64) -> Result<GoldbachRecord> {
        self.check_even(n)?;
        let mut count = 0u64;
        let mut weighted = CompensatedSum::new();
        // p2 = n - p1 must satisfy P < p2 < X
        let lo = self.cutoff.max(n.saturating_sub(self.x));
        let hi = n.saturating_sub(self.cutoff);
        for &p1 in &self.primes[self.range(lo, hi)] {
            let p1 = p1 as u64;
            let p2 = n - p1;
            if self.contains(p2) {
                count += 1;
                weighted.add((p1 as f64).ln() * (p2 as f64).ln());
            }
        }
        Ok(GoldbachRecord {
            n,
            r_weighted: weighted.value(),
            rep_count: count,
            is_exception: count == 0,
        })
    }

    /// Whether at least one representation exists; stops at the first.
    pub fn has_representation(&self, n: u64) -> Result<bool> {
        self.check_even(n)?;
        let lo = self.cutoff.max(n.saturating_sub(self.x));
        let hi = n.saturating_sub(self.cutoff);
        Ok(self.primes[self.range(lo, hi)]
            .iter()
            .any(|&p| self.contains(n - p as u64)))
    }
}

fn check_x(x: u64) -> Result<()> {
    if x < 4 {
        return Err(Error::config(format!("X must be at least 4, got {x}")));
    }
    if x > TABLE_X_CAP {
        return Err(Error::CapExceeded {
            what: "X for the prime table",
            size: x as u128,
            cap: TABLE_X_CAP as u128,
        });
    }
    Ok(())
}

/// Exact representation data for one even `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldbachRecord {
    pub n: u64,
    /// `sum log p1 log p2` over ordered pairs.
    pub r_weighted: f64,
    /// Number of ordered pairs.
    pub rep_count: u64,
    pub is_exception: bool,
}

/// Result of scanning the even members of a restricted set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// Exceptional even members, ascending.
    pub exceptions: Vec<GoldbachRecord>,
    /// Even members `n >= 4` that were tested.
    pub scanned: u64,
    /// Even members below 4 (`0` and `2`), which are never tested.
    pub skipped_small: u64,
}

impl ScanResult {
    pub fn exception_count(&self) -> u64 {
        self.exceptions.len() as u64
    }
}

const SCAN_CHUNK: usize = 1 << 16;

/// Tests every even member `n >= 4` of `set` for a two-prime representation
/// from `table`.
pub fn exception_scan(set: &RestrictedSet, table: &PrimeTable) -> Result<ScanResult> {
    if set.x() != table.x() {
        return Err(Error::config(format!(
            "restricted set has X = {} but the prime table has X = {}",
            set.x(),
            table.x()
        )));
    }
    let mut result = ScanResult {
        exceptions: Vec::new(),
        scanned: 0,
        skipped_small: 0,
    };
    let mut chunk = Vec::with_capacity(SCAN_CHUNK);
    let flush = |chunk: &mut Vec<u64>, result: &mut ScanResult| -> Result<()> {
        let found: Vec<GoldbachRecord> = chunk
            .par_iter()
            .map(|&n| -> Result<Option<GoldbachRecord>> {
                if table.has_representation(n)? {
                    Ok(None)
                } else {
                    table.weighted_rep(n).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        result.scanned += chunk.len() as u64;
        result.exceptions.extend(found);
        chunk.clear();
        Ok(())
    };
    for n in set.members().filter(|n| n % 2 == 0) {
        if n < 4 {
            result.skipped_small += 1;
            continue;
        }
        chunk.push(n);
        if chunk.len() == SCAN_CHUNK {
            flush(&mut chunk, &mut result)?;
        }
    }
    flush(&mut chunk, &mut result)?;
    Ok(result)
}
