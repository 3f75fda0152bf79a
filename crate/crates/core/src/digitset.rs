//! Digit systems `(b, D)` and the restricted sets `A_k` they generate.
//!
//! `A_k` is the set of integers `0 <= n < b^k` whose `k` base-`b` digits
//! (leading zeros included) all lie in `D`. When `0` is not an allowed digit
//! this forces every member to have exactly `k` digits.

use crate::error::{Error, Result};

/// Default cap on `|D|^k` for operations that materialise `A_k`.
pub const ENUMERATION_CAP: u64 = 100_000_000;

/// Largest modulus the dense residue DP will allocate for.
pub const DP_MODULUS_CAP: u64 = 1 << 24;

/// Largest `r` accepted by [`RestrictedSet::divisor_discard_count`].
pub const DISCARD_R_CAP: u64 = 1_000_000_000_000;

const MAX_BASE: u64 = 1 << 32;

const BOUND_SLACK: f64 = 1.0 / (1u64 << 40) as f64;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A base together with its allowed digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitSystem {
    base: u64,
    digits: Vec<u64>,
    gcd: u64,
}

impl DigitSystem {
    /// Builds a digit system. Digits may be given in any order but must be
    /// distinct, below the base, and at least two of them.
    pub fn new(base: u64, digits: &[u64]) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidSystem(format!(
                "base must be at least 2, got {base}"
            )));
        }
        if base > MAX_BASE {
            return Err(Error::CapExceeded {
                what: "base",
                size: base as u128,
                cap: MAX_BASE as u128,
            });
        }
        if let Some(&digit) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigit { digit, base });
        }
        let mut sorted = digits.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSystem(format!(
                "digit {} appears twice",
                w[0]
            )));
        }
        if sorted.len() < 2 {
            return Err(Error::InvalidSystem(format!(
                "at least two digits are required, got {}",
                sorted.len()
            )));
        }
        let g = sorted.iter().fold(0, |acc, &d| gcd(acc, d));
        Ok(Self {
            base,
            digits: sorted,
            gcd: g,
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Allowed digits in ascending order.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// `|D|`.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Greatest common divisor of the digits (zero contributes nothing).
    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    /// `gcd(b, d - d_min for d in D)`.
    ///
    /// The digit sums `sum_d e(da/b)` stay strictly below `|D|` in modulus for
    /// every `0 < a < b` exactly when this is 1; a common digit factor of 1 is
    /// not enough (odd digits in base 10 all align at `a = 5`).
    pub fn spread_gcd(&self) -> u64 {
        let d0 = self.digits[0];
        self.digits
            .iter()
            .fold(self.base, |acc, &d| gcd(acc, d - d0))
    }

    pub fn contains_zero(&self) -> bool {
        self.digits[0] == 0
    }

    /// `log|D| / log b`, the exponent in the multiples bound.
    pub fn dimension(&self) -> f64 {
        (self.len() as f64).ln() / (self.base as f64).ln()
    }

    /// Divides every digit by their common factor `g`.
    ///
    /// The base is kept. Scaling every digit by `1/g` scales every member of
    /// `A_k` by `1/g`, which bijects solutions of additive equations, so the
    /// reduced system is only meant for moment counting.
    pub fn gcd_reduce(&self) -> (u64, DigitSystem) {
        let g = self.gcd;
        if g <= 1 {
            return (g, self.clone());
        }
        let digits: Vec<u64> = self.digits.iter().map(|d| d / g).collect();
        (
            g,
            DigitSystem {
                base: self.base,
                digits,
                gcd: 1,
            },
        )
    }
}

/// Free-function form of [`DigitSystem::gcd_reduce`].
pub fn gcd_reduce(system: &DigitSystem) -> (u64, DigitSystem) {
    system.gcd_reduce()
}

/// `A_k` for a digit system: `k` digit places, `X = b^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictedSet {
    system: DigitSystem,
    k: u32,
    x: u64,
    cardinality: u64,
}

/// Outcome of checking the multiples bound `2b|A_k| / m^(log|D|/log b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SieveBound {
    pub m: u64,
    pub count: u64,
    pub bound: f64,
    pub holds: bool,
}

impl RestrictedSet {
    pub fn new(system: DigitSystem, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("digit count k must be at least 1"));
        }
        let x = system.base.checked_pow(k).ok_or(Error::CapExceeded {
            what: "X = b^k",
            size: (system.base as u128).saturating_pow(k),
            cap: u64::MAX as u128,
        })?;
        // |D| <= b, so |D|^k <= X fits.
        let cardinality = (system.len() as u64).pow(k);
        Ok(Self {
            system,
            k,
            x,
            cardinality,
        })
    }

    pub fn system(&self) -> &DigitSystem {
        &self.system
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `X = b^k`; every member is below it.
    pub fn x(&self) -> u64 {
        self.x
    }

    /// `|A_k| = |D|^k`.
    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    pub fn min_member(&self) -> u64 {
        self.repeated_digit(self.system.digits[0])
    }

    pub fn max_member(&self) -> u64 {
        self.repeated_digit(*self.system.digits.last().unwrap())
    }

    fn repeated_digit(&self, d: u64) -> u64 {
        // d * (b^k - 1)/(b - 1)
        d * ((self.x - 1) / (self.system.base - 1))
    }

    /// Membership: `n < X` and each of the `k` digits lies in `D`.
    pub fn contains(&self, n: u64) -> bool {
        if n >= self.x {
            return false;
        }
        let b = self.system.base;
        let mut rest = n;
        for _ in 0..self.k {
            if self.system.digits.binary_search(&(rest % b)).is_err() {
                return false;
            }
            rest /= b;
        }
        true
    }

    /// Ascending iterator over the members.
    pub fn members(&self) -> Members<'_> {
        Members::new(self)
    }

    /// All members in ascending order, refusing when `|D|^k` exceeds
    /// [`ENUMERATION_CAP`].
    pub fn enumerate(&self) -> Result<Vec<u64>> {
        self.enumerate_with_cap(ENUMERATION_CAP)
    }

    pub fn enumerate_with_cap(&self, cap: u64) -> Result<Vec<u64>> {
        if self.cardinality > cap {
            return Err(Error::CapExceeded {
                what: "|D|^k",
                size: self.cardinality as u128,
                cap: cap as u128,
            });
        }
        Ok(self.members().collect())
    }

    /// Number of members in each residue class mod `m`, by a digit DP whose
    /// state is the residue of the prefix read most-significant digit first.
    ///
    /// A prefix of `i` digits is below `b^i`, so while `b^i < m` only the
    /// first `b^i` residues can be occupied and the sweep is cut to them.
    pub fn residue_counts(&self, m: u64) -> Result<Vec<u64>> {
        if m == 0 {
            return Err(Error::domain("modulus m must be at least 1"));
        }
        if m > DP_MODULUS_CAP {
            return Err(Error::CapExceeded {
                what: "DP modulus",
                size: m as u128,
                cap: DP_MODULUS_CAP as u128,
            });
        }
        let m_us = m as usize;
        let step = (self.system.base % m) as usize;
        let digits: Vec<usize> = self
            .system
            .digits
            .iter()
            .map(|&d| (d % m) as usize)
            .collect();

        let mut cur = vec![0u64; m_us];
        let mut next = vec![0u64; m_us];
        cur[0] = 1;
        let mut live: u64 = 1;
        for _ in 0..self.k {
            let next_live = live.saturating_mul(self.system.base).min(m);
            next[..next_live as usize].fill(0);
            let mut shifted = 0usize;
            for &c in &cur[..live as usize] {
                if c != 0 {
                    for &d in &digits {
                        let mut idx = shifted + d;
                        if idx >= m_us {
                            idx -= m_us;
                        }
                        next[idx] += c;
                    }
                }
                shifted += step;
                if shifted >= m_us {
                    shifted -= m_us;
                }
            }
            std::mem::swap(&mut cur, &mut next);
            live = next_live;
        }
        Ok(cur)
    }

    /// `#{n in A_k : m | n}` by the residue DP alone.
    pub fn count_multiples_dp(&self, m: u64) -> Result<u64> {
        Ok(self.residue_counts(m)?[0])
    }

    /// `#{n in A_k : m | n}`.
    ///
    /// Uses the residue DP up to [`DP_MODULUS_CAP`]. Larger moduli only occur
    /// for divisors in the discard sum; those are counted by walking the
    /// multiples of `m` below `X` or the members, whichever is shorter.
    pub fn count_multiples(&self, m: u64) -> Result<u64> {
        if m == 0 {
            return Err(Error::domain("modulus m must be at least 1"));
        }
        if m <= DP_MODULUS_CAP {
            return self.count_multiples_dp(m);
        }
        let multiples = (self.x - 1) / m + 1;
        if multiples <= ENUMERATION_CAP && multiples <= self.cardinality {
            return Ok((0..multiples).filter(|&i| self.contains(i * m)).count() as u64);
        }
        if self.cardinality <= ENUMERATION_CAP {
            return Ok(self.members().filter(|n| n % m == 0).count() as u64);
        }
        Err(Error::CapExceeded {
            what: "multiples walk for large m",
            size: multiples.min(self.cardinality) as u128,
            cap: ENUMERATION_CAP as u128,
        })
    }

    /// Compares the multiples count with `2b|A_k| / m^(log|D|/log b)`.
    ///
    /// The bound has an irrational exponent, so the comparison allows a
    /// relative slack of `2^-40`.
    pub fn sieve_bound_check(&self, m: u64) -> Result<SieveBound> {
        let count = self.count_multiples(m)?;
        let bound = self.sieve_bound(m);
        Ok(SieveBound {
            m,
            count,
            bound,
            holds: (count as f64) <= bound * (1.0 + BOUND_SLACK),
        })
    }

    /// `2b|A_k| / m^(log|D|/log b)`.
    pub fn sieve_bound(&self, m: u64) -> f64 {
        2.0 * self.system.base as f64 * self.cardinality as f64
            / (m as f64).powf(self.system.dimension())
    }

    /// `sum over d | r, d > y` of the number of multiples of `d` in `A_k`.
    ///
    /// This over-counts (union bound) the members sharing a divisor larger
    /// than `y` with `r`.
    pub fn divisor_discard_count(&self, r: u64, y: f64) -> Result<u64> {
        if r == 0 {
            return Err(Error::domain("r must be at least 1"));
        }
        if y.is_nan() || y < 1.0 {
            return Err(Error::domain(format!("Y must be at least 1, got {y}")));
        }
        if r > DISCARD_R_CAP {
            return Err(Error::CapExceeded {
                what: "r",
                size: r as u128,
                cap: DISCARD_R_CAP as u128,
            });
        }
        let mut total = 0u64;
        for d in divisors(r) {
            if d as f64 > y {
                total += self.count_multiples(d)?;
            }
        }
        Ok(total)
    }
}

/// Divisors of `n >= 1` in ascending order, by trial division up to `sqrt(n)`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Odometer over the digit strings of `A_k`, least significant place
/// turning fastest, which yields members in ascending order.
#[derive(Debug, Clone)]
pub struct Members<'a> {
    digits: &'a [u64],
    powers: Vec<u64>,
    index: Vec<usize>,
    value: u64,
    remaining: u64,
}

impl<'a> Members<'a> {
    fn new(set: &'a RestrictedSet) -> Self {
        let b = set.system.base;
        let powers: Vec<u64> = (0..set.k).map(|j| b.pow(j)).collect();
        Members {
            digits: &set.system.digits,
            powers,
            index: vec![0; set.k as usize],
            value: set.min_member(),
            remaining: set.cardinality,
        }
    }
}

impl Iterator for Members<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.value;
        self.remaining -= 1;
        if self.remaining > 0 {
            let last = self.digits.len() - 1;
            for (pos, idx) in self.index.iter_mut().enumerate() {
                let p = self.powers[pos];
                if *idx < last {
                    self.value += (self.digits[*idx + 1] - self.digits[*idx]) * p;
                    *idx += 1;
                    break;
                }
                self.value -= (self.digits[last] - self.digits[0]) * p;
                *idx = 0;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}
