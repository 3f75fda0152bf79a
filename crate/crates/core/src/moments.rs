//! Exact even moments `integral |f|^(2s)` by counting solutions of
//! `x_1 + ... + x_s = y_1 + ... + y_s` over `A_k`, with the digit-column
//! upper bound `(max_n u(n, b, D))^k`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circle::k_on_grid;
use crate::digitset::RestrictedSet;
use crate::error::{Error, Result};
use crate::expsum::{u_max, SignVector};
use crate::ntt;
use crate::phase::{e_frac_index, CompensatedSum};

/// Bound on `s * k * log2(b)`, i.e. `X^s <= 2^40`.
pub const EXACT_RANGE_BITS: f64 = 40.0;

/// Longest dense spectrum (support length `s (max - min) + 1`).
pub const SPECTRUM_LEN_CAP: usize = ntt::MAX_LEN;

/// Largest grid for the quadrature checks.
pub const QUADRATURE_GRID_CAP: usize = 1 << 24;

const BOUND_SLACK: f64 = 1e-9;

/// Representation counts `r_s(m) = #{(x_1..x_s) in A_k^s : sum x_i = m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumSpectrum {
    s: u32,
    offset: u64,
    counts: Vec<u64>,
}

impl SumSpectrum {
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Smallest possible sum, `s * min A_k`.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// `r_s(m)`, zero outside the support.
    pub fn get(&self, m: u64) -> u64 {
        m.checked_sub(self.offset)
            .and_then(|i| self.counts.get(i as usize).copied())
            .unwrap_or(0)
    }

    /// Dense counts starting at [`SumSpectrum::offset`].
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `(m, r_s(m))` for every `m` with a nonzero count.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.offset + i as u64, c))
    }

    /// `sum_m r_s(m)`, which is `|D|^(sk)`.
    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// `sum_m r_s(m)^2`, the number of solutions of the moment equation.
    pub fn square_sum(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128 * c as u128).sum()
    }
}

fn check_order(s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::domain("moment order s must be at least 1"));
    }
    Ok(())
}

/// Whether `(set, s)` is inside the exact-counting range
/// `s * k * log2(b) <= 40` and the dense-spectrum length cap.
pub fn check_exact_range(set: &RestrictedSet, s: u32) -> Result<()> {
    check_order(s)?;
    let bits = s as f64 * set.k() as f64 * (set.system().base() as f64).log2();
    if bits > EXACT_RANGE_BITS + 1e-9 {
        return Err(Error::CapExceeded {
            what: "s*k*log2(b) (bits)",
            size: bits.ceil() as u128,
            cap: EXACT_RANGE_BITS as u128,
        });
    }
    let len = s as u128 * (set.max_member() - set.min_member()) as u128 + 1;
    if len > SPECTRUM_LEN_CAP as u128 {
        return Err(Error::CapExceeded {
            what: "sum spectrum length",
            size: len,
            cap: SPECTRUM_LEN_CAP as u128,
        });
    }
    Ok(())
}

/// Exact `s`-fold sum spectrum of `A_k` by repeated NTT convolution of its
/// indicator vector.
pub fn sum_spectrum(set: &RestrictedSet, s: u32) -> Result<SumSpectrum> {
    check_exact_range(set, s)?;
    let min = set.min_member();
    let span = (set.max_member() - min) as usize;
    let mut indicator = vec![0u64; span + 1];
    for n in set.members() {
        indicator[(n - min) as usize] = 1;
    }
    let card = set.cardinality() as u128;
    let mut counts = indicator.clone();
    let mut mass = card;
    for _ in 1..s {
        counts = ntt::convolve(&counts, &indicator, mass * card)?;
        mass *= card;
    }
    Ok(SumSpectrum {
        s,
        offset: s as u64 * min,
        counts,
    })
}

/// `integral_0^1 |f|^(2s)` exactly, as `sum_m r_s(m)^2`.
pub fn moment(set: &RestrictedSet, s: u32) -> Result<u128> {
    Ok(sum_spectrum(set, s)?.square_sum())
}

/// Smallest power of two exceeding `2 s max A_k`.
pub fn quadrature_grid_size(set: &RestrictedSet, s: u32) -> Result<usize> {
    let need = 2 * s as u128 * set.max_member() as u128 + 1;
    let n = need.next_power_of_two();
    if n > QUADRATURE_GRID_CAP as u128 {
        return Err(Error::CapExceeded {
            what: "quadrature grid size",
            size: n,
            cap: QUADRATURE_GRID_CAP as u128,
        });
    }
    Ok(n as usize)
}

/// Indices per parallel work unit; fixed so the summation order, and hence
/// the result, does not depend on the thread count.
const QUADRATURE_CHUNK: usize = 1 << 16;

/// `(1/N) sum_j |f(j/N)|^(2s)` with `N > 2 s max A_k`, evaluating `f` by its
/// product form at exact rational phases. Equals the moment in exact
/// arithmetic.
///
/// `N` is a power of two, so the place phases `b^j t mod N` come from a mask,
/// and `|sum_d e(d r/N)|^2` is tabulated once for `r <= N/2`.
pub fn moment_quadrature(set: &RestrictedSet, s: u32) -> Result<f64> {
    check_order(s)?;
    let n = quadrature_grid_size(set, s)?;
    let mask = n - 1;
    let half = n / 2;
    let b = set.system().base() as usize;
    let digits = set.system().digits();
    let top = *digits.last().unwrap() as usize;

    // |g(r/N)|^2 with g(alpha) = sum_d e(d alpha); powers of e(r/N) are
    // exact to a few ulps for d < b.
    let table: Vec<f64> = (0..half + 1)
        .into_par_iter()
        .with_min_len(QUADRATURE_CHUNK)
        .map(|r| {
            let w = e_frac_index(r as u64, n as u64);
            let mut power = Complex64::new(1.0, 0.0);
            let mut g = Complex64::new(0.0, 0.0);
            let mut next = digits.iter().peekable();
            for d in 0..=top {
                if next.peek() == Some(&&(d as u64)) {
                    g += power;
                    next.next();
                }
                power *= w;
            }
            g.norm_sqr()
        })
        .collect();
    let fold = |r: usize| if r > half { n - r } else { r };
    let point = |t: usize| -> f64 {
        let mut r = t;
        let mut prod = 1.0f64;
        for _ in 0..set.k() {
            prod *= table[fold(r)];
            r = (r * b) & mask;
        }
        prod.powi(s as i32)
    };

    // |f(-a)| = |f(a)|: sum 1..N/2 twice, then the two self-paired points.
    let partials: Vec<f64> = (1..half)
        .step_by(QUADRATURE_CHUNK)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|lo| {
            let hi = (lo + QUADRATURE_CHUNK).min(half);
            (lo..hi).map(point).collect::<CompensatedSum>().value()
        })
        .collect();
    let mut acc = CompensatedSum::new();
    acc.add(point(0));
    acc.add(point(half));
    for v in partials {
        acc.add(2.0 * v);
    }
    Ok(acc.value() / n as f64)
}

/// `(1/N) sum_j |K(j/N)|^(2s)` on the grid used by [`moment_quadrature`].
///
/// Every solution of the moment equation is counted with weight `+1` or
/// `-1` here, so the value never exceeds the unsigned moment.
pub fn signed_moment_quadrature(set: &RestrictedSet, signs: &SignVector, s: u32) -> Result<f64> {
    check_order(s)?;
    let n = quadrature_grid_size(set, s)?;
    let values = k_on_grid(signs, n);
    let acc: CompensatedSum = values.iter().map(|z| z.norm_sqr().powi(s as i32)).collect();
    Ok(acc.value() / n as f64)
}

/// The moment next to its digit-column bound `(max_n u(n, b, D))^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentBound {
    pub s: u32,
    /// Common factor divided out of the digits before counting.
    pub gcd: u64,
    /// Exact moment; `None` outside the exact-counting range.
    pub moment: Option<u128>,
    pub u_max: f64,
    pub bound: f64,
    pub holds: Option<bool>,
}

/// Moment and bound after dividing the digits by their common factor.
///
/// The scaling `x -> x/g` bijects solutions, so the moment is unchanged and
/// the bound is the one for the reduced digits.
pub fn moment_bound(set: &RestrictedSet, s: u32) -> Result<MomentBound> {
    check_order(s)?;
    let (g, reduced) = set.system().gcd_reduce();
    let reduced_set = RestrictedSet::new(reduced, set.k())?;
    let u = u_max(reduced_set.system(), s)?;
    let bound = u.powi(set.k() as i32);
    let moment = match moment(&reduced_set, s) {
        Ok(v) => Some(v),
        Err(e) if e.is_cap() => None,
        Err(e) => return Err(e),
    };
    Ok(MomentBound {
        s,
        gcd: g,
        moment,
        u_max: u,
        bound,
        holds: moment.map(|m| m as f64 <= bound * (1.0 + BOUND_SLACK)),
    })
}
