//! Exact convolution of nonnegative integer sequences by a two-prime
//! number-theoretic transform with CRT recombination.

use crate::error::{Error, Result};

const P1: u64 = 167_772_161; // 5 * 2^25 + 1
const P2: u64 = 469_762_049; // 7 * 2^26 + 1
const ROOT: u64 = 3;

/// Longest transform the prime pair supports.
pub const MAX_LEN: usize = 1 << 25;

/// Exclusive bound on output coefficients that CRT reconstructs exactly.
pub const COEFF_BOUND: u128 = P1 as u128 * P2 as u128;

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn transform(a: &mut [u64], p: u64, invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(ROOT, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut t = 1u64;
        for _ in 0..half {
            twiddles.push(t);
            t = t * w % p;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x;
                let v = *y * tw % p;
                *x = if u + v >= p { u + v - p } else { u + v };
                *y = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv_n % p;
        }
    }
}

fn convolve_mod(a: &[u64], b: &[u64], size: usize, p: u64) -> Vec<u64> {
    let mut fa: Vec<u64> = a.iter().map(|&x| x % p).collect();
    let mut fb: Vec<u64> = b.iter().map(|&x| x % p).collect();
    fa.resize(size, 0);
    fb.resize(size, 0);
    transform(&mut fa, p, false);
    transform(&mut fb, p, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % p;
    }
    transform(&mut fa, p, true);
    fa
}

/// Exact linear convolution of `a` and `b`.
///
/// `coeff_bound` must dominate every output coefficient (for counting
/// problems, the product of the two total masses does); it is checked
/// against the CRT range.
pub fn convolve(a: &[u64], b: &[u64], coeff_bound: u128) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    if coeff_bound >= COEFF_BOUND {
        return Err(Error::CapExceeded {
            what: "convolution coefficient bound",
            size: coeff_bound,
            cap: COEFF_BOUND - 1,
        });
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    if size > MAX_LEN {
        return Err(Error::CapExceeded {
            what: "transform length",
            size: size as u128,
            cap: MAX_LEN as u128,
        });
    }
    let r1 = convolve_mod(a, b, size, P1);
    let r2 = convolve_mod(a, b, size, P2);
    let inv_p1 = pow_mod(P1 % P2, P2 - 2, P2);
    Ok(r1
        .iter()
        .zip(&r2)
        .take(out_len)
        .map(|(&x1, &x2)| {
            let diff = (x2 + P2 - x1 % P2) % P2;
            let t = diff * inv_p1 % P2;
            x1 + P1 * t
        })
        .collect())
}

/// Quadratic-time reference convolution.
pub fn convolve_schoolbook(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
