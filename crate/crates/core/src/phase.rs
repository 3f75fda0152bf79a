//! Phases `e(t) = exp(2 pi i t)` with the argument reduced mod 1 exactly.
//!
//! `c * alpha` for an integer `c` and a binary64 `alpha` is reduced mod 1 in
//! 128-bit integer arithmetic before any trigonometry, so large frequencies
//! (`d * b^j` with big `j`) do not lose the fractional part.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// `e(t)` for a `t` that is already small; folds into `[-1/2, 1/2)` first.
pub fn e(t: f64) -> Complex64 {
    let folded = t - t.round();
    let (s, c) = (TAU * folded).sin_cos();
    Complex64::new(c, s)
}

/// `e(a / q)` with the numerator reduced exactly mod `q`.
pub fn e_ratio(a: i128, q: u64) -> Complex64 {
    let r = a.rem_euclid(q as i128) as u64;
    e_frac_index(r, q)
}

/// `e(r / q)` for `0 <= r < q`, using the symmetric representative.
pub fn e_frac_index(r: u64, q: u64) -> Complex64 {
    // r/q folded to (-1/2, 1/2] keeps the argument of sin_cos small.
    let t = if 2 * r as u128 > q as u128 {
        -((q - r) as f64 / q as f64)
    } else {
        r as f64 / q as f64
    };
    let (s, c) = (TAU * t).sin_cos();
    Complex64::new(c, s)
}

/// Fractional part of `c * alpha` in `[0, 1)`, computed exactly from the
/// binary expansion of `alpha` and then rounded once to binary64.
pub fn frac_mul(c: u64, alpha: f64) -> f64 {
    if !alpha.is_finite() || alpha == 0.0 || c == 0 {
        return 0.0;
    }
    let bits = alpha.abs().to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac_bits = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_bits == 0 {
        (frac_bits, -1074)
    } else {
        (frac_bits | (1u64 << 52), exp_bits - 1075)
    };
    // |alpha| = mant * 2^exp, mant < 2^53, so c * mant < 2^117.
    let positive = if exp >= 0 {
        0.0
    } else {
        let shift = (-exp) as u32;
        let prod = c as u128 * mant as u128;
        if shift >= 128 {
            // Product is below 2^117 <= 2^shift: the value itself is < 1.
            (prod as f64) * 2f64.powi(-(shift as i32))
        } else {
            let low = prod & ((1u128 << shift) - 1);
            scale_down(low, shift)
        }
    };
    if alpha < 0.0 && positive != 0.0 {
        let v = 1.0 - positive;
        if v >= 1.0 {
            0.0
        } else {
            v
        }
    } else {
        positive
    }
}

fn scale_down(v: u128, shift: u32) -> f64 {
    // v < 2^shift; v / 2^shift with one rounding. Shift may exceed the f64
    // exponent range of powi for tiny values, so split it.
    let mut out = v as f64;
    let mut s = shift as i32;
    while s > 0 {
        let step = s.min(1000);
        out *= 2f64.powi(-step);
        s -= step;
    }
    out
}

/// `e(c * alpha)` with exact reduction of the argument.
pub fn e_mul(c: u64, alpha: f64) -> Complex64 {
    e(frac_mul(c, alpha))
}

/// Neumaier-compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

/// Compensated sum of complex values, component-wise.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplex {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplex {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}
