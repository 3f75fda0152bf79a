//! Major/minor arc partition of the unit circle and DFT-grid quadrature of
//! `r(n, B) = integral over B of S(alpha)^2 e(-n alpha)`.
//!
//! The major arcs are `{alpha : ||q alpha|| < X^(6 delta0 - 1) for some
//! q <= Q}` with `Q = floor(X^(6 delta0))`. Sampling `S` on a grid of
//! `N > 2X` points makes the full-circle trapezoid rule exact, since every
//! frequency of `S(alpha)^2 e(-n alpha)` for `0 <= n < 2X` lies strictly
//! inside `(-N, N)`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::digitset::RestrictedSet;
use crate::error::{Error, Result};
use crate::expsum::{eval_k_ratio, Sign, SignVector};
use crate::phase::{e_frac_index, frac_mul, CompensatedComplex, CompensatedSum};
use crate::primes::{check_delta0, power_cutoff, PrimeTable};

/// Largest denominator cap `Q` the partition will enumerate.
pub const Q_CAP: u64 = 4096;

/// Largest grid size `N`.
pub const GRID_CAP: usize = 1 << 26;

/// Work limit for evaluating `K` pointwise in the aggregate identity; above
/// it `K` is sampled with one FFT instead.
const DIRECT_K_WORK: usize = 50_000_000;

const IMAG_TOL: f64 = 1e-9;
const AGGREGATE_TOL: f64 = 1e-6;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Integration region on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Full,
    Major,
    Minor,
}

/// Major arcs as a merged, sorted list of open intervals, and their
/// complement.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcPartition {
    x: u64,
    delta0: f64,
    q_max: u64,
    width: f64,
    /// Open intervals `(lo, hi)`; the arcs around 0 and 1 extend past the
    /// unit interval so that wrap-around needs no special case.
    intervals: Vec<(f64, f64)>,
}

impl ArcPartition {
    /// Partition for `X` with `Q = floor(X^(6 delta0))` and width
    /// `X^(6 delta0 - 1)`.
    pub fn build(x: u64, delta0: f64) -> Result<Self> {
        check_delta0(delta0)?;
        if x < 2 {
            return Err(Error::config(format!("X must be at least 2, got {x}")));
        }
        let q_max = power_cutoff(x, delta0).max(1);
        let width = (x as f64).powf(6.0 * delta0 - 1.0);
        Self::with_parameters(x, delta0, q_max, width)
    }

    /// Partition with explicit `Q` and width.
    pub fn with_parameters(x: u64, delta0: f64, q_max: u64, width: f64) -> Result<Self> {
        if q_max == 0 {
            return Err(Error::config("Q must be at least 1"));
        }
        if q_max > Q_CAP {
            return Err(Error::CapExceeded {
                what: "arc denominator cap Q",
                size: q_max as u128,
                cap: Q_CAP as u128,
            });
        }
        if width.is_nan() || width <= 0.0 || width * q_max as f64 >= 0.5 {
            return Err(Error::config(format!(
                "degenerate arcs: width * Q = {} must lie in (0, 1/2)",
                width * q_max as f64
            )));
        }
        let mut raw = Vec::new();
        for q in 1..=q_max {
            let radius = width / q as f64;
            for a in 0..=q {
                if gcd(a, q) == 1 {
                    let c = a as f64 / q as f64;
                    raw.push((c - radius, c + radius));
                }
            }
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some(last) if lo < last.1 => last.1 = last.1.max(hi),
                _ => intervals.push((lo, hi)),
            }
        }
        Ok(Self {
            x,
            delta0,
            q_max,
            width,
            intervals,
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn q_max(&self) -> u64 {
        self.q_max
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Lebesgue measure of the major arcs inside `[0, 1)`.
    pub fn measure(&self) -> f64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| (hi.min(1.0) - lo.max(0.0)).max(0.0))
            .sum()
    }

    /// Classification by binary search in the merged intervals.
    pub fn classify(&self, alpha: f64) -> Region {
        let a = alpha.rem_euclid(1.0);
        let idx = self.intervals.partition_point(|&(lo, _)| lo < a);
        if idx > 0 && a < self.intervals[idx - 1].1 {
            Region::Major
        } else {
            Region::Minor
        }
    }

    /// Classification by the defining test `min_{q <= Q} ||q alpha|| < width`.
    pub fn classify_direct(&self, alpha: f64) -> Region {
        for q in 1..=self.q_max {
            let t = frac_mul(q, alpha);
            if t.min(1.0 - t) < self.width {
                return Region::Major;
            }
        }
        Region::Minor
    }

    /// Major-arc indicator at the grid points `j/N`, `0 <= j < N`.
    ///
    /// The half `j <= N/2` is marked from the interval list and mirrored, so
    /// the mask is exactly symmetric under `j -> N - j`.
    pub fn grid_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        let nf = n as f64;
        let half = n / 2;
        for &(lo, hi) in &self.intervals {
            // j/N > lo and j/N < hi; products with a power of two are exact
            let first = (lo * nf).floor() + 1.0;
            let last = (hi * nf).ceil() - 1.0;
            let first = first.max(0.0) as i64;
            let last = (last.min(half as f64)) as i64;
            for j in first..=last {
                mask[j as usize] = true;
            }
        }
        for j in 1..n.div_ceil(2) {
            mask[n - j] = mask[j];
        }
        mask
    }

    /// Number of grid points `j/N` in the minor arcs.
    pub fn minor_points(&self, n: usize) -> usize {
        self.grid_mask(n).iter().filter(|&&m| !m).count()
    }
}

/// Smallest power of two exceeding `2X + 1`.
pub fn default_grid_size(x: u64) -> usize {
    (2 * x as usize + 2).next_power_of_two()
}

/// `S(j/N)` for `j = 0..N`, from one length-`N` DFT of the weighted prime
/// indicator.
#[derive(Debug, Clone)]
pub struct GridTransform {
    x: u64,
    s_values: Vec<Complex64>,
}

impl GridTransform {
    pub fn build(table: &PrimeTable, n: usize) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::config(format!(
                "grid size {n} is not a power of two"
            )));
        }
        if (n as u64) <= 2 * table.x() {
            return Err(Error::config(format!(
                "grid size {n} must exceed 2X = {}",
                2 * table.x()
            )));
        }
        if n > GRID_CAP {
            return Err(Error::CapExceeded {
                what: "grid size N",
                size: n as u128,
                cap: GRID_CAP as u128,
            });
        }
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        for (p, w) in table.weighted() {
            values[p as usize] = Complex64::new(w, 0.0);
        }
        // inverse transform carries the e(+jp/N) sign convention
        FftPlanner::new().plan_fft_inverse(n).process(&mut values);
        Ok(Self {
            x: table.x(),
            s_values: values,
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn n(&self) -> usize {
        self.s_values.len()
    }

    pub fn s_values(&self) -> &[Complex64] {
        &self.s_values
    }

    /// `(1/N) sum_j |S(j/N)|^2`, which equals `sum (log p)^2`; used as the
    /// scale for imaginary-residue checks.
    pub fn energy(&self) -> f64 {
        let sum: CompensatedSum = self.s_values.iter().map(|z| z.norm_sqr()).collect();
        sum.value() / self.n() as f64
    }
}

fn in_region(mask: &[bool], j: usize, region: Region) -> bool {
    match region {
        Region::Full => true,
        Region::Major => mask[j],
        Region::Minor => !mask[j],
    }
}

fn check_n(grid: &GridTransform, n: u64) -> Result<()> {
    if n == 0 || n >= 2 * grid.x {
        return Err(Error::domain(format!(
            "n = {n} outside (0, 2X) with X = {}",
            grid.x
        )));
    }
    Ok(())
}

/// `r(n, region)` by the trapezoid rule on the grid:
/// `(1/N) sum_{j in region} Re(S(j/N)^2 e(-nj/N))`.
pub fn r_quadrature(
    grid: &GridTransform,
    partition: &ArcPartition,
    n: u64,
    region: Region,
) -> Result<f64> {
    let mask = partition.grid_mask(grid.n());
    r_quadrature_masked(grid, &mask, n, region)
}

/// As [`r_quadrature`] with a precomputed [`ArcPartition::grid_mask`].
pub fn r_quadrature_masked(
    grid: &GridTransform,
    mask: &[bool],
    n: u64,
    region: Region,
) -> Result<f64> {
    check_n(grid, n)?;
    let size = grid.n() as u64;
    let mut acc = CompensatedComplex::default();
    for (j, s) in grid.s_values.iter().enumerate() {
        if in_region(mask, j, region) {
            let r = ((n % size) * j as u64) % size;
            acc.add(s * s * e_frac_index((size - r) % size, size));
        }
    }
    let v = acc.value() / size as f64;
    check_imag(v, grid.energy(), n)?;
    Ok(v.re)
}

fn check_imag(v: Complex64, scale: f64, n: u64) -> Result<()> {
    if v.im.abs() > IMAG_TOL * scale.max(1.0) {
        return Err(Error::invariant(format!(
            "quadrature for n = {n} left imaginary residue {}",
            v.im
        )));
    }
    Ok(())
}

/// `r(n, region)` for every `0 <= n < N` at once: one forward FFT of the
/// masked `S(j/N)^2 / N`.
pub fn r_all(grid: &GridTransform, mask: &[bool], region: Region) -> Result<Vec<f64>> {
    let n = grid.n();
    let scale = grid.energy();
    let mut values: Vec<Complex64> = grid
        .s_values
        .iter()
        .enumerate()
        .map(|(j, s)| {
            if in_region(mask, j, region) {
                s * s / n as f64
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut values);
    values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            check_imag(*v, scale, k as u64)?;
            Ok(v.re)
        })
        .collect()
}

/// Counts of each sign among the recovered `eta(n)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SignHistogram {
    pub negative: u64,
    pub zero: u64,
    pub positive: u64,
}

/// `sum |r(n, minor)|` over even members, its signs, and the same quantity
/// evaluated as the integral of `S^2 K` over the minor arcs.
#[derive(Debug, Clone)]
pub struct MinorArcAggregate {
    /// `(n, r(n, minor))` for every positive even member, ascending.
    pub values: Vec<(u64, f64)>,
    pub signs: SignVector,
    /// `sum |r(n, minor)|`.
    pub total: f64,
    /// `(1/N) sum_{j in minor} S(j/N)^2 K(j/N)` with `K(alpha) = sum eta(n)
    /// e(-n alpha)`.
    pub integral: f64,
    pub histogram: SignHistogram,
}

fn positive_even_members(set: &RestrictedSet) -> Vec<u64> {
    set.members().filter(|&n| n > 0 && n % 2 == 0).collect()
}

fn check_same_x(set: &RestrictedSet, grid: &GridTransform, partition: &ArcPartition) -> Result<()> {
    if set.x() != grid.x() || set.x() != partition.x() {
        return Err(Error::config(format!(
            "X mismatch: set {}, grid {}, partition {}",
            set.x(),
            grid.x(),
            partition.x()
        )));
    }
    Ok(())
}

/// Computes `r(n, minor)` for the even members, records `eta(n)`, and checks
/// `sum |r(n, minor)| = integral over minor of S^2 K` to `1e-6` relative.
pub fn minor_arc_aggregate(
    set: &RestrictedSet,
    grid: &GridTransform,
    partition: &ArcPartition,
) -> Result<MinorArcAggregate> {
    check_same_x(set, grid, partition)?;
    let mask = partition.grid_mask(grid.n());
    let minor = r_all(grid, &mask, Region::Minor)?;
    let members = positive_even_members(set);

    let mut signs = SignVector::new();
    let mut histogram = SignHistogram::default();
    let mut total = CompensatedSum::new();
    let mut values = Vec::with_capacity(members.len());
    for &n in &members {
        let r = minor[n as usize];
        let sign = Sign::of(r);
        match sign {
            Sign::Negative => histogram.negative += 1,
            Sign::Zero => histogram.zero += 1,
            Sign::Positive => histogram.positive += 1,
        }
        signs.insert(set, n, sign)?;
        total.add(r.abs());
        values.push((n, r));
    }
    let total = total.value();

    let integral = minor_integral(grid, &mask, &signs)?;
    if (total - integral).abs() > AGGREGATE_TOL * total.abs().max(integral.abs()) {
        return Err(Error::invariant(format!(
            "minor-arc total {total} disagrees with the S^2 K integral {integral}"
        )));
    }
    Ok(MinorArcAggregate {
        values,
        signs,
        total,
        integral,
        histogram,
    })
}

/// `(1/N) sum_{j in minor} S(j/N)^2 K(j/N)`.
pub fn minor_integral(grid: &GridTransform, mask: &[bool], signs: &SignVector) -> Result<f64> {
    let n = grid.n();
    let minor_points = mask.iter().filter(|&&m| !m).count();
    let nonzero = signs.nonzero().count();
    let k_values: Box<dyn Fn(usize) -> Complex64> =
        if nonzero.saturating_mul(minor_points) <= DIRECT_K_WORK {
            Box::new(|j| eval_k_ratio(signs, j as u64, n as u64))
        } else {
            let sampled = k_on_grid(signs, n);
            Box::new(move |j| sampled[j])
        };
    let mut acc = CompensatedComplex::default();
    for (j, s) in grid.s_values.iter().enumerate() {
        if !mask[j] {
            acc.add(s * s * k_values(j));
        }
    }
    let v = acc.value() / n as f64;
    check_imag(v, grid.energy() * nonzero.max(1) as f64, 0)?;
    Ok(v.re)
}

/// `K(j/N)` for all `j` by one forward FFT of the sign vector.
pub fn k_on_grid(signs: &SignVector, n: usize) -> Vec<Complex64> {
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    for (m, eta) in signs.nonzero() {
        values[(m % n as u64) as usize] += eta as f64;
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut values);
    values
}

/// One row of the dominance report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceRow {
    pub n: u64,
    pub r_major: f64,
    pub r_minor: f64,
    pub r_full: f64,
    pub major_positive: bool,
    pub major_dominates: bool,
    pub below_threshold: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub rows: Vec<DominanceRow>,
    /// `X Y^(-1/2) / log X`.
    pub threshold: f64,
    pub y: f64,
    pub major_positive: u64,
    pub major_dominates: u64,
    pub below_threshold: u64,
}

impl DominanceReport {
    pub fn dominance_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        self.major_dominates as f64 / self.rows.len() as f64
    }
}

/// `X Y^(-1/2) / log X`.
pub fn major_arc_threshold(x: u64, y: f64) -> f64 {
    x as f64 / y.sqrt() / (x as f64).ln()
}

/// Major and minor arc contributions for every positive even member, with
/// the comparison flags against each other and against `X Y^(-1/2)/log X`.
///
/// `Y` must satisfy `1 <= Y <= |A_k|^delta0`.
pub fn dominance_report(
    set: &RestrictedSet,
    grid: &GridTransform,
    partition: &ArcPartition,
    y: f64,
) -> Result<DominanceReport> {
    check_same_x(set, grid, partition)?;
    let y_max = (set.cardinality() as f64).powf(partition.delta0());
    if !(y >= 1.0 && y <= y_max) {
        return Err(Error::config(format!(
            "Y = {y} must lie in [1, |A_k|^delta0] = [1, {y_max}]"
        )));
    }
    let mask = partition.grid_mask(grid.n());
    let major = r_all(grid, &mask, Region::Major)?;
    let minor = r_all(grid, &mask, Region::Minor)?;
    let full = r_all(grid, &mask, Region::Full)?;
    let threshold = major_arc_threshold(set.x(), y);

    let rows: Vec<DominanceRow> = positive_even_members(set)
        .into_iter()
        .map(|n| {
            let i = n as usize;
            DominanceRow {
                n,
                r_major: major[i],
                r_minor: minor[i],
                r_full: full[i],
                major_positive: major[i] > 0.0,
                major_dominates: major[i] > minor[i].abs(),
                below_threshold: major[i] < threshold,
            }
        })
        .collect();
    let count = |f: fn(&DominanceRow) -> bool| rows.iter().filter(|r| f(r)).count() as u64;
    Ok(DominanceReport {
        threshold,
        y,
        major_positive: count(|r| r.major_positive),
        major_dominates: count(|r| r.major_dominates),
        below_threshold: count(|r| r.below_threshold),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digitset::DigitSystem;
    use crate::expsum::eval_s;

    #[test]
    fn partition_example() {
        let p = ArcPartition::build(10_000, 0.05).unwrap();
        assert_eq!(p.q_max(), 15);
        assert!((p.width() - 10f64.powf(-2.8)).abs() < 1e-15);
        // the arc around 0 has half-width `width`
        assert_eq!(p.intervals()[0], (-p.width(), p.width()));
        assert_eq!(p.classify(1e-5), Region::Major);
        assert_eq!(p.classify_direct(1e-5), Region::Major);
        assert_eq!(p.classify(0.5), Region::Major);
        assert_eq!(p.classify(0.0), Region::Major);
        assert_eq!(p.classify(1.0 - 1e-5), Region::Major);
        assert!(p.measure() < 1.0);
        assert!(p.measure() <= 4.0 * 15.0 * p.width());
    }

    #[test]
    fn golden_ratio_is_minor() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let p = ArcPartition::with_parameters(1000, 0.05, 5, 0.01).unwrap();
        let alpha = phi.fract();
        for q in 1..=5u64 {
            let t = (q as f64 * alpha).rem_euclid(1.0);
            assert!(t.min(1.0 - t) >= 0.01);
        }
        assert_eq!(p.classify(alpha), Region::Minor);
        assert_eq!(p.classify_direct(alpha), Region::Minor);
    }

    #[test]
    fn degenerate_partition_rejected() {
        assert!(matches!(
            ArcPartition::with_parameters(100, 0.05, 10, 0.05),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ArcPartition::build(100, 0.2),
            Err(Error::Config(_))
        ));
        assert!(ArcPartition::with_parameters(100, 0.05, Q_CAP + 1, 1e-9)
            .unwrap_err()
            .is_cap());
    }

    #[test]
    fn grid_mask_matches_direct_test() {
        let p = ArcPartition::build(100_000, 0.05).unwrap();
        let n = 1 << 14;
        let mask = p.grid_mask(n);
        for j in 0..n {
            let direct = p.classify_direct(j as f64 / n as f64) == Region::Major;
            assert_eq!(mask[j], direct, "j = {j}");
            assert_eq!(mask[j], mask[(n - j) % n]);
        }
    }

    fn small_setup() -> (PrimeTable, GridTransform, ArcPartition) {
        let table = PrimeTable::with_cutoff(20, 1).unwrap();
        let grid = GridTransform::build(&table, 64).unwrap();
        let partition = ArcPartition::with_parameters(20, 0.05, 2, 0.05).unwrap();
        (table, grid, partition)
    }

    #[test]
    fn grid_examples() {
        let (table, grid, _) = small_setup();
        let total: f64 = table.weighted().map(|(_, w)| w).sum();
        assert!((grid.s_values()[0] - Complex64::new(total, 0.0)).norm() < 1e-12);
        for j in 1..64 {
            assert!((grid.s_values()[j].conj() - grid.s_values()[64 - j]).norm() < 1e-12);
            let direct = eval_s(&table, j as f64 / 64.0);
            assert!((grid.s_values()[j] - direct).norm() < 1e-12);
        }
        let odd = PrimeTable::with_cutoff(20, 2).unwrap();
        let g = GridTransform::build(&odd, 64).unwrap();
        let odd_total: f64 = odd.weighted().map(|(_, w)| w).sum();
        assert!((g.s_values()[32] + Complex64::new(odd_total, 0.0)).norm() < 1e-12);
        assert!(matches!(
            GridTransform::build(&table, 40),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            GridTransform::build(&table, 32),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn quadrature_examples() {
        let (table, grid, partition) = small_setup();
        let full = r_quadrature(&grid, &partition, 10, Region::Full).unwrap();
        let exact = table.weighted_rep(10).unwrap().r_weighted;
        assert!((full - exact).abs() < 1e-9, "{full} vs {exact}");
        assert!((full - 6.866).abs() < 1e-3);

        let odd = PrimeTable::with_cutoff(20, 2).unwrap();
        let g = GridTransform::build(&odd, 64).unwrap();
        let total: f64 = odd.weighted().map(|(_, w)| w).sum();
        let r2 = r_quadrature(&g, &partition, 2, Region::Full).unwrap();
        assert!(r2.abs() < 1e-9 * total * total);

        for n in (2..40).step_by(2) {
            let f = r_quadrature(&grid, &partition, n, Region::Full).unwrap();
            let ma = r_quadrature(&grid, &partition, n, Region::Major).unwrap();
            let mi = r_quadrature(&grid, &partition, n, Region::Minor).unwrap();
            assert!((ma + mi - f).abs() < 1e-9 * f.abs().max(1.0));
        }
        assert!(matches!(
            r_quadrature(&grid, &partition, 40, Region::Full),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bulk_quadrature_matches_pointwise() {
        let table = PrimeTable::with_cutoff(1000, 3).unwrap();
        let grid = GridTransform::build(&table, default_grid_size(1000)).unwrap();
        let partition = ArcPartition::build(1000, 0.05).unwrap();
        let mask = partition.grid_mask(grid.n());
        for region in [Region::Full, Region::Major, Region::Minor] {
            let all = r_all(&grid, &mask, region).unwrap();
            for n in [2u64, 100, 998, 1500, 1998] {
                let one = r_quadrature_masked(&grid, &mask, n, region).unwrap();
                assert!((all[n as usize] - one).abs() < 1e-7 * one.abs().max(1.0));
            }
        }
    }

    #[test]
    fn k_grid_matches_pointwise() {
        let set = RestrictedSet::new(DigitSystem::new(10, &[0, 2, 7]).unwrap(), 3).unwrap();
        let mut signs = SignVector::new();
        for (i, n) in set.members().filter(|&n| n > 0).enumerate() {
            let s = [Sign::Positive, Sign::Negative, Sign::Zero][i % 3];
            signs.insert(&set, n, s).unwrap();
        }
        let k = k_on_grid(&signs, 2048);
        for j in [0usize, 1, 77, 1024, 2047] {
            assert!((k[j] - eval_k_ratio(&signs, j as u64, 2048)).norm() < 1e-9);
        }
    }

    #[test]
    fn aggregate_with_empty_minor_grid() {
        // q = 256 hits every point j/256, so no grid point is minor.
        let table = PrimeTable::with_cutoff(100, 1).unwrap();
        let grid = GridTransform::build(&table, 256).unwrap();
        let partition = ArcPartition::with_parameters(100, 0.05, 256, 1e-3).unwrap();
        assert_eq!(partition.minor_points(256), 0);
        let set = RestrictedSet::new(DigitSystem::new(10, &[2, 8]).unwrap(), 2).unwrap();
        let agg = minor_arc_aggregate(&set, &grid, &partition).unwrap();
        assert_eq!(agg.total, 0.0);
        assert_eq!(agg.histogram.zero, 4);
        assert!(agg.signs.nonzero().next().is_none());
    }

    #[test]
    fn aggregate_identity_small() {
        let table = PrimeTable::build(100, 0.05).unwrap();
        let grid = GridTransform::build(&table, default_grid_size(100)).unwrap();
        let partition = ArcPartition::build(100, 0.05).unwrap();
        let set = RestrictedSet::new(DigitSystem::new(10, &[2, 8]).unwrap(), 2).unwrap();
        let agg = minor_arc_aggregate(&set, &grid, &partition).unwrap();
        assert_eq!(agg.values.len(), 4);
        assert!((agg.total - agg.integral).abs() <= 1e-6 * agg.total);
    }

    #[test]
    fn dominance_basics() {
        let table = PrimeTable::with_cutoff(100, 20).unwrap();
        let grid = GridTransform::build(&table, default_grid_size(100)).unwrap();
        let partition = ArcPartition::build(100, 0.05).unwrap();
        let set = RestrictedSet::new(DigitSystem::new(10, &[2, 4]).unwrap(), 2).unwrap();
        let rep = dominance_report(&set, &grid, &partition, 1.0).unwrap();
        assert!((rep.threshold - 100.0 / 100f64.ln()).abs() < 1e-12);
        for row in &rep.rows {
            let exact = table.weighted_rep(row.n).unwrap();
            if exact.rep_count == 0 {
                // 22, 24 have no split into primes above 20
                assert!((row.r_major + row.r_minor).abs() < 1e-8 * row.r_major.abs().max(1.0));
            }
            assert!((row.r_full - exact.r_weighted).abs() < 1e-6 * exact.r_weighted.max(1.0));
        }
        assert!(matches!(
            dominance_report(&set, &grid, &partition, 0.5),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            dominance_report(&set, &grid, &partition, 100.0),
            Err(Error::Config(_))
        ));
    }
}
