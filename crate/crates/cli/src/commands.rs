//! One function per subcommand. Each returns its report plus, when a bound or
//! self-check failed, a description of the breach.

use digold_core::circle::{self, default_grid_size};
use digold_core::expsum::{u_column_all, u_majorant, u_max, u_max_ratio, u_oracle_all};
use digold_core::moments::{moment_bound, moment_quadrature};
use digold_core::primes::power_cutoff;
use digold_core::{exception_scan, ArcPartition, GridTransform, PrimeTable, RestrictedSet};
use rayon::prelude::*;

use crate::cache;
use crate::config::{Command, RunConfig};
use crate::report::Report;
use crate::CliError;

/// Agreement required between the FFT quadrature and exact sums.
pub const SELF_CHECK_TOL: f64 = 1e-6;

/// Tolerance for `u` against its integer oracle.
pub const COLUMN_TOL: f64 = 1e-8;

pub struct Outcome {
    pub report: Report,
    pub breach: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self {
            report,
            breach: None,
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let set = config.set.as_ref();
    match &config.command {
        Command::Enumerate { cap, .. } => enumerate(config, set.unwrap(), *cap),
        Command::Scan { primes, delta, .. } => {
            let table = prime_table(config, set.unwrap(), primes.delta0, primes.cutoff)?;
            scan(config, set.unwrap(), &table, *delta)
        }
        Command::Arcs {
            primes, y, grid, ..
        } => {
            let table = prime_table(config, set.unwrap(), primes.delta0, primes.cutoff)?;
            arcs(config, set.unwrap(), &table, primes.delta0, *y, *grid)
        }
        Command::Moments { s_min, s_max, .. } => moments(config, set.unwrap(), *s_min, *s_max),
        Command::Sievebound {
            m_min, m_max, r, y, ..
        } => sievebound(config, set.unwrap(), *m_min, *m_max, r.zip(*y)),
        Command::Ucolumn { s, .. } => ucolumn(config, *s),
    }
}

fn new_report(config: &RunConfig, columns: &[&str]) -> Report {
    Report::new(config.command.name(), config.echo(), columns)
}

fn prime_table(
    config: &RunConfig,
    set: &RestrictedSet,
    delta0: f64,
    cutoff: Option<u64>,
) -> Result<PrimeTable, CliError> {
    let x = set.x();
    let p = match cutoff {
        Some(p) => p,
        None => {
            digold_core::primes::check_delta0(delta0)?;
            power_cutoff(x, delta0)
        }
    };
    let path = config.cache_path(x, p);
    let (table, outcome) = cache::table(path.as_deref(), x, p)?;
    if let Some(outcome) = outcome {
        eprintln!("digold: sieve cache {outcome:?}");
    }
    Ok(table)
}

fn enumerate(config: &RunConfig, set: &RestrictedSet, cap: u64) -> Result<Outcome, CliError> {
    let members = set.enumerate_with_cap(cap)?;
    let mut report = new_report(config, &["n"]);
    report.rows = members.into_iter().map(|n| vec![n.into()]).collect();
    report.summarize("count", set.cardinality());
    report.summarize("x", set.x());
    Ok(Outcome::ok(report))
}

fn scan(
    config: &RunConfig,
    set: &RestrictedSet,
    table: &PrimeTable,
    delta: f64,
) -> Result<Outcome, CliError> {
    let result = exception_scan(set, table)?;
    let mut report = new_report(config, &["n", "r_weighted", "rep_count"]);
    for rec in &result.exceptions {
        report.push_row(vec![
            rec.n.into(),
            rec.r_weighted.into(),
            rec.rep_count.into(),
        ]);
    }
    let reference = (set.cardinality() as f64).powf(1.0 - delta);
    report.summarize("cutoff", table.cutoff());
    report.summarize("primes", table.len());
    report.summarize("scanned", result.scanned);
    report.summarize("skipped_small", result.skipped_small);
    report.summarize("exceptions", result.exception_count());
    report.summarize("reference", reference);
    report.summarize(
        "within_reference",
        result.exception_count() as f64 <= reference,
    );
    Ok(Outcome::ok(report))
}

fn arcs(
    config: &RunConfig,
    set: &RestrictedSet,
    table: &PrimeTable,
    delta0: f64,
    y: f64,
    grid_size: Option<usize>,
) -> Result<Outcome, CliError> {
    let x = set.x();
    let partition = ArcPartition::build(x, delta0)?;
    let n = grid_size.unwrap_or_else(|| default_grid_size(x));
    let grid = GridTransform::build(table, n)?;
    let dominance = circle::dominance_report(set, &grid, &partition, y)?;
    let aggregate = circle::minor_arc_aggregate(set, &grid, &partition)?;

    let exact: Vec<f64> = dominance
        .rows
        .par_iter()
        .map(|row| table.weighted_rep(row.n).map(|r| r.r_weighted))
        .collect::<Result<_, _>>()?;

    let mut report = new_report(
        config,
        &[
            "n",
            "r_major",
            "r_minor",
            "r_full",
            "r_exact",
            "rel_err",
            "major_positive",
            "major_dominates",
            "below_threshold",
        ],
    );
    let mut max_err = 0.0f64;
    for (row, &exact) in dominance.rows.iter().zip(&exact) {
        let err = (row.r_full - exact).abs() / exact.abs().max(1.0);
        max_err = max_err.max(err);
        report.push_row(vec![
            row.n.into(),
            row.r_major.into(),
            row.r_minor.into(),
            row.r_full.into(),
            exact.into(),
            err.into(),
            row.major_positive.into(),
            row.major_dominates.into(),
            row.below_threshold.into(),
        ]);
    }
    report.summarize("cutoff", table.cutoff());
    report.summarize("grid", n);
    report.summarize("q_max", partition.q_max());
    report.summarize("width", partition.width());
    report.summarize("major_measure", partition.measure());
    report.summarize("minor_points", partition.minor_points(n));
    report.summarize("threshold", dominance.threshold);
    report.summarize("evens", dominance.rows.len());
    report.summarize("major_positive", dominance.major_positive);
    report.summarize("major_dominates", dominance.major_dominates);
    report.summarize("below_threshold", dominance.below_threshold);
    report.summarize("dominance_fraction", dominance.dominance_fraction());
    report.summarize("minor_abs_total", aggregate.total);
    report.summarize("minor_integral", aggregate.integral);
    report.summarize("minor_negative", aggregate.histogram.negative);
    report.summarize("minor_zero", aggregate.histogram.zero);
    report.summarize("minor_positive", aggregate.histogram.positive);
    report.summarize("max_rel_err", max_err);
    let agrees = max_err <= SELF_CHECK_TOL;
    report.summarize("exact_agreement", agrees);
    let breach = (!agrees).then(|| {
        format!("grid quadrature differs from the exact prime-pair sums by {max_err:e} (relative)")
    });
    Ok(Outcome { report, breach })
}

fn moments(
    config: &RunConfig,
    set: &RestrictedSet,
    s_min: u32,
    s_max: u32,
) -> Result<Outcome, CliError> {
    let mut report = new_report(
        config,
        &[
            "s",
            "gcd",
            "moment",
            "quadrature",
            "quad_rel_err",
            "u_max",
            "bound",
            "holds",
        ],
    );
    let mut breaches = Vec::new();
    for s in s_min..=s_max {
        let mb = moment_bound(set, s)?;
        let quadrature = match mb.moment {
            Some(_) => match moment_quadrature(set, s) {
                Ok(v) => Some(v),
                Err(e) if e.is_cap() => None,
                Err(e) => return Err(e.into()),
            },
            None => None,
        };
        let rel_err = mb
            .moment
            .zip(quadrature)
            .map(|(m, q)| (q - m as f64).abs() / m as f64);
        if mb.holds == Some(false) {
            breaches.push(format!(
                "s = {s}: moment {:?} exceeds bound {}",
                mb.moment, mb.bound
            ));
        }
        if rel_err.is_some_and(|e| e > SELF_CHECK_TOL) {
            breaches.push(format!("s = {s}: quadrature off by {:e}", rel_err.unwrap()));
        }
        report.push_row(vec![
            s.into(),
            mb.gcd.into(),
            mb.moment.into(),
            quadrature.into(),
            rel_err.into(),
            mb.u_max.into(),
            mb.bound.into(),
            mb.holds.into(),
        ]);
    }
    report.summarize("violations", breaches.len());
    Ok(Outcome {
        report,
        breach: (!breaches.is_empty()).then(|| breaches.join("; ")),
    })
}

fn sievebound(
    config: &RunConfig,
    set: &RestrictedSet,
    m_min: u64,
    m_max: u64,
    discard: Option<(u64, f64)>,
) -> Result<Outcome, CliError> {
    let checks = (m_min..=m_max)
        .into_par_iter()
        .map(|m| set.sieve_bound_check(m))
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = new_report(config, &["m", "count", "bound", "holds"]);
    let mut failed = Vec::new();
    for c in &checks {
        if !c.holds {
            failed.push(c.m);
        }
        report.push_row(vec![
            c.m.into(),
            c.count.into(),
            c.bound.into(),
            c.holds.into(),
        ]);
    }
    report.summarize("violations", failed.len());
    if let Some((r, y)) = discard {
        report.summarize("discard_count", set.divisor_discard_count(r, y)?);
    }
    let breach = (!failed.is_empty()).then(|| {
        format!(
            "multiples bound fails for {} modulus/moduli, first m = {}",
            failed.len(),
            failed[0]
        )
    });
    Ok(Outcome { report, breach })
}

fn ucolumn(config: &RunConfig, s: u32) -> Result<Outcome, CliError> {
    let system = &config.system;
    let column = u_column_all(system, s)?;
    let oracle = u_oracle_all(system, s)?;
    let mut report = new_report(config, &["n", "u", "oracle", "diff"]);
    let mut max_diff = 0.0f64;
    for (n, (&u, &o)) in column.iter().zip(&oracle).enumerate() {
        let diff = (u - o as f64).abs();
        max_diff = max_diff.max(diff);
        report.push_row(vec![n.into(), u.into(), o.into(), diff.into()]);
    }
    let total = (system.len() as u128).pow(2 * s);
    let oracle_sum: u128 = oracle.iter().map(|&o| o as u128).sum();
    report.summarize("oracle_sum", oracle_sum);
    report.summarize("digit_tuples", total);
    report.summarize("u_max", u_max(system, s)?);
    report.summarize("u_max_ratio", u_max_ratio(system, s)?);
    report.summarize("majorant", u_majorant(system, s)?);
    report.summarize("spread_gcd", system.spread_gcd());
    report.summarize("max_diff", max_diff);

    let mut breaches = Vec::new();
    if max_diff > COLUMN_TOL {
        breaches.push(format!(
            "column formula differs from the oracle by {max_diff:e}"
        ));
    }
    if oracle_sum != total {
        breaches.push(format!("oracle sums to {oracle_sum}, expected {total}"));
    }
    Ok(Outcome {
        report,
        breach: (!breaches.is_empty()).then(|| breaches.join("; ")),
    })
}
