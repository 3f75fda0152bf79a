//! Command-line surface and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use digold_core::digitset::ENUMERATION_CAP;
use digold_core::primes::DEFAULT_DELTA0;
use digold_core::{DigitSystem, RestrictedSet};

use crate::cache::{self, CACHE_DIR_ENV};
use crate::report::{Format, Value};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "digold",
    version,
    about = "Goldbach representations and moments for digitally restricted integers"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,

    /// Output file (standard output when absent).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct DigitArgs {
    #[arg(long, default_value_t = 10)]
    pub base: u64,

    /// Allowed digits, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub digits: Vec<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SetArgs {
    #[command(flatten)]
    pub digits: DigitArgs,

    /// Number of digit places; X = base^k.
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Clone, Args)]
pub struct PrimeArgs {
    #[arg(long, default_value_t = DEFAULT_DELTA0)]
    pub delta0: f64,

    /// Prime cutoff P (primes p <= P are dropped); defaults to floor(X^(6 delta0)).
    #[arg(long)]
    pub cutoff: Option<u64>,

    /// Sieve cache file; defaults to a file under $DIGOLD_CACHE_DIR when set.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List the members of A_k.
    Enumerate {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = ENUMERATION_CAP)]
        cap: u64,
    },
    /// Even members of A_k that are not a sum of two primes above the cutoff.
    Scan {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        primes: PrimeArgs,
        /// Exponent of the |A_k|^(1 - delta) reference count.
        #[arg(long, default_value_t = DEFAULT_DELTA0)]
        delta: f64,
    },
    /// Major/minor arc contributions on the FFT grid.
    Arcs {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        primes: PrimeArgs,
        /// Y in [1, |A_k|^delta0].
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        /// Grid size N; defaults to the smallest power of two above 2X.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Exact moments of f against the digit-column bound.
    Moments {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 1)]
        s_min: u32,
        #[arg(long, default_value_t = 3)]
        s_max: u32,
    },
    /// Multiples of m in A_k against 2b|A_k|/m^(log|D|/log b).
    Sievebound {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 2)]
        m_min: u64,
        #[arg(long)]
        m_max: u64,
        /// With --y: also report the divisor discard count for r.
        #[arg(long, requires = "y")]
        r: Option<u64>,
        #[arg(long, requires = "r")]
        y: Option<f64>,
    },
    /// The digit-column function u(n, b, D) next to its tuple-count oracle.
    Ucolumn {
        #[command(flatten)]
        digits: DigitArgs,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Scan { .. } => "scan",
            Command::Arcs { .. } => "arcs",
            Command::Moments { .. } => "moments",
            Command::Sievebound { .. } => "sievebound",
            Command::Ucolumn { .. } => "ucolumn",
        }
    }
}

/// Everything a run needs, checked before any work starts.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub system: DigitSystem,
    pub set: Option<RestrictedSet>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub threads: usize,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (digit_args, k) = match &cli.command {
            Command::Enumerate { set, .. }
            | Command::Scan { set, .. }
            | Command::Arcs { set, .. }
            | Command::Moments { set, .. }
            | Command::Sievebound { set, .. } => (&set.digits, Some(set.k)),
            Command::Ucolumn { digits, .. } => (digits, None),
        };
        let system = DigitSystem::new(digit_args.base, &digit_args.digits)?;
        let set = k
            .map(|k| RestrictedSet::new(system.clone(), k))
            .transpose()?;

        match &cli.command {
            Command::Scan { primes, delta, .. } => {
                check_fraction("delta", *delta)?;
                check_fraction("delta0", primes.delta0)?;
            }
            Command::Arcs { primes, y, .. } => {
                check_fraction("delta0", primes.delta0)?;
                if !y.is_finite() {
                    return Err(CliError::Usage(format!("Y must be finite, got {y}")));
                }
            }
            Command::Moments { s_min, s_max, .. } if s_min == &0 || s_min > s_max => {
                return Err(CliError::Usage(format!(
                    "need 1 <= s-min <= s-max, got {s_min}..{s_max}"
                )));
            }
            Command::Sievebound { m_min, m_max, .. } if m_min == &0 || m_min > m_max => {
                return Err(CliError::Usage(format!(
                    "need 1 <= m-min <= m-max, got {m_min}..{m_max}"
                )));
            }
            Command::Ucolumn { s: 0, .. } => {
                return Err(CliError::Usage("s must be at least 1".into()));
            }
            _ => {}
        }

        let cache = match &cli.command {
            Command::Scan { primes, .. } | Command::Arcs { primes, .. } => primes.cache.clone(),
            _ => None,
        };
        Ok(Self {
            command: cli.command,
            system,
            set,
            format: cli.format,
            output: cli.output,
            cache,
            threads: cli.threads,
        })
    }

    /// Cache file for a table over `(x, p)`: the explicit path, else the
    /// default name under the cache directory from the environment.
    pub fn cache_path(&self, x: u64, p: u64) -> Option<PathBuf> {
        self.cache.clone().or_else(|| {
            std::env::var_os(CACHE_DIR_ENV)
                .filter(|d| !d.is_empty())
                .map(|d| cache::default_path(d.as_ref(), x, p))
        })
    }

    /// Configuration echoed into report metadata. Paths and the thread count
    /// are left out so that output does not depend on where or how it ran.
    pub fn echo(&self) -> Vec<(String, Value)> {
        let digits = self
            .system
            .digits()
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        let mut out: Vec<(String, Value)> = vec![
            ("base".into(), self.system.base().into()),
            ("digits".into(), digits.into()),
        ];
        if let Some(set) = &self.set {
            out.push(("k".into(), set.k().into()));
            out.push(("x".into(), set.x().into()));
            out.push(("cardinality".into(), set.cardinality().into()));
        }
        let mut push = |k: &str, v: Value| out.push((k.into(), v));
        match &self.command {
            Command::Enumerate { cap, .. } => push("cap", (*cap).into()),
            Command::Scan { primes, delta, .. } => {
                push("delta0", primes.delta0.into());
                push("delta", (*delta).into());
            }
            Command::Arcs { primes, y, .. } => {
                push("delta0", primes.delta0.into());
                push("y", (*y).into());
            }
            Command::Moments { s_min, s_max, .. } => {
                push("s_min", (*s_min).into());
                push("s_max", (*s_max).into());
            }
            Command::Sievebound {
                m_min, m_max, r, y, ..
            } => {
                push("m_min", (*m_min).into());
                push("m_max", (*m_max).into());
                push("r", (*r).into());
                push("y", (*y).into());
            }
            Command::Ucolumn { s, .. } => push("s", (*s).into()),
        }
        out
    }
}

fn check_fraction(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{name} must lie in (0, 1), got {v}"
        )))
    }
}
