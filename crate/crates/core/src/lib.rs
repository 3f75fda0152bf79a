//! Digitally restricted integers and the Goldbach problem, at desk scale.
//!
//! The crate covers restricted digit sets `A_k` (membership, enumeration,
//! residue-class counting), the exponential sums `f`, `S` and `K`, a
//! major/minor arc partition with exact DFT-grid quadrature of `r(n, B)`,
//! exact even moments of `f`, and a Goldbach exception scanner.

pub mod circle;
pub mod digitset;
pub mod error;
pub mod expsum;
pub mod moments;
pub mod ntt;
pub mod phase;
pub mod primes;

pub use circle::{ArcPartition, GridTransform, Region};
pub use digitset::{gcd_reduce, DigitSystem, RestrictedSet, SieveBound};
pub use error::{Error, Result};
pub use expsum::{ComplexValue, Sign, SignVector};
pub use moments::{MomentBound, SumSpectrum};
pub use primes::{exception_scan, GoldbachRecord, OddSieve, PrimeTable, ScanResult};
