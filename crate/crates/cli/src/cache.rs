//! On-disk prime sieve cache.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! b"DGPRIMES1" | X: u64 | P: u64 | sieve words: u64 * ceil((X/2)/64) | SHA-256 of everything before
//! ```
//!
//! The sieve is the odd-only bitset of [`OddSieve`]; bit `i` stands for `2i + 1`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use digold_core::primes::OddSieve;
use digold_core::PrimeTable;
use sha2::{Digest, Sha256};

pub const MAGIC: &[u8; 9] = b"DGPRIMES1";
pub const CACHE_DIR_ENV: &str = "DIGOLD_CACHE_DIR";

const HEADER_LEN: usize = MAGIC.len() + 16;
const DIGEST_LEN: usize = 32;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cache file is corrupt: {0}")]
    Corrupt(&'static str),
    #[error("cache holds X = {found_x}, P = {found_p}; wanted X = {x}, P = {p}")]
    Mismatch {
        x: u64,
        p: u64,
        found_x: u64,
        found_p: u64,
    },
}

/// What happened when a table was requested through the cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Built,
    /// The file existed but was stale or unreadable and has been replaced.
    Rebuilt,
}

pub fn encode(cutoff: u64, sieve: &OddSieve) -> Vec<u8> {
    let words = sieve.words();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * words.len() + DIGEST_LEN);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&sieve.limit().to_le_bytes());
    out.extend_from_slice(&cutoff.to_le_bytes());
    for w in words {
        out.extend_from_slice(&w.to_le_bytes());
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    out
}

fn read_u64(bytes: &[u8]) -> u64 {
    u64::from_le_bytes(bytes.try_into().unwrap())
}

/// Parses a cache image, returning `(X, P, sieve)`.
pub fn decode(bytes: &[u8]) -> Result<(u64, u64, OddSieve), CacheError> {
    if bytes.len() < HEADER_LEN + DIGEST_LEN {
        return Err(CacheError::Corrupt("truncated"));
    }
    if &bytes[..MAGIC.len()] != MAGIC {
        return Err(CacheError::Corrupt("bad magic"));
    }
    let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body).as_slice() != digest {
        return Err(CacheError::Corrupt("checksum mismatch"));
    }
    let x = read_u64(&body[MAGIC.len()..MAGIC.len() + 8]);
    let p = read_u64(&body[MAGIC.len() + 8..HEADER_LEN]);
    let payload = &body[HEADER_LEN..];
    if payload.len() % 8 != 0 {
        return Err(CacheError::Corrupt("sieve is not a whole number of words"));
    }
    let words = payload.chunks_exact(8).map(read_u64).collect();
    let sieve = OddSieve::from_words(x, words)
        .map_err(|_| CacheError::Corrupt("sieve length disagrees with X"))?;
    Ok((x, p, sieve))
}

/// Reads a cache file and checks it was built for `(x, p)`.
pub fn load(path: &Path, x: u64, p: u64) -> Result<OddSieve, CacheError> {
    let bytes = fs::read(path).map_err(|source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let (found_x, found_p, sieve) = decode(&bytes)?;
    if (found_x, found_p) != (x, p) {
        return Err(CacheError::Mismatch {
            x,
            p,
            found_x,
            found_p,
        });
    }
    Ok(sieve)
}

/// Writes through a temporary file so readers never see a partial image.
pub fn store(path: &Path, cutoff: u64, sieve: &OddSieve) -> Result<(), CacheError> {
    let io_err = |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut file = fs::File::create(&tmp).map_err(io_err)?;
    file.write_all(&encode(cutoff, sieve)).map_err(io_err)?;
    file.sync_all().map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

/// Default file name inside the cache directory.
pub fn default_path(dir: &Path, x: u64, p: u64) -> PathBuf {
    dir.join(format!("primes-{x}-{p}.bin"))
}

/// Table for `(x, p)`, read from `path` when valid and (re)written otherwise.
pub fn table(
    path: Option<&Path>,
    x: u64,
    p: u64,
) -> Result<(PrimeTable, Option<CacheOutcome>), crate::CliError> {
    let Some(path) = path else {
        return Ok((PrimeTable::with_cutoff(x, p)?, None));
    };
    let outcome = match load(path, x, p) {
        Ok(sieve) => return Ok((PrimeTable::from_sieve(p, sieve)?, Some(CacheOutcome::Hit))),
        Err(CacheError::Io { ref source, .. }) if source.kind() == io::ErrorKind::NotFound => {
            CacheOutcome::Built
        }
        Err(e) => {
            eprintln!("digold: rebuilding sieve cache: {e}");
            CacheOutcome::Rebuilt
        }
    };
    let table = PrimeTable::with_cutoff(x, p)?;
    store(path, p, table.sieve())?;
    Ok((table, Some(outcome)))
}
