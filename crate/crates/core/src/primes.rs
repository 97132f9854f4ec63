//! Rational and Gaussian primality.
//!
//! [`PrimeTable`] is a plain sieve of Eratosthenes with an optional on-disk
//! cache. Point queries beyond the table fall back to a deterministic
//! Miller-Rabin test, so every answer here is exact for 64-bit input.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::zcore::{GaussianInt, Parity, Region};

/// Magic header of the prime cache file.
pub const CACHE_MAGIC: &[u8; 8] = b"SHNPRIM1";

#[derive(Debug, Error)]
pub enum PrimeError {
    #[error("sieve limit must be at least 2, got {0}")]
    LimitTooSmall(u64),
    #[error("{0} is not a gaussian prime")]
    NotGaussianPrime(GaussianInt),
    #[error("prime cache is malformed: {0}")]
    CacheFormat(String),
    #[error("prime cache i/o: {0}")]
    Io(#[from] io::Error),
}

/// All rational primes up to `limit`, ascending, with O(1) membership.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    is_prime: Vec<bool>,
}

impl PrimeTable {
    pub fn sieve(limit: u64) -> Result<PrimeTable, PrimeError> {
        if limit < 2 {
            return Err(PrimeError::LimitTooSmall(limit));
        }
        let n = limit as usize;
        let mut is_prime = vec![true; n + 1];
        is_prime[0] = false;
        is_prime[1] = false;
        let mut i = 2;
        while i * i <= n {
            if is_prime[i] {
                let mut j = i * i;
                while j <= n {
                    is_prime[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        let primes = is_prime
            .iter()
            .enumerate()
            .filter_map(|(k, &p)| p.then_some(k as u64))
            .collect();
        Ok(PrimeTable {
            limit,
            primes,
            is_prime,
        })
    }

    fn from_primes(limit: u64, primes: Vec<u64>) -> PrimeTable {
        let mut is_prime = vec![false; limit as usize + 1];
        for &p in &primes {
            is_prime[p as usize] = true;
        }
        PrimeTable {
            limit,
            primes,
            is_prime,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Exact primality of `n`; table lookup when `n ≤ limit`.
    pub fn is_prime(&self, n: u64) -> bool {
        match self.is_prime.get(n as usize) {
            Some(&p) => p,
            None => is_prime_u64(n),
        }
    }

    pub fn odd_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied().filter(|&p| p != 2)
    }

    /// Primes `p ≡ residue (mod modulus)`.
    pub fn primes_in_class(&self, residue: u64, modulus: u64) -> impl Iterator<Item = u64> + '_ {
        self.primes
            .iter()
            .copied()
            .filter(move |p| p % modulus == residue % modulus)
    }

    pub fn write_cache(&self, path: &Path) -> Result<(), PrimeError> {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(CACHE_MAGIC)?;
        for &p in &self.primes {
            out.write_all(&p.to_le_bytes())?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a cache file and keeps the primes up to `limit`. Returns `None`
    /// when the cached primes may not cover `limit`.
    pub fn read_cache(path: &Path, limit: u64) -> Result<Option<PrimeTable>, PrimeError> {
        if limit < 2 {
            return Err(PrimeError::LimitTooSmall(limit));
        }
        let mut bytes = Vec::new();
        BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
        if bytes.len() < 8 || &bytes[..8] != CACHE_MAGIC {
            return Err(PrimeError::CacheFormat("missing SHNPRIM1 header".into()));
        }
        let body = &bytes[8..];
        if body.len() % 8 != 0 {
            return Err(PrimeError::CacheFormat("truncated entry".into()));
        }
        let cached: Vec<u64> = body
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        if cached.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PrimeError::CacheFormat(
                "primes not strictly ascending".into(),
            ));
        }
        // The file does not record the limit it was sieved to, only its
        // largest prime; anything past that has to be re-sieved.
        match cached.last() {
            Some(&last) if last >= limit => {
                let primes = cached.into_iter().take_while(|&p| p <= limit).collect();
                Ok(Some(PrimeTable::from_primes(limit, primes)))
            }
            _ => Ok(None),
        }
    }

    /// Loads `limit` from the cache at `path`, regenerating and rewriting the
    /// file when it is missing or too small.
    pub fn load_or_build(path: &Path, limit: u64) -> Result<PrimeTable, PrimeError> {
        if path.exists() {
            if let Some(table) = PrimeTable::read_cache(path, limit)? {
                return Ok(table);
            }
        }
        let table = PrimeTable::sieve(limit)?;
        table.write_cache(path)?;
        Ok(table)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are sufficient
/// for every `n < 3.3·10^24`.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// True iff `|n|` is a rational prime.
pub fn is_rational_prime(n: i64) -> bool {
    is_prime_u64(n.unsigned_abs())
}

/// How a Gaussian prime sits over its rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GaussPrimeClass {
    /// Associate of `1+i`, norm 2.
    Ramified,
    /// Norm is a rational prime `≡ 1 (mod 4)`.
    Split,
    /// Associate of a rational prime `≡ 3 (mod 4)`, norm `p²`.
    Inert,
}

fn classify_with(z: GaussianInt, is_prime: impl Fn(u64) -> bool) -> Option<GaussPrimeClass> {
    let (re, im) = (z.re(), z.im());
    if re == 0 || im == 0 {
        let n = re.unsigned_abs().max(im.unsigned_abs());
        return (n % 4 == 3 && is_prime(n)).then_some(GaussPrimeClass::Inert);
    }
    let norm = z.norm();
    if norm == 2 {
        Some(GaussPrimeClass::Ramified)
    } else if is_prime(norm) {
        Some(GaussPrimeClass::Split)
    } else {
        None
    }
}

pub fn is_gaussian_prime(z: GaussianInt) -> bool {
    classify_with(z, is_prime_u64).is_some()
}

/// Gaussian primality answered from `table` where it reaches.
pub fn is_gaussian_prime_in(table: &PrimeTable, z: GaussianInt) -> bool {
    classify_with(z, |n| table.is_prime(n)).is_some()
}

pub fn classify_gaussian_prime(z: GaussianInt) -> Result<GaussPrimeClass, PrimeError> {
    classify_with(z, is_prime_u64).ok_or(PrimeError::NotGaussianPrime(z))
}

/// Largest `r` with `r² < bound`.
pub(crate) fn radius_below(bound: u64) -> i64 {
    if bound == 0 {
        return -1;
    }
    let mut r = ((bound - 1) as f64).sqrt() as i64;
    while r > 0 && (r * r) as u64 >= bound {
        r -= 1;
    }
    while (((r + 1) * (r + 1)) as u64) < bound {
        r += 1;
    }
    r
}

/// Gaussian primes in `region` with `norm < norm_bound`, optionally of one
/// parity, sorted by (norm, re, im).
pub fn gaussian_primes_in(
    region: Region,
    norm_bound: u64,
    parity_filter: Option<Parity>,
) -> Vec<GaussianInt> {
    if norm_bound <= 2 {
        return Vec::new();
    }
    let table = PrimeTable::sieve(norm_bound).expect("norm bound above 2");
    gaussian_primes_in_with(&table, region, norm_bound, parity_filter)
}

/// Same as [`gaussian_primes_in`] over a caller-supplied table.
pub fn gaussian_primes_in_with(
    table: &PrimeTable,
    region: Region,
    norm_bound: u64,
    parity_filter: Option<Parity>,
) -> Vec<GaussianInt> {
    let r = radius_below(norm_bound);
    let mut out = Vec::new();
    for re in -r..=r {
        for im in -r..=r {
            let z = GaussianInt::new(re, im);
            if z.norm() >= norm_bound || !region.contains(z) {
                continue;
            }
            if parity_filter.is_some_and(|p| z.parity() != p) {
                continue;
            }
            if is_gaussian_prime_in(table, z) {
                out.push(z);
            }
        }
    }
    out.sort_by(GaussianInt::canonical_cmp);
    out
}
