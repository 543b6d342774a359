use rayon::prelude::*;

use super::factor::Factorization;
use super::modular::{isqrt, primes_up_to};
use crate::error::{Error, Result};

/// Tunables for [`FactorSieve`] construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Entries filled per work unit.
    pub segment_len: usize,
    /// Largest table (in entries) the sieve may allocate. Each entry is 4 bytes.
    pub max_entries: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_len: 1 << 20,
            max_entries: 1 << 28,
        }
    }
}

impl SieveConfig {
    /// Budget from a byte count, e.g. a user-supplied memory cap.
    pub fn with_memory_bytes(mut self, bytes: u64) -> Self {
        self.max_entries = bytes / 4;
        self
    }
}

/// Smallest-prime-factor table for `2..=limit`.
///
/// Entries `0` and `1` hold zero. For `n >= 2`, `spf[n]` is the least prime
/// dividing `n`, so `spf[n] == n` exactly when `n` is prime.
#[derive(Clone)]
pub struct FactorSieve {
    limit: u64,
    spf: Vec<u32>,
}

impl std::fmt::Debug for FactorSieve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorSieve").field("limit", &self.limit).finish()
    }
}

impl FactorSieve {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_config(limit, SieveConfig::default())
    }

    pub fn with_config(limit: u64, config: SieveConfig) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit must be at least 2, got {limit}")));
        }
        let budget = config.max_entries.min(u32::MAX as u64);
        if limit + 1 > budget {
            return Err(Error::BudgetExceeded {
                requested: limit + 1,
                budget,
            });
        }
        let base = primes_up_to(isqrt(limit));
        let mut spf = vec![0u32; limit as usize + 1];
        let seg = config.segment_len.max(1);
        spf.par_chunks_mut(seg).enumerate().for_each(|(i, block)| {
            let lo = (i * seg) as u64;
            let hi = lo + block.len() as u64;
            for &p in &base {
                if p * p >= hi {
                    break;
                }
                let first = (p * p).max(lo.div_ceil(p) * p);
                let mut m = first;
                while m < hi {
                    let slot = &mut block[(m - lo) as usize];
                    if *slot == 0 {
                        *slot = p as u32;
                    }
                    m += p;
                }
            }
            for (j, slot) in block.iter_mut().enumerate() {
                let n = lo + j as u64;
                if n >= 2 && *slot == 0 {
                    *slot = n as u32;
                }
            }
        });
        Ok(FactorSieve { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n` (`2 <= n <= limit`).
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    pub fn check(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.limit {
            return Err(Error::OutOfRange {
                value: n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Prime powers `(p, e)` of `n` in ascending order of `p`, without allocating.
    /// `n` must lie in `1..=limit`.
    pub fn prime_powers(&self, n: u64) -> PrimePowers<'_> {
        PrimePowers { sieve: self, rest: n }
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check(n)?;
        Ok(Factorization::from_pairs_unchecked(self.prime_powers(n).collect()))
    }

    /// Primes in `lo..=hi` (clamped to the sieve), ascending.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Vec<u64> {
        let hi = hi.min(self.limit);
        (lo.max(2)..=hi).filter(|&n| self.spf[n as usize] as u64 == n).collect()
    }
}

pub struct PrimePowers<'a> {
    sieve: &'a FactorSieve,
    rest: u64,
}

impl Iterator for PrimePowers<'_> {
    type Item = (u64, u32);

    fn next(&mut self) -> Option<(u64, u32)> {
        if self.rest <= 1 {
            return None;
        }
        let p = self.sieve.spf[self.rest as usize] as u64;
        let mut e = 0;
        while self.rest.is_multiple_of(p) {
            self.rest /= p;
            e += 1;
        }
        Some((p, e))
    }
}

pub fn build_sieve(x: u64) -> Result<FactorSieve> {
    FactorSieve::new(x)
}
