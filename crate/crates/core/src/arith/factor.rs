use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::modular::{geometric_sum_mod, isqrt, mul_mod};
use super::sieve::FactorSieve;
use crate::error::{Error, Result};
use crate::parallel;

/// Canonical factorization: primes strictly increasing, exponents at least 1.
/// The empty list is the factorization of 1.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn new(pairs: Vec<(u64, u32)>) -> Result<Self> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Domain("primes must be strictly increasing".into()));
            }
        }
        if pairs.iter().any(|&(p, e)| e == 0 || p < 2) {
            return Err(Error::Domain("exponents must be positive".into()));
        }
        Ok(Factorization { pairs })
    }

    pub(crate) fn from_pairs_unchecked(pairs: Vec<(u64, u32)>) -> Self {
        Factorization { pairs }
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// The factored integer. Panics on overflow.
    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product()
    }

    /// ω(n)
    pub fn distinct_primes(&self) -> usize {
        self.pairs.len()
    }

    /// Ω(n)
    pub fn total_primes(&self) -> u32 {
        self.pairs.iter().map(|&(_, e)| e).sum()
    }

    /// P(n), with P(1) = 1.
    pub fn largest_prime(&self) -> u64 {
        self.pairs.last().map_or(1, |&(p, _)| p)
    }

    /// P⁻(n), with P⁻(1) = 1.
    pub fn smallest_prime(&self) -> u64 {
        self.pairs.first().map_or(1, |&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }

    pub fn sigma_mod(&self, q: u64) -> u64 {
        sigma_mod(self, q)
    }

    pub fn kth_largest_prime(&self, k: u32) -> u64 {
        kth_largest_prime_factor(self, k)
    }
}

/// σ(n) mod q, as the product of 1 + p + ... + p^e over the prime powers of n.
pub fn sigma_mod(n: &Factorization, q: u64) -> u64 {
    sigma_mod_pairs(n.pairs.iter().copied(), q)
}

pub(crate) fn sigma_mod_pairs(pairs: impl Iterator<Item = (u64, u32)>, q: u64) -> u64 {
    let mut acc = 1 % q;
    for (p, e) in pairs {
        acc = mul_mod(acc, geometric_sum_mod(p, e, q), q);
    }
    acc
}

/// P_k(n): the k-th largest prime factor counted with multiplicity, or 1 when Ω(n) < k.
pub fn kth_largest_prime_factor(n: &Factorization, k: u32) -> u64 {
    assert!(k >= 1, "k must be at least 1");
    let mut seen = 0;
    for &(p, e) in n.pairs.iter().rev() {
        seen += e;
        if seen >= k {
            return p;
        }
    }
    1
}

/// Decomposition n = 2^k · m² with m odd, when the odd part of n is a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoAdicSquareForm {
    pub k: u32,
    pub m: u64,
    pub valid: bool,
}

pub fn two_adic_square_form(n: &Factorization) -> TwoAdicSquareForm {
    let mut k = 0;
    let mut m = 1u64;
    for &(p, e) in &n.pairs {
        if p == 2 {
            k = e;
        } else if e % 2 == 1 {
            return TwoAdicSquareForm { k, m: 0, valid: false };
        } else {
            m *= p.pow(e / 2);
        }
    }
    TwoAdicSquareForm { k, m, valid: true }
}

/// Ψ(x, z) = #{n <= x : P(n) <= z}, counting n = 1.
pub fn psi_smooth_count(x: u64, z: f64, sieve: &FactorSieve) -> Result<u64> {
    if x == 0 {
        return Err(Error::Domain("x must be at least 1".into()));
    }
    if z < 2.0 {
        return Err(Error::Domain(format!("z must be at least 2, got {z}")));
    }
    sieve.check(x)?;
    let zf = z.floor() as u64;
    Ok(parallel::chunks(1, x)
        .map(|(lo, hi)| {
            (lo..hi)
                .filter(|&n| sieve.prime_powers(n).last().map_or(1, |(p, _)| p) <= zf)
                .count() as u64
        })
        .sum())
}

/// #{n <= x : P⁻(n) > y}, counting n = 1.
pub fn rough_count(x: u64, y: f64, sieve: &FactorSieve) -> Result<u64> {
    sieve.check(x)?;
    Ok(parallel::chunks(1, x)
        .map(|(lo, hi)| {
            (lo..hi)
                .filter(|&n| n == 1 || (sieve.spf(n) as f64) > y)
                .count() as u64
        })
        .sum())
}

/// Whether n is a perfect square.
pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}
