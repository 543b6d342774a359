//! Counts of σ(n) mod q by residue class, twisted sums Σ χ(σ(n)), and the
//! prime reciprocal sums that set the exponent of the main term.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::factor::sigma_mod_pairs;
use crate::arith::modular::gcd;
use crate::arith::FactorSieve;
use crate::charsums::PolynomialSpec;
use crate::error::{Error, Result};
use crate::parallel;
use crate::units::{DirichletCharacter, Modulus, RootOfUnitySum};

/// Largest modulus for which per-class counters are kept densely.
pub const CENSUS_MODULUS_BUDGET: u64 = 1 << 20;

/// Which n ≤ x enter a census.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CensusFilter {
    All,
    /// gcd(n, q) = 1.
    CoprimeOnly,
    /// P_k(n) > threshold.
    PkAbove { k: u32, threshold: u64 },
    /// P_k(n) ≤ bound.
    PkAtMost { k: u32, bound: u64 },
}

impl CensusFilter {
    fn validate(&self) -> Result<()> {
        match *self {
            CensusFilter::PkAbove { k: 0, .. } | CensusFilter::PkAtMost { k: 0, .. } => {
                Err(Error::Domain("k must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Whether n passes, given the modulus q.
    pub fn accepts(&self, n: u64, q: u64, sieve: &FactorSieve) -> bool {
        match *self {
            CensusFilter::All => true,
            CensusFilter::CoprimeOnly => gcd(n, q) == 1,
            CensusFilter::PkAbove { k, threshold } => large_factor_count(n, threshold, sieve) >= k,
            CensusFilter::PkAtMost { k, bound } => large_factor_count(n, bound, sieve) < k,
        }
    }
}

/// Number of prime factors of n above t, with multiplicity. P_k(n) > t
/// exactly when this is at least k.
fn large_factor_count(n: u64, t: u64, sieve: &FactorSieve) -> u32 {
    sieve
        .prime_powers(n)
        .filter(|&(p, _)| p > t)
        .map(|(_, e)| e)
        .sum()
}

/// y = exp((log x)^{ε/2}), the cut between small and large prime factors.
pub fn y_threshold(x: f64, eps: f64) -> f64 {
    x.ln().powf(eps / 2.0).exp()
}

/// z = x^{1/log log x}, the smoothness cut.
pub fn z_threshold(x: f64) -> f64 {
    x.powf(1.0 / x.ln().ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub x: u64,
    pub q: u64,
    pub filter: CensusFilter,
    /// #{n ≤ x filtered : σ(n) ≡ a mod q} for every unit a.
    pub counts: BTreeMap<u64, u64>,
    pub total_coprime: u64,
    /// `total_coprime / φ(q)`.
    pub mean: f64,
    /// max_a |count(a) / mean - 1|; `None` for an empty census.
    pub max_rel_deviation: Option<f64>,
    pub alpha: f64,
    pub alpha_tilde: f64,
}

fn ratio_f64(r: crate::Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Counts σ(n) mod q over the coprime classes for filtered n ≤ x.
pub fn census(x: u64, m: &Modulus, filter: CensusFilter, sieve: &FactorSieve) -> Result<CensusReport> {
    filter.validate()?;
    sieve.check(x)?;
    let q = m.q();
    if q > CENSUS_MODULUS_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: q,
            budget: CENSUS_MODULUS_BUDGET,
        });
    }
    let by_residue = parallel::chunks(1, x)
        .fold(
            || vec![0u64; q as usize],
            |mut acc, (lo, hi)| {
                for n in lo..hi {
                    if !filter.accepts(n, q, sieve) {
                        continue;
                    }
                    let s = sigma_mod_pairs(sieve.prime_powers(n), q);
                    if gcd(s, q) == 1 {
                        acc[s as usize] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; q as usize],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let counts: BTreeMap<u64, u64> = m.units().map(|a| (a, by_residue[a as usize])).collect();
    let total_coprime = counts.values().sum();
    let mut report = CensusReport {
        x,
        q,
        filter,
        counts,
        total_coprime,
        mean: total_coprime as f64 / m.phi() as f64,
        max_rel_deviation: None,
        alpha: ratio_f64(m.alpha()),
        alpha_tilde: ratio_f64(m.alpha_tilde()),
    };
    report.max_rel_deviation = discrepancy(&report).ok();
    Ok(report)
}

/// max over classes a of |count(a) φ(q) / total - 1|.
pub fn discrepancy(report: &CensusReport) -> Result<f64> {
    if report.total_coprime == 0 {
        return Err(Error::EmptyCensus);
    }
    let mean = report.total_coprime as f64 / report.counts.len() as f64;
    Ok(report
        .counts
        .values()
        .map(|&c| (c as f64 / mean - 1.0).abs())
        .fold(0.0, f64::max))
}

/// Σ χ(σ(n)) over filtered n ≤ x, kept as exact root-of-unity multiplicities.
pub fn twisted_partial_sum_exact(
    x: u64,
    chi: &DirichletCharacter,
    filter: CensusFilter,
    sieve: &FactorSieve,
) -> Result<RootOfUnitySum> {
    filter.validate()?;
    sieve.check(x)?;
    let q = chi.q();
    let order = chi.order();
    Ok(parallel::chunks(1, x)
        .fold(
            || RootOfUnitySum::new(order),
            |mut acc, (lo, hi)| {
                for n in lo..hi {
                    if filter.accepts(n, q, sieve) {
                        acc.add(chi.evaluate(sigma_mod_pairs(sieve.prime_powers(n), q)));
                    }
                }
                acc
            },
        )
        .reduce(
            || RootOfUnitySum::new(order),
            |mut a, b| {
                a.merge(&b);
                a
            },
        ))
}

/// Σ χ(σ(n)) over filtered n ≤ x.
pub fn twisted_partial_sum(
    x: u64,
    chi: &DirichletCharacter,
    filter: CensusFilter,
    sieve: &FactorSieve,
) -> Result<Complex64> {
    Ok(twisted_partial_sum_exact(x, chi, filter, sieve)?.value())
}

/// Σ_{p ≤ x, gcd(F(p), q) = 1} 1/p, summed in increasing order of p.
pub fn prime_reciprocal_sum(f: &PolynomialSpec, m: &Modulus, x: u64, sieve: &FactorSieve) -> Result<f64> {
    sieve.check(x)?;
    let q = m.q();
    let mut acc = 0.0;
    for p in 2..=x {
        if sieve.is_prime(p) && gcd(f.eval_mod(p, q), q) == 1 {
            acc += 1.0 / p as f64;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoughEstimate {
    pub parity: Parity,
    /// α(q) for odd q, α̃(q) for even q.
    pub exponent: f64,
    /// x/(log x)^{1-α} for odd q, x^{1/2}/(log x)^{1-α̃} for even q.
    pub value: f64,
    /// The exp(O(·)) correction factor is never included.
    pub correction_omitted: bool,
}

/// Shape of #{n ≤ x : gcd(σ(n), q) = 1}, by the parity of q.
pub fn rough_count_estimate(x: f64, m: &Modulus) -> Result<RoughEstimate> {
    if !(x > 1.0) {
        return Err(Error::Domain(format!("x must exceed 1, got {x}")));
    }
    let q = m.q();
    let (parity, exponent, base) = if q % 2 == 1 {
        (Parity::Odd, ratio_f64(m.alpha()), x)
    } else if q.is_multiple_of(3) {
        return Err(Error::UnsupportedModulus {
            q,
            reason: "for q divisible by 6, σ(n) is rarely coprime to q",
        });
    } else {
        (Parity::Even, ratio_f64(m.alpha_tilde()), x.sqrt())
    };
    Ok(RoughEstimate {
        parity,
        exponent,
        value: base / x.ln().powf(1.0 - exponent),
        correction_omitted: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor::{sigma_mod, two_adic_square_form};
    use crate::units::enumerate_characters;

    fn sieve(n: u64) -> FactorSieve {
        FactorSieve::new(n).unwrap()
    }

    fn sigma(n: u64) -> u64 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
    }

    #[test]
    fn partition_small() {
        let s = sieve(1000);
        let m = Modulus::new(5).unwrap();
        let r = census(100, &m, CensusFilter::All, &s).unwrap();
        let direct = (1..=100u64).filter(|&n| !sigma(n).is_multiple_of(5)).count() as u64;
        assert_eq!(r.total_coprime, direct);
        for (&a, &c) in &r.counts {
            assert_eq!(c, (1..=100u64).filter(|&n| sigma(n) % 5 == a).count() as u64);
        }
    }

    #[test]
    fn even_modulus_is_two_adic_squares() {
        let s = sieve(100_000);
        let r = census(100_000, &Modulus::new(2).unwrap(), CensusFilter::All, &s).unwrap();
        let expect = (1..=100_000u64)
            .filter(|&n| two_adic_square_form(&s.factorize(n).unwrap()).valid)
            .count() as u64;
        assert_eq!(r.total_coprime, expect);
        assert_eq!(discrepancy(&r).unwrap(), 0.0);
    }

    #[test]
    fn filters() {
        let s = sieve(20_000);
        let m = Modulus::new(10).unwrap();
        let all = census(20_000, &m, CensusFilter::All, &s).unwrap();
        let p4 = census(20_000, &m, CensusFilter::PkAbove { k: 4, threshold: 3 }, &s).unwrap();
        let p6 = census(20_000, &m, CensusFilter::PkAbove { k: 6, threshold: 3 }, &s).unwrap();
        for a in all.counts.keys() {
            assert!(p6.counts[a] <= p4.counts[a] && p4.counts[a] <= all.counts[a]);
        }
        let low = census(20_000, &m, CensusFilter::PkAtMost { k: 4, bound: 3 }, &s).unwrap();
        assert_eq!(low.total_coprime + p4.total_coprime, all.total_coprime);
        let cop = census(20_000, &m, CensusFilter::CoprimeOnly, &s).unwrap();
        let direct = (1..=20_000u64)
            .filter(|&n| gcd(n, 10) == 1 && gcd(sigma_mod(&s.factorize(n).unwrap(), 10), 10) == 1)
            .count() as u64;
        assert_eq!(cop.total_coprime, direct);
        assert!(census(10, &m, CensusFilter::PkAbove { k: 0, threshold: 1 }, &s).is_err());
    }

    #[test]
    fn twisted_sums() {
        let s = sieve(10_000);
        let m = Modulus::new(15).unwrap();
        let chars = enumerate_characters(&m);
        let r = census(10_000, &m, CensusFilter::All, &s).unwrap();
        let t0 = twisted_partial_sum(10_000, &chars[0], CensusFilter::All, &s).unwrap();
        assert_eq!(t0, Complex64::new(r.total_coprime as f64, 0.0));
        for chi in &chars {
            assert_eq!(twisted_partial_sum(1, chi, CensusFilter::All, &s).unwrap(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn prime_reciprocals() {
        let s = sieve(1000);
        let one = Modulus::new(1).unwrap();
        let v = prime_reciprocal_sum(&PolynomialSpec::shift(), &one, 100, &s).unwrap();
        assert!((v - 1.802_817_201_048_870_6).abs() < 1e-12);
        let three = Modulus::new(3).unwrap();
        let v = prime_reciprocal_sum(&PolynomialSpec::shift(), &three, 20, &s).unwrap();
        let expect = 1.0 / 3.0 + 1.0 / 7.0 + 1.0 / 13.0 + 1.0 / 19.0;
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn estimates_and_discrepancy() {
        let e = rough_count_estimate(1e6, &Modulus::new(1).unwrap()).unwrap();
        assert!((e.value - 1e6).abs() < 1e-6);
        let e = rough_count_estimate(1e6, &Modulus::new(5).unwrap()).unwrap();
        assert!((e.value - 1e6 / 1e6f64.ln().powf(0.25)).abs() < 1e-6);
        let e = rough_count_estimate(1e6, &Modulus::new(10).unwrap()).unwrap();
        assert_eq!(e.parity, Parity::Even);
        assert!((e.value - 1e3).abs() < 1e-9);
        assert!(rough_count_estimate(1e6, &Modulus::new(12).unwrap()).is_err());

        let mut r = census(1, &Modulus::new(5).unwrap(), CensusFilter::All, &sieve(10)).unwrap();
        for c in r.counts.values_mut() {
            *c = 7;
        }
        r.total_coprime = 28;
        assert_eq!(discrepancy(&r).unwrap(), 0.0);
        r.total_coprime = 0;
        assert_eq!(discrepancy(&r), Err(Error::EmptyCensus));
    }

    #[test]
    fn thresholds() {
        assert!((z_threshold(1e6) - 1e6f64.powf(1.0 / 1e6f64.ln().ln())).abs() < 1e-9);
        assert!(y_threshold(1e6, 1.0) > 1.0);
    }
}
