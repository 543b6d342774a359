use std::collections::HashMap;

use serde::Serialize;

use super::local_count;
use crate::arith::modular::{crt, gcd, inv_mod, iroot, isqrt, primes_up_to};
use crate::arith::FactorSieve;
use crate::census::{census, CensusFilter, CENSUS_MODULUS_BUDGET};
use crate::error::{Error, Result};
use crate::units::Modulus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// n = P₁²P₂² with (P₁, P₂) in the solution set of the target class.
    SquaresOfTwoPrimes,
    /// n = P² with σ(P²) ≡ 3.
    SquareOfOnePrime,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub construction: Construction,
    pub y: f64,
    pub x: u64,
    pub q: u64,
    /// The class of σ(n) mod q that the construction targets.
    pub witness_class: u64,
    /// Residue classes (or class pairs) mod q that map to the witness class.
    pub class_count: u128,
    /// Constructed n ≤ x, counted class by class through the CRT.
    pub witness_count: u64,
    /// The same count by direct enumeration of primes.
    pub direct_count: u64,
    pub census_filter: CensusFilter,
    /// Census of the witness class under the filter; `None` when q is too
    /// large for a dense census.
    pub census_class_count: Option<u64>,
    pub census_total: Option<u64>,
    /// census_total / φ(q)
    pub mean_count: Option<f64>,
    /// census_class_count / mean_count; `None` when the census is empty.
    pub ratio: Option<f64>,
}

fn odd_primes(y: f64) -> Vec<u64> {
    if y < 5.0 {
        return Vec::new();
    }
    primes_up_to(y.floor() as u64).into_iter().filter(|&p| p >= 5).collect()
}

fn product(mut factors: impl Iterator<Item = u64>, what: &str) -> Result<u64> {
    factors
        .try_fold(1u64, |acc, f| acc.checked_mul(f))
        .ok_or_else(|| Error::Overflow(format!("{what} does not fit in 64 bits")))
}

fn quad(v: u64, m: u64) -> u64 {
    ((v as u128 * v as u128 + v as u128 + 1) % m as u128) as u64
}

fn mul(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Units v mod m grouped by the value of v² + v + 1.
fn roots_by_value(m: u64) -> Vec<Vec<u64>> {
    let mut t = vec![Vec::new(); m as usize];
    for v in (0..m).filter(|&v| gcd(v, m) == 1) {
        t[quad(v, m) as usize].push(v);
    }
    t
}

/// Every residue mod ∏ m_i whose reduction mod m_i lies in `choices[i]`.
fn crt_product(moduli: &[u64], choices: &[&[u64]]) -> Vec<u64> {
    let mut acc = vec![(0u64, 1u64)];
    for (&m, opts) in moduli.iter().zip(choices) {
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for &(r, modulus) in &acc {
            for &o in opts.iter() {
                next.push(crt(&[(r, modulus), (o, m)]).expect("coprime moduli"));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(r, _)| r).collect()
}

/// Class count, total, mean and ratio from the census, when it runs.
type CensusPart = (Option<u64>, Option<u64>, Option<f64>, Option<f64>);

fn census_part(
    x: u64,
    q: u64,
    class: u64,
    filter: CensusFilter,
    sieve: &FactorSieve,
) -> Result<CensusPart> {
    if q > CENSUS_MODULUS_BUDGET {
        return Ok((None, None, None, None));
    }
    let m = Modulus::new(q)?;
    let r = census(x, &m, filter, sieve)?;
    let c = r.counts[&class];
    let mean = r.mean;
    let ratio = (r.total_coprime > 0).then(|| c as f64 / mean);
    Ok((Some(c), Some(r.total_coprime), Some(mean), ratio))
}

/// Squares n = P₁²P₂² with x^{1/10} < P₂ ≤ x^{1/6} < P₁ and P₁P₂ ≤ x^{1/2},
/// whose σ(n) lands on w_q mod q = 2 (∏_{5≤ℓ≤Y} ℓ)², where w_q ≡ 9·16⁻¹ mod
/// every ℓ². The class is then compared with the census mean under
/// P₄(n) > q.
pub fn overrep_witness_even(y: f64, x: u64, sieve: &FactorSieve) -> Result<WitnessReport> {
    sieve.check(x)?;
    let ells = odd_primes(y);
    let mut moduli = vec![2u64];
    moduli.extend(ells.iter().map(|&l| l * l));
    let q = product(moduli.iter().copied(), "2(∏ ℓ)²")?;
    let residues: Vec<(u64, u64)> = moduli
        .iter()
        .map(|&m| (if m == 2 { 1 } else { 9 * inv_mod(16, m).unwrap() % m }, m))
        .collect();
    let (w_q, _) = crt(&residues).expect("coprime moduli");
    let class_count = moduli
        .iter()
        .map(|&m| local_count(m, w_q % m, 2))
        .product::<u128>();

    let root = isqrt(x);
    let p2_lo = iroot(x, 10);
    let p2_hi = iroot(x, 6);
    let p2s: Vec<u64> = sieve
        .primes_in(p2_lo + 1, p2_hi)
        .into_iter()
        .filter(|&p| gcd(p, q) == 1)
        .collect();
    let p1_hi = p2s.first().map_or(0, |&p| root / p);
    let p1s: Vec<u64> = sieve
        .primes_in(p2_hi + 1, p1_hi)
        .into_iter()
        .filter(|&p| gcd(p, q) == 1)
        .collect();

    // Class method: for each P₂, solve v² + v + 1 ≡ w_q / σ(P₂²) locally, glue
    // the roots by CRT and count primes P₁ in each resulting class.
    let tables: Vec<Vec<Vec<u64>>> = moduli.iter().map(|&m| roots_by_value(m)).collect();
    let mut buckets: HashMap<u64, Vec<u64>> = HashMap::new();
    for &p in &p1s {
        buckets.entry(p % q).or_default().push(p);
    }
    let mut witness_count = 0u64;
    for &p2 in &p2s {
        let target = mul(w_q, inv_mod(quad(p2, q), q).unwrap(), q);
        let choices: Vec<&[u64]> = moduli
            .iter()
            .zip(&tables)
            .map(|(&m, t)| t[(target % m) as usize].as_slice())
            .collect();
        let bound = root / p2;
        for r in crt_product(&moduli, &choices) {
            if let Some(b) = buckets.get(&r) {
                witness_count += b.partition_point(|&p| p <= bound) as u64;
            }
        }
    }

    let mut direct_count = 0u64;
    for &p2 in &p2s {
        let a2 = quad(p2, q);
        for &p1 in p1s.iter().take_while(|&&p1| p1 * p2 <= root) {
            if mul(quad(p1, q), a2, q) == w_q {
                direct_count += 1;
            }
        }
    }

    let filter = CensusFilter::PkAbove { k: 4, threshold: q };
    let (census_class_count, census_total, mean_count, ratio) = census_part(x, q, w_q, filter, sieve)?;
    Ok(WitnessReport {
        construction: Construction::SquaresOfTwoPrimes,
        y,
        x,
        q,
        witness_class: w_q,
        class_count,
        witness_count,
        direct_count,
        census_filter: filter,
        census_class_count,
        census_total,
        mean_count,
        ratio,
    })
}

/// Prime squares P² with x^{1/4} < P ≤ x^{1/2} and σ(P²) ≡ 3 mod
/// q = 2 ∏_{5≤ℓ≤Y} ℓ, i.e. P ≡ 1 or -2 mod every odd ℓ | q. The class 3 is
/// then compared with the census mean under P₂(n) > q.
pub fn overrep_witness_sqfree(y: f64, x: u64, sieve: &FactorSieve) -> Result<WitnessReport> {
    sieve.check(x)?;
    let ells = odd_primes(y);
    let mut moduli = vec![2u64];
    moduli.extend(&ells);
    let q = product(moduli.iter().copied(), "2∏ ℓ")?;
    let local: Vec<Vec<u64>> = moduli
        .iter()
        .map(|&m| if m == 2 { vec![1] } else { vec![1, m - 2] })
        .collect();
    let choices: Vec<&[u64]> = local.iter().map(Vec::as_slice).collect();
    let mut classes = crt_product(&moduli, &choices);
    classes.sort_unstable();

    let primes = sieve.primes_in(iroot(x, 4) + 1, isqrt(x));
    let mut buckets: HashMap<u64, u64> = HashMap::new();
    for &p in &primes {
        *buckets.entry(p % q).or_default() += 1;
    }
    let witness_count = classes.iter().map(|r| buckets.get(r).copied().unwrap_or(0)).sum();
    let direct_count = primes
        .iter()
        .filter(|&&p| gcd(p, q) == 1 && quad(p, q) == 3 % q)
        .count() as u64;

    let filter = CensusFilter::PkAbove { k: 2, threshold: q };
    let witness_class = 3 % q;
    let (census_class_count, census_total, mean_count, ratio) =
        census_part(x, q, witness_class, filter, sieve)?;
    Ok(WitnessReport {
        construction: Construction::SquareOfOnePrime,
        y,
        x,
        q,
        witness_class,
        class_count: classes.len() as u128,
        witness_count,
        direct_count,
        census_filter: filter,
        census_class_count,
        census_total,
        mean_count,
        ratio,
    })
}
