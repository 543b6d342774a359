//! Point counts for the congruences ∏ (v_j² + v_j + 1) ≡ w over units, the
//! plane curves behind them, and the over-representation constructions.

mod curves;
mod witness;

use serde::Serialize;

use crate::arith::modular::{gcd, inv_mod, is_prime};
use crate::error::{Error, Result};
use crate::units::Modulus;

pub use curves::{curve_point_count, Curve, CurveCount};
pub use witness::{overrep_witness_even, overrep_witness_sqfree, WitnessReport};

/// Largest prime power handled by the value-distribution tables.
pub const LOCAL_TABLE_BUDGET: u64 = 1 << 17;

/// Largest prime power for three-fold counts, which cost about φ(ℓ^e)² steps.
pub const LOCAL_TRIPLE_BUDGET: u64 = 1 << 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolutionCount {
    pub q: u64,
    pub w: u64,
    pub arity: u32,
    pub count: u128,
}

/// h[a] = #{v ∈ U_m : v² + v + 1 ≡ a}, with a restricted to units.
pub(crate) fn quadratic_value_histogram(m: u64) -> Vec<u64> {
    let mut h = vec![0u64; m as usize];
    for v in 0..m {
        if gcd(v, m) == 1 {
            let a = ((v * v + v + 1) % m) as usize;
            h[a] += 1;
        }
    }
    for (a, c) in h.iter_mut().enumerate() {
        if gcd(a as u64, m) != 1 {
            *c = 0;
        }
    }
    h
}

fn local_count(m: u64, w: u64, arity: u32) -> u128 {
    let h = quadratic_value_histogram(m);
    let support: Vec<(u64, u64)> = h
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(a, &c)| (a as u64, c))
        .collect();
    let pairs_to = |target: u64| -> u128 {
        support
            .iter()
            .map(|&(a, c)| {
                let b = (target as u128 * inv_mod(a, m).unwrap() as u128 % m as u128) as usize;
                c as u128 * h[b] as u128
            })
            .sum()
    };
    match arity {
        1 => h[w as usize] as u128,
        2 => pairs_to(w),
        _ => {
            // Distribution of products of two values, then one more factor.
            let mut two = vec![0u128; m as usize];
            for &(a, ca) in &support {
                for &(b, cb) in &support {
                    two[((a as u128 * b as u128) % m as u128) as usize] += ca as u128 * cb as u128;
                }
            }
            support
                .iter()
                .map(|&(a, c)| {
                    let b = (w as u128 * inv_mod(a, m).unwrap() as u128 % m as u128) as usize;
                    c as u128 * two[b]
                })
                .sum()
        }
    }
}

/// #{(v_1, ..., v_k) ∈ U_q^k : ∏ (v_j² + v_j + 1) ≡ w (mod q)} for k = 2 or 3,
/// as a product of counts modulo each prime power of q.
pub fn v_count(m: &Modulus, w: u64, arity: u32) -> Result<SolutionCount> {
    let q = m.q();
    if !(2..=3).contains(&arity) {
        return Err(Error::Domain(format!("arity must be 2 or 3, got {arity}")));
    }
    if gcd(w % q, q) != 1 {
        return Err(Error::Domain(format!("target {w} is not a unit mod {q}")));
    }
    let mut count: u128 = 1;
    for c in m.components() {
        let budget = if arity == 3 { LOCAL_TRIPLE_BUDGET } else { LOCAL_TABLE_BUDGET };
        if c.prime_power > budget {
            return Err(Error::BudgetExceeded {
                requested: c.prime_power,
                budget,
            });
        }
        count *= local_count(c.prime_power, w % c.prime_power, arity);
    }
    Ok(SolutionCount { q, w: w % q, arity, count })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftCount {
    pub ell: u64,
    /// 9 · 16⁻¹ mod ℓ².
    pub target: u64,
    /// #{(v_1, v_2) ∈ U_{ℓ²}² : (v_1² + v_1 + 1)(v_2² + v_2 + 1) ≡ target}.
    pub count: u64,
    /// Pairs with both v_i ≡ -2⁻¹ (mod ℓ), where each factor is 3/4.
    pub degenerate_pairs: u64,
}

/// Solutions of (v_1² + v_1 + 1)(v_2² + v_2 + 1) ≡ 9 · 16⁻¹ over units mod ℓ².
pub fn lift_count_mod_ell_squared(ell: u64) -> Result<LiftCount> {
    if ell < 5 || !is_prime(ell) {
        return Err(Error::Domain(format!("{ell} is not a prime at least 5")));
    }
    let m = ell * ell;
    if m > LOCAL_TABLE_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: m,
            budget: LOCAL_TABLE_BUDGET,
        });
    }
    let target = 9 * inv_mod(16, m).unwrap() % m;
    let count = local_count(m, target, 2) as u64;
    let half = (ell - inv_mod(2, ell).unwrap()) % ell;
    let per_side = (0..m).filter(|&v| v % ell == half && gcd(v, m) == 1).count() as u64;
    Ok(LiftCount {
        ell,
        target,
        count,
        degenerate_pairs: per_side * per_side,
    })
}
