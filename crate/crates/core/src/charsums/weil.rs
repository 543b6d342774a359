use serde::Serialize;

use crate::arith::modular::is_prime;
use crate::error::{Error, Result};
use crate::units::{enumerate_characters, Modulus, RootOfUnitySum};

/// Largest ℓ^e accepted: the check costs about φ(ℓ^e)² character evaluations.
pub const WEIL_MODULUS_BUDGET: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeilReport {
    pub ell: u64,
    pub e: u32,
    pub primitive_count: u64,
    /// max |Σ_{v mod ℓ^e} χ(v² + v + 1)| over primitive χ.
    pub max_abs: f64,
    /// `max_abs / ℓ^{e/2}`.
    pub max_ratio: f64,
    pub holds: bool,
}

/// Checks |Σ_{v mod ℓ^e} χ(v² + v + 1)| ≤ ℓ^{e/2} for every primitive χ mod ℓ^e.
pub fn weil_clz_check(ell: u64, e: u32) -> Result<WeilReport> {
    if ell < 5 || !is_prime(ell) {
        return Err(Error::Domain(format!("{ell} is not a prime at least 5")));
    }
    if e == 0 {
        return Err(Error::Domain("exponent must be at least 1".into()));
    }
    let q = ell
        .checked_pow(e)
        .filter(|&q| q <= WEIL_MODULUS_BUDGET)
        .ok_or(Error::BudgetExceeded {
            requested: ell.saturating_pow(e),
            budget: WEIL_MODULUS_BUDGET,
        })?;
    let m = Modulus::new(q)?;

    // Values of v² + v + 1 are tallied once, then weighted per character.
    let mut hist = vec![0u64; q as usize];
    for v in 0..q {
        hist[((v * v + v + 1) % q) as usize] += 1;
    }
    let values: Vec<(u64, u64)> = hist
        .iter()
        .enumerate()
        .filter(|&(u, &c)| c > 0 && !(u as u64).is_multiple_of(ell))
        .map(|(u, &c)| (u as u64, c))
        .collect();

    let bound = (q as f64).sqrt();
    let mut count = 0;
    let mut max_abs: f64 = 0.0;
    for chi in enumerate_characters(&m).iter().filter(|c| c.is_primitive()) {
        let mut s = RootOfUnitySum::new(chi.order());
        for &(u, c) in &values {
            s.add_many(chi.evaluate(u), c);
        }
        max_abs = max_abs.max(s.value().norm());
        count += 1;
    }
    Ok(WeilReport {
        ell,
        e,
        primitive_count: count,
        max_abs,
        max_ratio: max_abs / bound,
        holds: max_abs <= bound + 1e-9,
    })
}
