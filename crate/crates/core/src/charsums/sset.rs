use serde::Serialize;

use crate::units::{enumerate_characters, Modulus, RootOfUnitySum};

/// The eighteen exceptional conductors: the primes 5..=23, the two products
/// 385 and 455, and nine products of two primes.
pub const S_SET: [u64; 18] = [
    5, 7, 11, 13, 17, 19, 23, 385, 455, 91, 133, 55, 85, 35, 65, 95, 77, 119,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SSetEntry {
    pub q: u64,
    /// ∏_{ℓ|Q, ℓ≡1 (3)} (ℓ - 3) · ∏_{ℓ|Q, ℓ≡2 (3)} (ℓ - 1)
    pub normalizer: u64,
    pub primitive_count: u64,
    /// max over primitive ψ mod Q of Re Σ_{v unit} ψ(v² + v + 1), divided by the normalizer.
    pub max_normalized: f64,
    /// The maximum equals 1/4 exactly: 4·Re(sum) rounds to the normalizer.
    pub attains_quarter: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SSetReport {
    pub entries: Vec<SSetEntry>,
    pub global_max: f64,
    pub global_max_is_quarter: bool,
    pub attaining: Vec<u64>,
    pub holds: bool,
}

fn normalizer(m: &Modulus) -> u64 {
    m.factorization()
        .pairs()
        .iter()
        .map(|&(p, _)| if p % 3 == 1 { p - 3 } else { p - 1 })
        .product()
}

fn entry(q: u64) -> SSetEntry {
    let m = Modulus::new(q).expect("members of the exceptional set are small");
    let d = normalizer(&m);
    let values: Vec<u64> = m.units().map(|v| (v * v + v + 1) % q).collect();
    let mut best = f64::NEG_INFINITY;
    let mut count = 0;
    for chi in enumerate_characters(&m).iter().filter(|c| c.is_primitive()) {
        let mut s = RootOfUnitySum::new(chi.order());
        for &u in &values {
            s.add(chi.evaluate(u));
        }
        best = best.max(s.value().re);
        count += 1;
    }
    let four = 4.0 * best;
    SSetEntry {
        q,
        normalizer: d,
        primitive_count: count,
        max_normalized: best / d as f64,
        attains_quarter: four.round() == d as f64 && (four - d as f64).abs() < 1e-6,
    }
}

/// Recomputes, for each Q in [`S_SET`], the largest normalized real part of
/// the unit sum of ψ(v² + v + 1) over primitive ψ mod Q. With a modulus
/// given, only the members dividing it are examined.
pub fn verify_s_set(m: Option<&Modulus>) -> SSetReport {
    let entries: Vec<SSetEntry> = S_SET
        .iter()
        .filter(|&&s| m.is_none_or(|m| m.q() % s == 0))
        .map(|&s| entry(s))
        .collect();
    let global_max = entries
        .iter()
        .map(|e| e.max_normalized)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut attaining: Vec<u64> = entries.iter().filter(|e| e.attains_quarter).map(|e| e.q).collect();
    attaining.sort_unstable();
    let holds = entries
        .iter()
        .all(|e| e.attains_quarter || e.max_normalized <= 0.25 + 1e-9);
    SSetReport {
        global_max_is_quarter: !attaining.is_empty() && holds,
        entries,
        global_max,
        attaining,
        holds,
    }
}
