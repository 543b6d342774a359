use std::sync::Arc;

use num_complex::Complex64;

use super::{CharAverage, Method};
use crate::error::{Error, Result};
use crate::units::{character_sum, enumerate_characters, DirichletCharacter, Modulus, RootOfUnitySum};

fn quad(v: u64, m: u64) -> u64 {
    ((v as u128 * v as u128 + v as u128 + 1) % m as u128) as u64
}

/// η_χ by summing χ(v² + v + 1) over the units v mod q.
pub fn eta_brute(chi: &DirichletCharacter) -> CharAverage {
    let m = chi.modulus();
    let q = m.q();
    let s = character_sum(chi, m.units().map(|v| quad(v, q)));
    CharAverage {
        character: chi.clone(),
        value: s.value() / m.phi() as f64,
        method: Method::Brute,
        term_count: s.terms(),
        outside_usual_range: false,
    }
}

/// Local factor η_{χ,ℓ} for the component `component` of χ, together with
/// the number of terms summed.
///
/// A trivial component contributes the local density α̃(ℓ). Otherwise the
/// sum runs at the level of the local conductor ℓ^c: for odd ℓ it is
/// (1/φ(ℓ^c)) (Σ_{v mod ℓ^c} χ_ℓ(v² + v + 1) - [c = 1]), where the full sum
/// is over all residues; for ℓ = 2 it is the plain average over odd v.
pub fn local_eta(chi: &DirichletCharacter, component: usize) -> (Complex64, u64) {
    let basis = &chi.modulus().components()[component];
    let p = basis.prime;
    if chi.is_locally_trivial(component) {
        let density = match p {
            3 => 0.5,
            _ if p % 3 == 1 => (p - 3) as f64 / (p - 1) as f64,
            _ => 1.0,
        };
        return (Complex64::new(density, 0.0), 0);
    }
    let pc = chi.local_conductor(component);
    let phi_c = pc / p * (p - 1);
    let mut s = RootOfUnitySum::new(chi.order());
    if p == 2 {
        for v in (1..pc).step_by(2) {
            s.add(chi.local_eval(component, quad(v, pc)));
        }
        (s.value() / phi_c as f64, s.terms())
    } else {
        for v in 0..pc {
            s.add(chi.local_eval(component, quad(v, pc)));
        }
        let correction = if pc == p { 1.0 } else { 0.0 };
        ((s.value() - correction) / phi_c as f64, s.terms())
    }
}

/// η_χ as the product of its local factors over ℓ^e ∥ q.
pub fn eta_factored(chi: &DirichletCharacter) -> CharAverage {
    let mut value = Complex64::new(1.0, 0.0);
    let mut terms = 0;
    for i in 0..chi.modulus().components().len() {
        let (v, t) = local_eta(chi, i);
        value *= v;
        terms += t;
    }
    CharAverage {
        character: chi.clone(),
        value,
        method: Method::ClosedForm,
        term_count: terms,
        outside_usual_range: false,
    }
}

/// Σ over nonprincipal χ mod q of |η_χ|^exponent, using the factorization.
/// Requires gcd(q, 3) = 1.
pub fn eta_power_sum(m: &Arc<Modulus>, exponent: u32) -> Result<f64> {
    if m.q().is_multiple_of(3) {
        return Err(Error::UnsupportedModulus {
            q: m.q(),
            reason: "eta power sums are taken for moduli coprime to 3",
        });
    }
    Ok(enumerate_characters(m)
        .iter()
        .skip(1)
        .map(|chi| eta_factored(chi).value.norm().powi(exponent as i32))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::enumerate_characters;

    fn chars(q: u64) -> Vec<DirichletCharacter> {
        enumerate_characters(&Modulus::new(q).unwrap())
    }

    #[test]
    fn mod_five_example() {
        let cs = chars(5);
        let chi = cs
            .iter()
            .find(|c| c.evaluate(2).to_complex() == Complex64::new(0.0, 1.0))
            .unwrap();
        let expected = Complex64::new(0.25, -0.25);
        assert!((eta_brute(chi).value - expected).norm() < 1e-12);
        assert!((eta_factored(chi).value - expected).norm() < 1e-12);
    }

    #[test]
    fn principal_gives_alpha_tilde() {
        for q in [1u64, 2, 7, 13, 21, 91, 98] {
            let m = Modulus::new(q).unwrap();
            let at = *m.alpha_tilde().numer() as f64 / *m.alpha_tilde().denom() as f64;
            let chi = DirichletCharacter::principal(m);
            assert!((eta_brute(&chi).value.re - at).abs() < 1e-12, "q={q}");
            assert!((eta_factored(&chi).value.re - at).abs() < 1e-12, "q={q}");
        }
    }

    #[test]
    fn four_dividing_the_conductor_kills_eta() {
        for q in [4u64, 8, 20, 28, 40, 56] {
            for chi in chars(q).iter().filter(|c| c.conductor() % 4 == 0) {
                assert!(eta_brute(chi).value.norm() < 1e-12, "{chi:?}");
                assert!(eta_factored(chi).value.norm() < 1e-12, "{chi:?}");
            }
        }
    }

    #[test]
    fn factored_matches_brute_small() {
        for q in 1..=150u64 {
            for chi in chars(q) {
                let b = eta_brute(&chi).value;
                let f = eta_factored(&chi).value;
                assert!((b - f).norm() < 1e-9, "q={q} {chi:?}: {b} vs {f}");
            }
        }
    }

    #[test]
    fn power_sum() {
        let m = Modulus::new(5).unwrap();
        let s = eta_power_sum(&m, 3).unwrap();
        assert!(s > 0.0 && s.is_finite());
        assert!(eta_power_sum(&Modulus::new(21).unwrap(), 3).is_err());
    }
}
