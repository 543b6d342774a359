use std::sync::Arc;

use num_complex::Complex64;

use super::{CharAverage, Method};
use crate::error::{Error, Result};
use crate::units::{character_sum, enumerate_characters, DirichletCharacter, Modulus};

/// ρ_χ by summing χ(v + 1) over the units v mod q.
pub fn rho_brute(chi: &DirichletCharacter) -> CharAverage {
    let m = chi.modulus();
    let q = m.q();
    let s = character_sum(chi, m.units().map(|v| (v + 1) % q));
    CharAverage {
        character: chi.clone(),
        value: s.value() / m.phi() as f64,
        method: Method::Brute,
        term_count: s.terms(),
        outside_usual_range: q.is_multiple_of(2),
    }
}

/// ρ_χ for odd q from the conductor f alone: zero unless f is squarefree,
/// otherwise (-1)^{ω(f)} α(q) / ∏_{ℓ|f} (ℓ - 2).
pub fn rho_closed_form(chi: &DirichletCharacter) -> Result<CharAverage> {
    let m = chi.modulus();
    if m.q().is_multiple_of(2) {
        return Err(Error::UnsupportedModulus {
            q: m.q(),
            reason: "the closed form for rho holds for odd moduli only",
        });
    }
    let f = chi.conductor();
    let mut value = *m.alpha().numer() as f64 / *m.alpha().denom() as f64;
    for &(p, _) in m.factorization().pairs() {
        if !f.is_multiple_of(p) {
            continue;
        }
        if f.is_multiple_of(p * p) {
            value = 0.0;
            break;
        }
        value /= -((p - 2) as f64);
    }
    Ok(CharAverage {
        character: chi.clone(),
        value: Complex64::new(value, 0.0),
        method: Method::ClosedForm,
        term_count: 0,
        outside_usual_range: false,
    })
}

fn odd_prime_power(chi: &DirichletCharacter) -> Result<(u64, u32)> {
    let pairs = chi.modulus().factorization().pairs();
    match pairs {
        [(p, e)] if *p > 2 => Ok((*p, *e)),
        _ => Err(Error::UnsupportedModulus {
            q: chi.q(),
            reason: "expected a character to an odd prime power",
        }),
    }
}

/// S_{χ,ℓ} = Σ_{v mod ℓ^e, ℓ∤v} χ(v + 1) for a character χ mod an odd prime power.
pub fn s_chi_ell(chi: &DirichletCharacter) -> Result<Complex64> {
    odd_prime_power(chi)?;
    let q = chi.q();
    Ok(character_sum(chi, chi.modulus().units().map(|v| (v + 1) % q)).value())
}

/// The closed form 1_{cond | ℓ} ℓ^{e-1} (1_{χ trivial} (ℓ - 1) - 1).
pub fn s_chi_ell_closed_form(chi: &DirichletCharacter) -> Result<i64> {
    let (p, e) = odd_prime_power(chi)?;
    let f = chi.conductor();
    if p % f != 0 {
        return Ok(0);
    }
    let base = p.pow(e - 1) as i64;
    Ok(if f == 1 { base * (p as i64 - 2) } else { -base })
}

/// Σ over nonprincipal χ mod q of |ρ_χ|^exponent, using the closed form (q odd).
pub fn rho_power_sum(m: &Arc<Modulus>, exponent: u32) -> Result<f64> {
    let mut acc = 0.0;
    for chi in enumerate_characters(m).iter().skip(1) {
        acc += rho_closed_form(chi)?.value.norm().powi(exponent as i32);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(q: u64) -> Vec<DirichletCharacter> {
        enumerate_characters(&Modulus::new(q).unwrap())
    }

    #[test]
    fn principal_gives_alpha() {
        for q in [1u64, 3, 15, 105, 121] {
            let m = Modulus::new(q).unwrap();
            let a = *m.alpha().numer() as f64 / *m.alpha().denom() as f64;
            let chi = DirichletCharacter::principal(m);
            assert!((rho_brute(&chi).value.re - a).abs() < 1e-12);
            assert!((rho_closed_form(&chi).unwrap().value.re - a).abs() < 1e-15);
        }
    }

    #[test]
    fn vanishing_and_conductor_fifteen() {
        for chi in chars(9).iter().filter(|c| c.conductor() == 9) {
            assert!(rho_brute(chi).value.norm() < 1e-12);
            assert_eq!(rho_closed_form(chi).unwrap().value.norm(), 0.0);
        }
        let cs = chars(15);
        let prim: Vec<_> = cs.iter().filter(|c| c.conductor() == 15).collect();
        assert_eq!(prim.len(), 3);
        for chi in prim {
            assert!((rho_brute(chi).value.norm() - 0.125).abs() < 1e-12);
        }
        let c3 = cs.iter().find(|c| c.conductor() == 3).unwrap();
        assert!((rho_brute(c3).value - Complex64::new(-0.375, 0.0)).norm() < 1e-12);
        assert!((rho_closed_form(c3).unwrap().value.re + 0.375).abs() < 1e-15);
    }

    #[test]
    fn even_moduli() {
        let chi = DirichletCharacter::principal(Modulus::new(10).unwrap());
        assert!(rho_brute(&chi).outside_usual_range);
        assert!(matches!(rho_closed_form(&chi), Err(Error::UnsupportedModulus { .. })));
    }

    #[test]
    fn s_chi_ell_examples() {
        let c5 = chars(5);
        assert!((s_chi_ell(&c5[0]).unwrap() - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        for chi in &c5[1..] {
            assert!((s_chi_ell(chi).unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        }
        for chi in chars(25).iter().filter(|c| c.conductor() == 25) {
            assert!(s_chi_ell(chi).unwrap().norm() < 1e-12);
            assert_eq!(s_chi_ell_closed_form(chi).unwrap(), 0);
        }
        for q in [3u64, 7, 9, 27, 49, 81, 121, 125] {
            for chi in chars(q) {
                let closed = s_chi_ell_closed_form(&chi).unwrap() as f64;
                assert!((s_chi_ell(&chi).unwrap() - Complex64::new(closed, 0.0)).norm() < 1e-9);
            }
        }
        assert!(s_chi_ell(&chars(8)[1]).is_err());
        assert!(s_chi_ell(&chars(15)[1]).is_err());
    }

    #[test]
    fn power_sums() {
        let m3 = Modulus::new(3).unwrap();
        assert!((rho_power_sum(&m3, 2).unwrap() - 0.25).abs() < 1e-15);
        let m15 = Modulus::new(15).unwrap();
        assert!(rho_power_sum(&m15, 2).unwrap() <= 0.375 + 1e-12);
        assert!(rho_power_sum(&Modulus::new(6).unwrap(), 2).is_err());
    }
}
