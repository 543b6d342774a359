use std::fmt;
use std::sync::Arc;

use super::modulus::Modulus;
use super::root::RootOfUnityValue;
use crate::arith::modular::{gcd, lcm};
use crate::error::{Error, Result};

/// A Dirichlet character mod q, stored as one exponent per unit-group
/// generator: χ(g_j) = e^{2πi a_j / ord(g_j)}.
#[derive(Clone)]
pub struct DirichletCharacter {
    modulus: Arc<Modulus>,
    exponents: Vec<u64>,
    order: u64,
    conductor: u64,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("q", &self.modulus.q())
            .field("exponents", &self.exponents)
            .field("order", &self.order)
            .field("conductor", &self.conductor)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.q() == other.modulus.q() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn new(modulus: Arc<Modulus>, mut exponents: Vec<u64>) -> Result<Self> {
        let orders = modulus.generator_orders();
        if exponents.len() != orders.len() {
            return Err(Error::Domain(format!(
                "expected {} exponents for modulus {}, got {}",
                orders.len(),
                modulus.q(),
                exponents.len()
            )));
        }
        for (a, &o) in exponents.iter_mut().zip(orders) {
            *a %= o;
        }
        let order = exponents
            .iter()
            .zip(orders)
            .fold(1, |acc, (&a, &o)| lcm(acc, o / gcd(a, o)));
        let mut chi = DirichletCharacter {
            modulus,
            exponents,
            order,
            conductor: 1,
        };
        chi.conductor = (0..chi.modulus.components().len())
            .map(|i| chi.local_conductor(i))
            .product();
        Ok(chi)
    }

    pub fn principal(modulus: Arc<Modulus>) -> Self {
        let n = modulus.generator_orders().len();
        Self::new(modulus, vec![0; n]).expect("principal character")
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.modulus.q()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus.q()
    }

    /// Position in [`enumerate_characters`] order.
    pub fn index(&self) -> u64 {
        let mut idx = 0;
        for (&a, &o) in self.exponents.iter().zip(self.modulus.generator_orders()).rev() {
            idx = idx * o + a;
        }
        idx
    }

    /// χ at the unit with exponent vector `log`.
    pub fn value_at_log(&self, log: &[u64]) -> RootOfUnityValue {
        let n = self.modulus.group_exponent();
        let mut k: u128 = 0;
        for ((&a, &l), &o) in self.exponents.iter().zip(log).zip(self.modulus.generator_orders()) {
            k += a as u128 * l as u128 * (n / o) as u128;
        }
        RootOfUnityValue::new((k % n as u128) as u64, n)
    }

    pub fn evaluate(&self, v: u64) -> RootOfUnityValue {
        let n = self.modulus.group_exponent();
        let mut buf = [0u64; 32];
        let len = self.exponents.len();
        if len <= buf.len() {
            if !self.modulus.log_into(v, &mut buf[..len]) {
                return RootOfUnityValue::zero(n);
            }
            self.value_at_log(&buf[..len])
        } else {
            match self.modulus.log(v) {
                Some(log) => self.value_at_log(&log),
                None => RootOfUnityValue::zero(n),
            }
        }
    }

    fn local_exponents(&self, component: usize) -> &[u64] {
        let off = self.modulus.generator_offset(component);
        let len = self.modulus.components()[component].generator_count();
        &self.exponents[off..off + len]
    }

    pub fn is_locally_trivial(&self, component: usize) -> bool {
        self.local_exponents(component).iter().all(|&a| a == 0)
    }

    /// Conductor ℓ^c of the ℓ-component χ_ℓ.
    pub fn local_conductor(&self, component: usize) -> u64 {
        let basis = &self.modulus.components()[component];
        let a = self.local_exponents(component);
        let (p, e) = (basis.prime, basis.exponent);
        let c = if p == 2 {
            match e {
                1 => 0,
                2 => {
                    if a[0] == 0 {
                        0
                    } else {
                        2
                    }
                }
                _ => {
                    if a[1] != 0 {
                        e - valuation(a[1], 2)
                    } else if a[0] != 0 {
                        2
                    } else {
                        0
                    }
                }
            }
        } else if a[0] == 0 {
            0
        } else {
            (e - valuation(a[0], p)).max(1)
        };
        p.pow(c)
    }

    /// χ_ℓ(u) for a residue `u` mod ℓ^e, as a root of unity of the group exponent.
    pub fn local_eval(&self, component: usize, u: u64) -> RootOfUnityValue {
        let basis = &self.modulus.components()[component];
        let n = self.modulus.group_exponent();
        let mut log = [0u64; 2];
        let len = basis.generator_count();
        if !basis.log_into(u, &mut log[..len]) {
            return RootOfUnityValue::zero(n);
        }
        let off = self.modulus.generator_offset(component);
        let orders = &self.modulus.generator_orders()[off..off + len];
        let mut k: u128 = 0;
        for j in 0..len {
            k += self.exponents[off + j] as u128 * log[j] as u128 * (n / orders[j]) as u128;
        }
        RootOfUnityValue::new((k % n as u128) as u64, n)
    }

    /// The primitive character mod the conductor that induces χ.
    pub fn primitive_inducing(&self) -> Result<DirichletCharacter> {
        let target = Modulus::new(self.conductor)?;
        let n = self.modulus.group_exponent();
        let mut exps = Vec::with_capacity(target.generator_orders().len());
        for basis in target.components() {
            // the matching component of q
            let ci = self
                .modulus
                .components()
                .iter()
                .position(|c| c.prime == basis.prime)
                .expect("conductor divides q");
            for (&g, &o) in basis.generators.iter().zip(&basis.orders) {
                let lifted = self.modulus.lift_from_component(ci, g);
                let v = self.evaluate(lifted);
                // v = e^{2πik/n} must be an o-th root of unity
                exps.push(v.k * o / n);
            }
        }
        DirichletCharacter::new(target, exps)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.q() != other.q() {
            return Err(Error::Domain("characters to different moduli".into()));
        }
        let exps = self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect();
        Self::new(self.modulus.clone(), exps)
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(self.modulus.generator_orders())
            .map(|(&a, &o)| (o - a) % o)
            .collect();
        Self::new(self.modulus.clone(), exps).expect("conjugate character")
    }
}

fn valuation(mut a: u64, p: u64) -> u32 {
    let mut v = 0;
    while a != 0 && a.is_multiple_of(p) {
        a /= p;
        v += 1;
    }
    v
}

/// All φ(q) characters mod q; the principal character comes first.
pub fn enumerate_characters(m: &Arc<Modulus>) -> Vec<DirichletCharacter> {
    let orders = m.generator_orders().to_vec();
    let total: u64 = orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut exps = vec![0u64; orders.len()];
    for _ in 0..total {
        out.push(DirichletCharacter::new(m.clone(), exps.clone()).expect("valid exponents"));
        for (a, &o) in exps.iter_mut().zip(&orders) {
            *a += 1;
            if *a < o {
                break;
            }
            *a = 0;
        }
    }
    out
}

pub fn evaluate(chi: &DirichletCharacter, v: u64) -> RootOfUnityValue {
    chi.evaluate(v)
}

pub fn conductor(chi: &DirichletCharacter) -> u64 {
    chi.conductor()
}

/// Number of primitive characters mod p^c.
fn primitive_count_prime_power(p: u64, c: u32) -> u64 {
    match c {
        0 => 1,
        1 => p - 2,
        _ => p.pow(c - 2) * (p - 1) * (p - 1),
    }
}

/// Number of characters mod q whose conductor is exactly `d`.
pub fn character_with_conductor_count(m: &Modulus, d: u64) -> Result<u64> {
    if d == 0 || !m.q().is_multiple_of(d) {
        return Err(Error::Domain(format!("{d} does not divide {}", m.q())));
    }
    let mut count = 1;
    for &(p, _) in m.factorization().pairs() {
        let c = valuation(d, p);
        count *= primitive_count_prime_power(p, c);
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn chars(q: u64) -> Vec<DirichletCharacter> {
        enumerate_characters(&Modulus::new(q).unwrap())
    }

    /// Smallest d | q with χ(u) = 1 for every unit u = 1 (mod d).
    fn brute_conductor(chi: &DirichletCharacter) -> u64 {
        let q = chi.q();
        (1..=q)
            .filter(|d| q.is_multiple_of(*d))
            .find(|&d| {
                (0..q)
                    .filter(|&u| gcd(u, q) == 1 && u % d == 1 % d)
                    .all(|u| chi.evaluate(u).is_one())
            })
            .unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(chars(5).len(), 4);
        assert_eq!(chars(8).len(), 4);
        assert_eq!(chars(15).len(), 8);
        assert!(chars(15)[0].is_principal());
        assert_eq!(chars(1).len(), 1);
        assert_eq!(chars(2).len(), 1);
    }

    #[test]
    fn characters_are_distinct_multiplicative_maps() {
        for q in [12u64, 15, 16, 20, 27, 49] {
            let cs = chars(q);
            let tables: Vec<Vec<RootOfUnityValue>> =
                cs.iter().map(|c| (0..q).map(|v| c.evaluate(v)).collect()).collect();
            for (i, t) in tables.iter().enumerate() {
                for u in 0..q {
                    for v in 0..q {
                        assert_eq!(t[(u * v % q) as usize], t[u as usize].mul(&t[v as usize]));
                    }
                }
                for s in &tables[..i] {
                    assert_ne!(s, t);
                }
            }
        }
    }

    #[test]
    fn conductor_matches_brute_force() {
        for q in 1..=120u64 {
            for chi in chars(q) {
                assert_eq!(chi.conductor(), brute_conductor(&chi), "{chi:?}");
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        let cs = chars(5);
        let chi = cs.iter().find(|c| c.evaluate(2).to_complex() == Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(chi.evaluate(4).to_complex(), Complex64::new(-1.0, 0.0));
        assert!(chi.evaluate(10).is_zero());
        assert_eq!(chi.conductor(), 5);
        assert!(cs[0].evaluate(3).is_one());
        assert_eq!(cs[0].conductor(), 1);
    }

    #[test]
    fn conductor_three_mod_nine() {
        let cs = chars(9);
        let induced: Vec<_> = cs.iter().filter(|c| c.conductor() == 3).collect();
        assert_eq!(induced.len(), 1);
        // trivial on 1 + 3Z/9Z
        for u in [1u64, 4, 7] {
            assert!(induced[0].evaluate(u).is_one());
        }
    }

    #[test]
    fn conductor_counts() {
        let m15 = Modulus::new(15).unwrap();
        assert_eq!(character_with_conductor_count(&m15, 15).unwrap(), 3);
        assert_eq!(character_with_conductor_count(&m15, 1).unwrap(), 1);
        let m25 = Modulus::new(25).unwrap();
        assert_eq!(character_with_conductor_count(&m25, 25).unwrap(), 16);
        assert!(character_with_conductor_count(&m15, 4).is_err());
        for q in 1..=200u64 {
            let m = Modulus::new(q).unwrap();
            let cs = enumerate_characters(&m);
            for d in (1..=q).filter(|d| q % d == 0) {
                let n = cs.iter().filter(|c| c.conductor() == d).count() as u64;
                assert_eq!(character_with_conductor_count(&m, d).unwrap(), n, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn induced_from_conductor() {
        for q in [36u64, 45, 63, 80, 96, 100, 175] {
            for chi in chars(q) {
                let prim = chi.primitive_inducing().unwrap();
                assert!(prim.is_primitive());
                let f = prim.q();
                for v in (0..q).filter(|&v| gcd(v, q) == 1) {
                    let d = chi.evaluate(v).to_complex() - prim.evaluate(v % f).to_complex();
                    assert!(d.norm() < 1e-12, "q={q} v={v}");
                }
            }
        }
    }

    #[test]
    fn index_roundtrip() {
        for (i, c) in chars(60).iter().enumerate() {
            assert_eq!(c.index(), i as u64);
        }
    }
}
