use std::sync::Arc;

use num_rational::Ratio;

use crate::arith::modular::{crt, lcm, mul_mod, pow_mod, trial_factor};
use crate::arith::Factorization;
use crate::error::{Error, Result};

/// Default cap on moduli; discrete-log tables take O(q) memory.
pub const DEFAULT_MODULUS_CAP: u64 = 10_000_000;

const NOT_UNIT: u32 = u32::MAX;

/// The unit group of Z/ℓ^e as a product of cyclic factors with fixed
/// generators, plus a discrete-log table.
///
/// Odd ℓ: one generator of order φ(ℓ^e). For ℓ = 2: nothing when e = 1,
/// the generator -1 when e = 2, and the pair (-1, 5) of orders (2, 2^{e-2})
/// when e ≥ 3.
#[derive(Debug, Clone)]
pub struct PrimePowerBasis {
    pub prime: u64,
    pub exponent: u32,
    pub prime_power: u64,
    pub phi: u64,
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
    // odd ℓ: log_g(u); 2^e with e >= 3: log_5(u) for u = 1 mod 4
    dlog: Vec<u32>,
}

impl PrimePowerBasis {
    fn new(prime: u64, exponent: u32) -> Self {
        let pe = prime.pow(exponent);
        let phi = pe / prime * (prime - 1);
        if prime == 2 {
            let (generators, orders, dlog) = match exponent {
                1 => (vec![], vec![], vec![]),
                2 => (vec![3], vec![2], vec![]),
                _ => {
                    let ord5 = pe / 4;
                    let mut dlog = vec![NOT_UNIT; pe as usize];
                    let mut x = 1u64;
                    for k in 0..ord5 {
                        dlog[x as usize] = k as u32;
                        x = x * 5 % pe;
                    }
                    (vec![pe - 1, 5], vec![2, ord5], dlog)
                }
            };
            return PrimePowerBasis {
                prime,
                exponent,
                prime_power: pe,
                phi,
                generators,
                orders,
                dlog,
            };
        }
        let g = primitive_root_prime_power(prime, exponent);
        let mut dlog = vec![NOT_UNIT; pe as usize];
        let mut x = 1u64;
        for k in 0..phi {
            dlog[x as usize] = k as u32;
            x = mul_mod(x, g, pe);
        }
        PrimePowerBasis {
            prime,
            exponent,
            prime_power: pe,
            phi,
            generators: vec![g],
            orders: vec![phi],
            dlog,
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Exponent vector of `u` (reduced mod ℓ^e) against the generators, or
    /// `None` when ℓ divides `u`.
    pub fn log_into(&self, u: u64, out: &mut [u64]) -> bool {
        let u = u % self.prime_power;
        if u.is_multiple_of(self.prime) {
            return false;
        }
        if self.prime == 2 {
            match self.exponent {
                1 => {}
                2 => out[0] = u64::from(u == 3),
                _ => {
                    let sign = u % 4 == 3;
                    let v = if sign { self.prime_power - u } else { u };
                    out[0] = sign as u64;
                    out[1] = self.dlog[v as usize] as u64;
                }
            }
        } else {
            out[0] = self.dlog[u as usize] as u64;
        }
        true
    }
}

/// Least primitive root mod ℓ, lifted so that it generates U_{ℓ^e} as well.
pub fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    assert!(p > 2);
    let factors: Vec<u64> = trial_factor(p - 1).into_iter().map(|(r, _)| r).collect();
    let g = (2..p)
        .find(|&g| factors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .unwrap_or(1);
    if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// A modulus q with its factorization, φ(q), the densities α(q) and α̃(q),
/// and the unit-group basis used to label characters.
///
/// α(q) is the density of units v with v + 1 also a unit, ∏_{ℓ|q}(1 - 1/(ℓ-1)),
/// which vanishes for even q. α̃(q) is the density of units v with v² + v + 1
/// a unit: ∏ over ℓ ≡ 1 (mod 3) of (1 - 2/(ℓ-1)), times 1/2 when 3 | q.
#[derive(Debug, Clone)]
pub struct Modulus {
    q: u64,
    factorization: Factorization,
    phi: u64,
    alpha: Ratio<u64>,
    alpha_tilde: Ratio<u64>,
    components: Vec<PrimePowerBasis>,
    gen_orders: Vec<u64>,
    gen_offsets: Vec<usize>,
    exponent: u64,
}

impl Modulus {
    pub fn new(q: u64) -> Result<Arc<Modulus>> {
        Self::with_cap(q, DEFAULT_MODULUS_CAP)
    }

    pub fn with_cap(q: u64, cap: u64) -> Result<Arc<Modulus>> {
        if q == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        if q > cap {
            return Err(Error::ModulusTooLarge { q, cap });
        }
        let pairs = trial_factor(q);
        let factorization = Factorization::new(pairs.clone())?;
        let mut phi = 1;
        let mut alpha = Ratio::from_integer(1u64);
        let mut alpha_tilde = Ratio::from_integer(1u64);
        let mut components = Vec::new();
        let mut gen_orders = Vec::new();
        let mut gen_offsets = Vec::new();
        let mut exponent = 1;
        for &(p, e) in &pairs {
            let c = PrimePowerBasis::new(p, e);
            phi *= c.phi;
            alpha *= Ratio::new(p - 2, p - 1);
            if p == 3 {
                alpha_tilde *= Ratio::new(1, 2);
            } else if p % 3 == 1 {
                alpha_tilde *= Ratio::new(p - 3, p - 1);
            }
            gen_offsets.push(gen_orders.len());
            for &o in &c.orders {
                gen_orders.push(o);
                exponent = lcm(exponent, o);
            }
            components.push(c);
        }
        Ok(Arc::new(Modulus {
            q,
            factorization,
            phi,
            alpha,
            alpha_tilde,
            components,
            gen_orders,
            gen_offsets,
            exponent,
        }))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn alpha(&self) -> Ratio<u64> {
        self.alpha
    }

    pub fn alpha_tilde(&self) -> Ratio<u64> {
        self.alpha_tilde
    }

    pub fn is_odd(&self) -> bool {
        self.q % 2 == 1
    }

    pub fn components(&self) -> &[PrimePowerBasis] {
        &self.components
    }

    /// Orders of all generators, component by component.
    pub fn generator_orders(&self) -> &[u64] {
        &self.gen_orders
    }

    pub(crate) fn generator_offset(&self, component: usize) -> usize {
        self.gen_offsets[component]
    }

    /// Exponent of U_q (lcm of generator orders); character values are
    /// reported as roots of unity of this order.
    pub fn group_exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_unit(&self, v: u64) -> bool {
        self.components.iter().all(|c| !v.is_multiple_of(c.prime))
    }

    /// Exponent vector of the unit `v`, or `None` if gcd(v, q) > 1.
    pub fn log_into(&self, v: u64, out: &mut [u64]) -> bool {
        for (i, c) in self.components.iter().enumerate() {
            let off = self.gen_offsets[i];
            if !c.log_into(v, &mut out[off..off + c.generator_count()]) {
                return false;
            }
        }
        true
    }

    pub fn log(&self, v: u64) -> Option<Vec<u64>> {
        let mut out = vec![0; self.gen_orders.len()];
        self.log_into(v, &mut out).then_some(out)
    }

    /// The unit mod q that is `u` at component `component` and 1 elsewhere.
    pub fn lift_from_component(&self, component: usize, u: u64) -> u64 {
        let residues: Vec<(u64, u64)> = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (if i == component { u % c.prime_power } else { 1 }, c.prime_power))
            .collect();
        crt(&residues).map(|(x, _)| x).unwrap_or(0)
    }

    /// Residues 0 <= v < q coprime to q, ascending.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.q).filter(move |&v| self.is_unit(v))
    }
}

pub fn build_modulus(q: u64) -> Result<Arc<Modulus>> {
    Modulus::new(q)
}
