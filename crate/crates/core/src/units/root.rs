use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// e^{2πik/order}, or zero (a character evaluated at a non-unit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnityValue {
    pub k: u64,
    pub order: u64,
    pub zero: bool,
}

impl RootOfUnityValue {
    pub fn one(order: u64) -> Self {
        RootOfUnityValue { k: 0, order, zero: false }
    }

    pub fn zero(order: u64) -> Self {
        RootOfUnityValue { k: 0, order, zero: true }
    }

    pub fn new(k: u64, order: u64) -> Self {
        assert!(order >= 1);
        RootOfUnityValue { k: k % order, order, zero: false }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_one(&self) -> bool {
        !self.zero && self.k == 0
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        unit_circle(self.k, self.order)
    }

    /// Product of two values sharing an order.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "root-of-unity orders differ");
        if self.zero || other.zero {
            return Self::zero(self.order);
        }
        Self::new(self.k + other.k, self.order)
    }

    pub fn pow(&self, e: u64) -> Self {
        if self.zero {
            return if e == 0 { Self::one(self.order) } else { *self };
        }
        Self::new(((self.k as u128 * e as u128) % self.order as u128) as u64, self.order)
    }

    pub fn conj(&self) -> Self {
        if self.zero {
            return *self;
        }
        Self::new(self.order - self.k, self.order)
    }
}

fn unit_circle(k: u64, n: u64) -> Complex64 {
    // reduce to the first octant-ish range for accuracy at exact multiples of pi/2
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    let theta = TAU * k as f64 / n as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// Exact accumulator for sums of roots of unity of a fixed order: keeps a
/// multiplicity per exponent and only turns into a float when read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnitySum {
    order: u64,
    counts: Vec<u64>,
    terms: u64,
}

impl RootOfUnitySum {
    pub fn new(order: u64) -> Self {
        assert!(order >= 1);
        RootOfUnitySum {
            order,
            counts: vec![0; order as usize],
            terms: 0,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of terms added, zeros included.
    pub fn terms(&self) -> u64 {
        self.terms
    }

    pub fn add(&mut self, v: RootOfUnityValue) {
        self.add_many(v, 1);
    }

    /// Add `mult` copies of `v`. The value's order must divide or be
    /// divisible by the accumulator's order, with `v` lying in the
    /// accumulator's subgroup.
    pub fn add_many(&mut self, v: RootOfUnityValue, mult: u64) {
        self.terms += mult;
        if v.zero || mult == 0 {
            return;
        }
        let idx = if self.order.is_multiple_of(v.order) {
            v.k * (self.order / v.order)
        } else {
            let step = v.order / self.order;
            assert!(
                v.order.is_multiple_of(self.order) && v.k.is_multiple_of(step),
                "root of order {} not in the accumulator's group of order {}",
                v.order,
                self.order
            );
            v.k / step
        };
        self.counts[idx as usize] += mult;
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.order, other.order);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.terms += other.terms;
    }

    /// Multiplicity of e^{2πik/order}.
    pub fn multiplicity(&self, k: u64) -> u64 {
        self.counts[(k % self.order) as usize]
    }

    pub fn value(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in self.counts.iter().enumerate() {
            if c != 0 {
                acc += unit_circle(k as u64, self.order) * c as f64;
            }
        }
        acc
    }

    /// Absolute tolerance for comparing this sum with an exact value.
    pub fn tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.terms as f64)
    }
}
