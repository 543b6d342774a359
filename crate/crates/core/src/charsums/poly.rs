use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Modulus;

/// An integer polynomial F(T), coefficients from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialSpec {
    coeffs: Vec<i64>,
}

impl PolynomialSpec {
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::Domain("polynomial must be nonconstant".into()));
        }
        Ok(PolynomialSpec { coeffs })
    }

    /// T + 1
    pub fn shift() -> Self {
        PolynomialSpec { coeffs: vec![1, 1] }
    }

    /// T² + T + 1
    pub fn quadratic() -> Self {
        PolynomialSpec { coeffs: vec![1, 1, 1] }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// F(t) mod m, in 0..m.
    pub fn eval_mod(&self, t: u64, m: u64) -> u64 {
        let m = m as i128;
        let t = t as i128 % m;
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * t + c as i128).rem_euclid(m);
        }
        acc as u64
    }
}

impl std::str::FromStr for PolynomialSpec {
    type Err = Error;

    /// Comma-separated coefficients, constant term first: `1,1,1` is T² + T + 1.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Domain(format!("bad coefficient list {s:?}: {e}")))?;
        Self::new(coeffs)
    }
}

/// α_F(q) = (1/φ(q)) #{u mod q : gcd(u F(u), q) = 1}, evaluated one prime at a time.
pub fn alpha_f(f: &PolynomialSpec, m: &Modulus) -> Ratio<u64> {
    let mut acc = Ratio::from_integer(1u64);
    for &(p, _) in m.factorization().pairs() {
        let good = (1..p).filter(|&u| f.eval_mod(u, p) != 0).count() as u64;
        acc *= Ratio::new(good, p - 1);
    }
    acc
}
