//! Twisted sums over rough numbers, Σ_{n≤X, P⁻(n)>Y} β^{Ω(n)}, against the
//! main term X (log X)^{β-1} e^{-γβ} / (Γ(β) (log Y)^β), and the Euler
//! product G(1) that produces the constant.

mod gamma;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::modular::primes_up_to;
use crate::arith::FactorSieve;
use crate::error::{Error, Result};
use crate::parallel;

pub use gamma::{complex_gamma, exp_integral_e1, recip_gamma, EULER_GAMMA};

/// e^{11/2}, the lower limit for X, Y and Z in the asymptotic statement.
pub const HYPOTHESIS_FLOOR: f64 = 244.691_932_264_220_1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwistedSumParams {
    pub x: u64,
    pub y: f64,
    pub z: Option<f64>,
    pub beta: Complex64,
}

/// Whether the parameters sit inside the region where the asymptotic is proven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HypothesisFlags {
    /// X, Y (and Z when given) are at least e^{11/2}.
    pub above_floor: bool,
    /// Y ≤ Z^{1/(18 log log Z)²}; `None` without Z.
    pub y_small_for_z: Option<bool>,
}

impl TwistedSumParams {
    pub fn new(x: u64, y: f64, z: Option<f64>, beta: Complex64) -> Result<Self> {
        if x < 1 {
            return Err(Error::Domain("X must be at least 1".into()));
        }
        if !(y >= 2.0) {
            return Err(Error::Domain(format!("Y must be at least 2, got {y}")));
        }
        if beta.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("|beta| must be at most 1, got {}", beta.norm())));
        }
        if let Some(z) = z {
            if !(z > 1.0) {
                return Err(Error::Domain(format!("Z must exceed 1, got {z}")));
            }
        }
        Ok(TwistedSumParams { x, y, z, beta })
    }

    pub fn hypotheses(&self) -> HypothesisFlags {
        let floor = HYPOTHESIS_FLOOR;
        let above_floor =
            self.x as f64 >= floor && self.y >= floor && self.z.is_none_or(|z| z >= floor);
        let y_small_for_z = self.z.map(|z| {
            let lll = z.ln().ln();
            lll > 0.0 && self.y.ln() <= z.ln() / (18.0 * lll).powi(2)
        });
        HypothesisFlags {
            above_floor,
            y_small_for_z,
        }
    }
}

/// Counts of Y-rough n ≤ X (n = 1 included) indexed by Ω(n).
pub fn rough_omega_histogram(x: u64, y: f64, sieve: &FactorSieve) -> Result<Vec<u64>> {
    sieve.check(x)?;
    Ok(parallel::chunks(1, x)
        .map(|(lo, hi)| {
            let mut h = vec![0u64; 64];
            for n in lo..hi {
                if n == 1 {
                    h[0] += 1;
                } else if sieve.spf(n) as f64 > y {
                    let omega: u32 = sieve.prime_powers(n).map(|(_, e)| e).sum();
                    h[omega as usize] += 1;
                }
            }
            h
        })
        .reduce(
            || vec![0u64; 64],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        ))
}

/// Σ_{n≤X, P⁻(n)>Y} β^{Ω(n)}, exactly up to the final float evaluation.
pub fn exact_twisted_sum(p: &TwistedSumParams, sieve: &FactorSieve) -> Result<Complex64> {
    let h = rough_omega_histogram(p.x, p.y, sieve)?;
    Ok(weight_histogram(&h, p.beta))
}

fn weight_histogram(h: &[u64], beta: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for &c in h {
        acc += power * c as f64;
        power *= beta;
    }
    acc
}

/// X (log X)^{β-1} e^{-γβ} / (Γ(β) (log Y)^β), principal branches.
pub fn lsd_main_term(p: &TwistedSumParams) -> Result<Complex64> {
    if p.x <= 1 {
        return Err(Error::Domain("the main term needs X > 1".into()));
    }
    let llx = (p.x as f64).ln().ln();
    let lly = p.y.ln().ln();
    let exponent = (p.beta - 1.0) * llx - EULER_GAMMA * p.beta - p.beta * lly;
    Ok(p.x as f64 * exponent.exp() * recip_gamma(p.beta))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistedSumResult {
    pub params: TwistedSumParams,
    pub hypotheses: HypothesisFlags,
    pub exact: Complex64,
    pub main_term: Complex64,
    /// exact / main term; `None` when the main term vanishes.
    pub ratio: Option<Complex64>,
}

pub fn twisted_sum_result(p: &TwistedSumParams, sieve: &FactorSieve) -> Result<TwistedSumResult> {
    let exact = exact_twisted_sum(p, sieve)?;
    let main_term = lsd_main_term(p)?;
    Ok(TwistedSumResult {
        params: *p,
        hypotheses: p.hypotheses(),
        exact,
        main_term,
        ratio: (main_term.norm() > 0.0).then(|| exact / main_term),
    })
}

/// Exact sums and main terms along a grid of X values.
pub fn convergence_scan(
    beta: Complex64,
    xs: &[u64],
    y: f64,
    sieve: &FactorSieve,
) -> Result<Vec<TwistedSumResult>> {
    xs.iter()
        .map(|&x| twisted_sum_result(&TwistedSumParams::new(x, y, None, beta)?, sieve))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerProduct {
    /// ∏_{p≤Y} (1-1/p)^β ∏_{Y<p≤P_max} (1-1/p)^β (1-β/p)^{-1}
    pub partial: Complex64,
    /// `partial` times the estimated contribution of the primes above P_max.
    pub value: Complex64,
    /// Estimated log of the omitted tail, (β² - β)/2 · Σ_{p>P_max} 1/p².
    pub tail_estimate: Complex64,
    pub primes_used: u64,
}

/// G(1) = ∏_{p≤Y} (1-1/p)^β ∏_{p>Y} (1-1/p)^β (1-β/p)^{-1}, truncated at P_max.
///
/// Each factor beyond Y is 1 + (β² - β)/(2p²) + O(p⁻³); the sum over
/// p > P_max of 1/p² is approximated by E₁(log P_max).
pub fn g_one_euler_product(y: f64, beta: Complex64, p_max: u64) -> Result<EulerProduct> {
    if !(y >= 2.0) {
        return Err(Error::Domain(format!("Y must be at least 2, got {y}")));
    }
    if (p_max as f64) < y {
        return Err(Error::Domain(format!("P_max = {p_max} is below Y = {y}")));
    }
    let primes = primes_up_to(p_max);
    let mut log = Complex64::new(0.0, 0.0);
    for &p in &primes {
        let inv = 1.0 / p as f64;
        log += beta * (-inv).ln_1p();
        if p as f64 > y {
            log -= (1.0 - beta * inv).ln();
        }
    }
    let tail_estimate = (beta * beta - beta) / 2.0 * exp_integral_e1((p_max as f64).ln());
    Ok(EulerProduct {
        partial: log.exp(),
        value: (log + tail_estimate).exp(),
        tail_estimate,
        primes_used: primes.len() as u64,
    })
}
