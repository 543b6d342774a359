use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Lanczos approximation with g = 7 and nine coefficients (the set published
// with Numerical Recipes-style implementations); about 15 digits for Re s ≥ 1/2.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn pole(s: Complex64) -> Option<i64> {
    (s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0).then_some(s.re as i64)
}

/// Γ(s) for complex s, by Lanczos for Re s ≥ 1/2 and reflection below.
pub fn complex_gamma(s: Complex64) -> Result<Complex64> {
    if let Some(n) = pole(s) {
        return Err(Error::GammaPole(n));
    }
    Ok(gamma_unchecked(s))
}

fn gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        let pi = Complex64::new(PI, 0.0);
        return pi / ((pi * s).sin() * gamma_unchecked(1.0 - s));
    }
    let z = s - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// 1/Γ(s), which is entire: zero at the poles of Γ.
pub fn recip_gamma(s: Complex64) -> Complex64 {
    match complex_gamma(s) {
        Ok(g) => 1.0 / g,
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// Exponential integral E₁(x) = ∫_x^∞ e^{-t}/t dt for x > 0.
pub fn exp_integral_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 needs a positive argument");
    if x < 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        // Continued fraction, evaluated with the modified Lentz method.
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let a = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let delta = c * d;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}
