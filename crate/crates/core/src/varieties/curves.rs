use serde::{Deserialize, Serialize};

use crate::arith::modular::{inv_mod, is_prime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "kebab-case")]
pub enum Curve {
    /// (X² + 3)(Y² + 3) = 9
    G,
    /// (X² + X + 1)(Y² + Y + 1) = w
    H { w: u64 },
}

impl Curve {
    fn factor(&self, x: u64, l: u64) -> u64 {
        match self {
            Curve::G => (x * x + 3) % l,
            Curve::H { .. } => (x * x + x + 1) % l,
        }
    }

    fn constant(&self, l: u64) -> u64 {
        match self {
            Curve::G => 9 % l,
            Curve::H { w } => w % l,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveCount {
    pub ell: u64,
    pub curve: Curve,
    /// #{(x, y) ∈ 𝔽_ℓ² on the curve}.
    pub count: u64,
    /// count - ℓ
    pub deviation: i64,
    /// |count - ℓ| / √ℓ
    pub normalized_deviation: f64,
    /// ℓ ≥ 5, where the square-root error term is expected.
    pub in_weil_range: bool,
}

/// Affine points over 𝔽_ℓ, from the value distribution of the one-variable factor.
pub fn curve_point_count(ell: u64, curve: Curve) -> Result<CurveCount> {
    if !is_prime(ell) {
        return Err(Error::Domain(format!("{ell} is not prime")));
    }
    let mut h = vec![0u64; ell as usize];
    for x in 0..ell {
        h[curve.factor(x, ell) as usize] += 1;
    }
    let c = curve.constant(ell);
    let count = if c == 0 {
        // a·b = 0: either factor vanishes.
        let z = h[0];
        z * ell + (ell - z) * z
    } else {
        (1..ell)
            .map(|a| h[a as usize] * h[(c * inv_mod(a, ell).unwrap() % ell) as usize])
            .sum()
    };
    let deviation = count as i64 - ell as i64;
    Ok(CurveCount {
        ell,
        curve,
        count,
        deviation,
        normalized_deviation: deviation.unsigned_abs() as f64 / (ell as f64).sqrt(),
        in_weil_range: ell >= 5,
    })
}
