//! Character averages over shifted and quadratic arguments.
//!
//! For a character χ mod q,
//!
//! * ρ_χ = (1/φ(q)) Σ_{v unit} χ(v + 1)
//! * η_χ = (1/φ(q)) Σ_{v unit} χ(v² + v + 1)
//!
//! Each is available by brute force over the residues and by an independent
//! route: ρ_χ through its closed form in the conductor, η_χ as a product of
//! local averages computed at conductor level.

mod eta;
mod poly;
mod rho;
mod sset;
mod weil;

use num_complex::Complex64;
use serde::Serialize;

use crate::units::DirichletCharacter;

pub use eta::{eta_brute, eta_factored, eta_power_sum, local_eta};
pub use poly::{alpha_f, PolynomialSpec};
pub use rho::{rho_brute, rho_closed_form, rho_power_sum, s_chi_ell, s_chi_ell_closed_form};
pub use sset::{verify_s_set, SSetEntry, SSetReport, S_SET};
pub use weil::{weil_clz_check, WeilReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Brute,
    ClosedForm,
}

/// A character average together with how it was obtained.
#[derive(Debug, Clone)]
pub struct CharAverage {
    pub character: DirichletCharacter,
    pub value: Complex64,
    pub method: Method,
    /// Terms summed (zero for pure closed forms).
    pub term_count: u64,
    /// Set when the modulus lies outside the range where the quantity is
    /// normally used (ρ_χ for even q).
    pub outside_usual_range: bool,
}

impl CharAverage {
    /// Absolute tolerance for comparing against an exact value.
    pub fn tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.term_count as f64)
    }
}
