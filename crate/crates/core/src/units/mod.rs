//! The unit group U_q and its Dirichlet characters.
//!
//! Characters are labelled by exponent vectors against fixed generators of
//! U_q (a primitive root for each odd prime power, `-1` and `5` for powers
//! of two). Values are exact roots of unity; complex numbers only appear
//! when sums are read out.

mod character;
mod modulus;
mod root;

pub use character::{
    character_with_conductor_count, conductor, enumerate_characters, evaluate, DirichletCharacter,
};
pub use modulus::{
    build_modulus, primitive_root_prime_power, Modulus, PrimePowerBasis, DEFAULT_MODULUS_CAP,
};
pub use root::{RootOfUnitySum, RootOfUnityValue};

/// Σ over `values` of χ(value), accumulated exactly.
pub fn character_sum(
    chi: &DirichletCharacter,
    values: impl IntoIterator<Item = u64>,
) -> RootOfUnitySum {
    let mut s = RootOfUnitySum::new(chi.order());
    for v in values {
        s.add(chi.evaluate(v));
    }
    s
}
