//! Exact integer arithmetic: the factor sieve, σ(n) mod q, ordered prime
//! factors and smooth/rough counts.

pub mod factor;
pub mod modular;
pub mod sieve;

pub use factor::{
    is_square, kth_largest_prime_factor, psi_smooth_count, rough_count, sigma_mod,
    two_adic_square_form, Factorization, TwoAdicSquareForm,
};
pub use sieve::{build_sieve, FactorSieve, PrimePowers, SieveConfig};

/// Factorize `n` with a prebuilt sieve.
pub fn factorize(n: u64, sieve: &FactorSieve) -> crate::Result<Factorization> {
    sieve.factorize(n)
}
