//! Experiments on the sum-of-divisors function in residue classes.
//!
//! The crate computes, exactly where possible, the objects that govern how
//! σ(n) spreads over the coprime residue classes of a modulus q:
//!
//! * [`arith`]: a smallest-prime-factor sieve, σ(n) mod q, ordered prime
//!   factors P_k(n), smooth and rough counts.
//! * [`units`]: unit groups, Dirichlet characters, conductors.
//! * [`charsums`]: the character averages ρ_χ and η_χ, both by brute force
//!   and through their closed forms and factorizations.
//! * [`lsd`]: rough twisted sums Σ β^{Ω(n)} and their asymptotic main term.
//! * [`census`]: sieve-scale counts of σ(n) by residue class.
//! * [`varieties`]: point counts of the congruences behind the
//!   over-representation constructions.
//!
//! ```
//! use sigma_equid::units::{enumerate_characters, Modulus};
//! use sigma_equid::charsums::{rho_brute, rho_closed_form};
//!
//! let m = Modulus::new(15).unwrap();
//! for chi in enumerate_characters(&m) {
//!     let brute = rho_brute(&chi).value;
//!     let closed = rho_closed_form(&chi).unwrap().value;
//!     assert!((brute - closed).norm() < 1e-12);
//! }
//! ```

pub mod arith;
pub mod census;
pub mod charsums;
pub mod error;
pub mod lsd;
pub mod parallel;
pub mod units;
pub mod varieties;

pub use error::{Error, Result};

pub use num_complex::Complex64;
pub use num_rational::Ratio;

// The guide's code listings are compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sieve.md")]
    mod sieve {}
    #[doc = include_str!("../../../book/src/characters.md")]
    mod characters {}
    #[doc = include_str!("../../../book/src/averages.md")]
    mod averages {}
    #[doc = include_str!("../../../book/src/rough-sums.md")]
    mod rough_sums {}
    #[doc = include_str!("../../../book/src/census.md")]
    mod census {}
    #[doc = include_str!("../../../book/src/congruences.md")]
    mod congruences {}
}
