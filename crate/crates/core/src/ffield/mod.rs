//! Prime field arithmetic and univariate polynomials over it.

mod factor;
mod field;
mod unipoly;

pub use factor::{is_irreducible, uni_factor, uni_find_coprime_irreducible};
pub use field::{is_prime, PrimeField};
pub use unipoly::UniPoly;
