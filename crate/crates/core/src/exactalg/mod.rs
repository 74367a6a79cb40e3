//! Exact arithmetic: rationals, ℓ-adic valuations and univariate polynomials over ℚ.

mod irreducible;
mod poly;
mod rat;
mod resultant;
mod squarefree;

pub use irreducible::{certify_irreducible, IrreducibilityVerdict, ReducibilityWitness, CERTIFICATION_PRIMES};
pub use poly::Poly;
pub use rat::{
    format_rat, int, is_integral_away_from, is_prime, is_unit_away_from, parse_rat, rat, val_ell, Rat, Valuation,
};
pub use resultant::{discriminant, resultant};
pub use squarefree::{squarefree_decompose, SquarefreeDecomposition};
