//! Finite fields, univariate polynomials, rational functions and places of the
//! projective line.

pub mod expr;
mod factor;
mod field;
mod place;
mod poly;
mod rational;
mod series;

pub use factor::Factorization;
pub use field::{is_prime, Embedding, Fe, Field, DEFAULT_PRIME_CAP};
pub use place::{LocalContext, Place};
pub use poly::Poly;
pub use rational::Rf;
pub use series::Laurent;
pub(crate) use series::Series;
pub(crate) use place::support;

/// Seed used wherever a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0;
