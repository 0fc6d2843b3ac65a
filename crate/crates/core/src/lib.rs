//! Discriminants, index divisors and monogenity for the polynomial family
//! `f(x) = (x^2 + 1)^n - a x^n`.
//!
//! The crate computes the discriminant of `f` in closed form and checks it
//! against a Sylvester-resultant computation, classifies every prime divisor
//! of the discriminant with a fast family-specific rule, and cross-checks that
//! rule with a general Dedekind-criterion engine built on factorization over
//! prime fields.
//!
//! Module map:
//!
//! * [`arith`]: primality, factorization, valuations.
//! * [`poly_int`]: integer polynomials, resultants, discriminants.
//! * [`poly_mod`]: polynomials over Z/pZ and their factorization.
//! * [`family`]: construction of `f`, closed-form discriminant, irreducibility sieve.
//! * [`dedekind`]: generic Dedekind criterion and the family prime classifier.
//! * [`index`]: full per-polynomial analysis and the `f_p` table scan.
//! * [`cli`]: command-line front end and record/cache formats.

pub mod arith;
pub mod cli;
pub mod dedekind;
pub mod family;
mod hensel;
pub mod index;
pub mod poly_int;
pub mod poly_mod;
pub mod record;

pub use arith::{Effort, FactorResult, PrimePower, SquarefreeVerdict};
pub use dedekind::{CaseTag, Lift, PrimeVerdict};
pub use family::{FamilyParams, IrreducibilityVerdict};
pub use index::{IndexReport, IndexValue, Monogenic};
pub use poly_int::IntPoly;
pub use poly_mod::{ModFactorization, ModPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("polynomial degree is too small for this operation")]
    DegreeTooSmall,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("modulus {0} does not fit in 64 bits")]
    ModulusTooLarge(String),
}
