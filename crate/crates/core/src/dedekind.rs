//! Deciding whether a prime divides the index `[Z_K : Z[theta]]`.
//!
//! Two independent routes: [`dedekind_generic`] applies the generalized
//! Dedekind criterion to any monic polynomial through its factorization
//! modulo `p`; [`classify_prime`] applies the closed-form rule for the family
//! `(x^2 + 1)^n - a x^n`, which only needs valuations and one modular power.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_probable_prime, pow_mod, valuation};
use crate::family::{build, disc_valuation, FamilyParams};
use crate::poly_int::IntPoly;
use crate::poly_mod::{factor_mod_with_rng, reduce, ModFactorization, ModPoly, DEFAULT_SEED};
use crate::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DedekindError {
    #[error("the polynomial must be monic")]
    NotMonic,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("prime {0} is too large for factorization modulo p")]
    ModulusTooLarge(BigUint),
    #[error("{0} does not divide the discriminant, so it cannot divide the index")]
    NotDiscriminantDivisor(BigUint),
    #[error("the discriminant is zero")]
    DiscriminantZero,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Which rule decided a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `p | a`: divides the index iff `p^2 | a`.
    ACase,
    /// `p` does not divide `a` but divides `n`: divides iff `p^2 | a^(p^j) - a`.
    NCase,
    /// `p` does not divide `an`, `n` odd: divides iff `p^2 | disc(f)`.
    OddTail,
    /// `p` does not divide `an`, `n` even: divides iff `p^2 | 2^n - a`.
    EvenTail,
    /// Decided by the generic Dedekind criterion.
    GenericDedekind,
}

impl CaseTag {
    pub fn label(self) -> &'static str {
        match self {
            CaseTag::ACase => "(i) p | a",
            CaseTag::NCase => "(ii) p | n, p does not divide a",
            CaseTag::OddTail => "(iii) p does not divide an, n odd",
            CaseTag::EvenTail => "(iv) p does not divide an, n even",
            CaseTag::GenericDedekind => "generic Dedekind criterion",
        }
    }

    /// The condition which, when it holds, keeps `p` out of the index.
    pub fn condition(self) -> &'static str {
        match self {
            CaseTag::ACase => "p^2 does not divide a",
            CaseTag::NCase => "p^2 does not divide a^(p^j) - a",
            CaseTag::OddTail => "p^2 does not divide disc(f)",
            CaseTag::EvenTail => "p^2 does not divide 2^n - a",
            CaseTag::GenericDedekind => "no repeated factor of f mod p divides M mod p",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Values the decision was read from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Evidence {
    pub a_valuation: u32,
    /// `j = v_p(n)`.
    pub n_valuation: u32,
    /// `a^(p^j) mod p^2`, case (ii) only.
    pub a_pow_mod_p2: Option<BigUint>,
    /// `a mod p^2`, case (ii) only.
    pub a_mod_p2: Option<BigUint>,
    pub disc_valuation: u32,
    /// `v_p(2^n - a)`.
    pub tail_valuation: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeVerdict {
    pub prime: BigUint,
    pub divides_index: bool,
    pub case_tag: CaseTag,
    pub evidence: Evidence,
}

/// Which integer representatives lift mod-p factors back to `Z[x]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Lift {
    /// Coefficients in `[0, p)`.
    #[default]
    Canonical,
    /// Coefficients in `(-p/2, p/2]`.
    Symmetric,
}

/// Full record of one generic Dedekind test.
#[derive(Clone, Debug)]
pub struct DedekindOutcome {
    pub divides_index: bool,
    pub factorization: ModFactorization,
    /// `M(x) = (f - prod g_i^e_i) / p` reduced mod p.
    pub m_bar: ModPoly,
    /// Repeated factors that divide `M mod p`.
    pub offending: Vec<ModPoly>,
}

/// Generalized Dedekind criterion with canonical lifts and the default seed.
///
/// Returns true when `p` divides `[Z_K : Z[theta]]`. The criterion assumes `f`
/// irreducible over Q; on reducible input the answer has no meaning.
pub fn dedekind_generic(f: &IntPoly, p: u64) -> Result<bool, DedekindError> {
    dedekind_generic_with(f, p, Lift::Canonical, DEFAULT_SEED).map(|o| o.divides_index)
}

pub fn dedekind_generic_with(f: &IntPoly, p: u64, lift: Lift, seed: u64) -> Result<DedekindOutcome, DedekindError> {
    if !f.is_monic() {
        return Err(DedekindError::NotMonic);
    }
    if !is_probable_prime(&BigUint::from(p)) {
        return Err(DedekindError::NotPrime(BigUint::from(p)));
    }
    let f_bar = reduce(f, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factorization = factor_mod_with_rng(&f_bar, &mut rng)?;
    let product = factorization.factors.iter().fold(IntPoly::one(), |acc, (g, e)| {
        let g = match lift {
            Lift::Canonical => g.lift_canonical(),
            Lift::Symmetric => g.lift_symmetric(),
        };
        &acc * &g.pow(*e)
    });
    let m = (f - &product)
        .div_scalar_exact(&BigInt::from(p))
        .unwrap_or_else(|| panic!("f - prod g_i^e_i is not divisible by {p}: mod-p factorization is wrong"));
    let m_bar = reduce(&m, p)?;
    let offending: Vec<ModPoly> = factorization
        .factors
        .iter()
        .filter(|(_, e)| *e >= 2)
        .filter(|(g, _)| m_bar.divisible_by(g).expect("same modulus"))
        .map(|(g, _)| g.clone())
        .collect();
    Ok(DedekindOutcome {
        divides_index: !offending.is_empty(),
        factorization,
        m_bar,
        offending,
    })
}

/// The generic criterion packaged as a [`PrimeVerdict`] for the family.
pub fn generic_verdict(params: &FamilyParams, p: &BigUint, seed: u64) -> Result<PrimeVerdict, DedekindError> {
    let evidence = base_evidence(params, p)?;
    let small = p.to_u64().ok_or_else(|| DedekindError::ModulusTooLarge(p.clone()))?;
    let outcome = dedekind_generic_with(&build(params), small, Lift::Canonical, seed)?;
    Ok(PrimeVerdict {
        prime: p.clone(),
        divides_index: outcome.divides_index,
        case_tag: CaseTag::GenericDedekind,
        evidence,
    })
}

fn base_evidence(params: &FamilyParams, p: &BigUint) -> Result<Evidence, DedekindError> {
    if !is_probable_prime(p) {
        return Err(DedekindError::NotPrime(p.clone()));
    }
    let disc_v = disc_valuation(params, p).ok_or(DedekindError::DiscriminantZero)?;
    if disc_v == 0 {
        return Err(DedekindError::NotDiscriminantDivisor(p.clone()));
    }
    let tail = params.tail_minus();
    Ok(Evidence {
        a_valuation: valuation(params.a(), p),
        n_valuation: valuation(&params.n_big(), p),
        a_pow_mod_p2: None,
        a_mod_p2: None,
        disc_valuation: disc_v,
        tail_valuation: if tail.is_zero() { 0 } else { valuation(&tail, p) },
    })
}

/// Decides whether the prime `p | disc(f)` divides the index of
/// `f = (x^2 + 1)^n - a x^n` by the closed-form case rule.
pub fn classify_prime(params: &FamilyParams, p: &BigUint) -> Result<PrimeVerdict, DedekindError> {
    let mut evidence = base_evidence(params, p)?;
    let (case_tag, divides_index) = if evidence.a_valuation >= 1 {
        (CaseTag::ACase, evidence.a_valuation >= 2)
    } else if evidence.n_valuation >= 1 {
        let p2 = p * p;
        let pj = num_traits::pow(p.clone(), evidence.n_valuation as usize);
        let powered = pow_mod(params.a(), &pj, &p2);
        let a_mod = pow_mod(params.a(), &BigUint::from(1u32), &p2);
        let divides = powered == a_mod;
        evidence.a_pow_mod_p2 = Some(powered);
        evidence.a_mod_p2 = Some(a_mod);
        (CaseTag::NCase, divides)
    } else if params.n() % 2 == 1 {
        // p = 2 cannot land here: with a and n odd the discriminant is odd.
        debug_assert!(p != &BigUint::from(2u32));
        (CaseTag::OddTail, evidence.disc_valuation >= 2)
    } else {
        debug_assert!(p != &BigUint::from(2u32));
        (CaseTag::EvenTail, evidence.tail_valuation >= 2)
    };
    Ok(PrimeVerdict {
        prime: p.clone(),
        divides_index,
        case_tag,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, a: i64) -> FamilyParams {
        FamilyParams::new(n, a).unwrap()
    }

    fn big(v: u32) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn generic_examples_for_f5() {
        let f = build(&fam(5, 5));
        assert!(dedekind_generic(&f, 3).unwrap());
        assert!(!dedekind_generic(&f, 5).unwrap());
        assert!(!dedekind_generic(&f, 37).unwrap());
    }

    #[test]
    fn generic_rejects_bad_input() {
        let f = IntPoly::from_i64(&[1, 0, 2]);
        assert_eq!(dedekind_generic(&f, 3), Err(DedekindError::NotMonic));
        let g = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(dedekind_generic(&g, 9), Err(DedekindError::NotPrime(big(9))));
    }

    #[test]
    fn squarefree_reduction_never_divides() {
        // x^2 + 1 is squarefree mod 3.
        let g = IntPoly::from_i64(&[1, 0, 1]);
        let out = dedekind_generic_with(&g, 3, Lift::Canonical, 1).unwrap();
        assert!(out.factorization.is_squarefree());
        assert!(!out.divides_index);
    }

    #[test]
    fn textbook_quadratic_orders() {
        // x^2 - 5: 2 divides [Z_K : Z[sqrt 5]]; x^2 + 3: 2 divides the index too.
        assert!(dedekind_generic(&IntPoly::from_i64(&[-5, 0, 1]), 2).unwrap());
        assert!(dedekind_generic(&IntPoly::from_i64(&[3, 0, 1]), 2).unwrap());
        // x^2 + 1 is monogenic.
        assert!(!dedekind_generic(&IntPoly::from_i64(&[1, 0, 1]), 2).unwrap());
        // x^2 - 12 = x^2 - 4*3: 2 divides the index, 3 does not.
        assert!(dedekind_generic(&IntPoly::from_i64(&[-12, 0, 1]), 2).unwrap());
        assert!(!dedekind_generic(&IntPoly::from_i64(&[-12, 0, 1]), 3).unwrap());
    }

    #[test]
    fn classify_examples() {
        let v = classify_prime(&fam(5, 5), &big(3)).unwrap();
        assert!(v.divides_index);
        assert_eq!(v.case_tag, CaseTag::OddTail);
        assert_eq!(v.evidence.disc_valuation, 3);

        let v = classify_prime(&fam(5, 5), &big(5)).unwrap();
        assert!(!v.divides_index);
        assert_eq!(v.case_tag, CaseTag::ACase);
        assert_eq!(v.evidence.a_valuation, 1);

        let v = classify_prime(&fam(47, 47), &big(5)).unwrap();
        assert!(v.divides_index);
        assert_eq!(v.case_tag, CaseTag::OddTail);
        assert_eq!(v.evidence.disc_valuation, 3);

        let v = classify_prime(&fam(3, 2), &big(3)).unwrap();
        assert!(!v.divides_index);
        assert_eq!(v.case_tag, CaseTag::NCase);
        assert_eq!(v.evidence.n_valuation, 1);
        // 2^3 = 8 mod 9 versus 2: 9 does not divide 8 - 2 = 6.
        assert_eq!(v.evidence.a_pow_mod_p2, Some(big(8)));
        assert_eq!(v.evidence.a_mod_p2, Some(big(2)));
    }

    #[test]
    fn classify_rejects_out_of_scope_primes() {
        assert_eq!(
            classify_prime(&fam(5, 5), &big(11)),
            Err(DedekindError::NotDiscriminantDivisor(big(11)))
        );
        assert_eq!(classify_prime(&fam(5, 5), &big(4)), Err(DedekindError::NotPrime(big(4))));
        assert_eq!(classify_prime(&fam(2, 4), &big(3)), Err(DedekindError::DiscriminantZero));
    }

    #[test]
    fn even_tail_case() {
        // n = 2, a = 7: 2^2 - 7 = -3, discriminant 2^4 7^2 3^2.
        let v = classify_prime(&fam(2, 7), &big(3)).unwrap();
        assert_eq!(v.case_tag, CaseTag::EvenTail);
        assert!(!v.divides_index);
        // n = 2, a = 13: 4 - 13 = -9, so 3^2 | 2^n - a.
        let v = classify_prime(&fam(2, 13), &big(3)).unwrap();
        assert_eq!(v.case_tag, CaseTag::EvenTail);
        assert!(v.divides_index);
    }

    #[test]
    fn generic_verdict_matches_classifier_on_f5() {
        for p in [3u32, 5, 37] {
            let g = generic_verdict(&fam(5, 5), &big(p), 7).unwrap();
            let c = classify_prime(&fam(5, 5), &big(p)).unwrap();
            assert_eq!(g.case_tag, CaseTag::GenericDedekind);
            assert_eq!(g.divides_index, c.divides_index, "p = {p}");
        }
    }
}
