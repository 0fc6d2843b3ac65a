//! Randomized cross-checks between independent routes to the same answer.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use monogen::arith::{factor, Effort};
use monogen::dedekind::{classify_prime, dedekind_generic_with, Lift};
use monogen::family::{build, disc_closed_form, disc_valuation, irreducibility_test, FamilyParams};
use monogen::index::{analyze, analyze_with, AnalysisOptions, IndexValue, Monogenic};
use monogen::poly_int::discriminant_via_resultant;

fn params() -> impl Strategy<Value = FamilyParams> {
    (2u32..=7, -300i64..=300)
        .prop_filter("a != 0", |(_, a)| *a != 0)
        .prop_map(|(n, a)| FamilyParams::new(n, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_resultant(p in params()) {
        prop_assert_eq!(disc_closed_form(&p), discriminant_via_resultant(&build(&p)).unwrap());
    }

    #[test]
    fn valuation_matches_factorization(p in params()) {
        prop_assume!(!p.disc_is_zero());
        let fr = factor(&disc_closed_form(&p), Effort::Default);
        prop_assume!(fr.complete);
        for pp in &fr.factors {
            prop_assert_eq!(disc_valuation(&p, &pp.prime), Some(pp.exponent));
        }
    }

    #[test]
    fn classifier_matches_generic_criterion(p in params(), seed in any::<u64>()) {
        prop_assume!(!p.disc_is_zero());
        prop_assume!(irreducibility_test(&p, Effort::Quick).is_irreducible());
        let f = build(&p);
        let fr = factor(&disc_closed_form(&p), Effort::Default);
        for q in fr.primes().filter_map(|q| q.to_u64()).filter(|&q| q < 5000) {
            let fast = classify_prime(&p, &BigUint::from(q)).unwrap();
            let lift = if seed % 2 == 0 { Lift::Canonical } else { Lift::Symmetric };
            let generic = dedekind_generic_with(&f, q, lift, seed).unwrap();
            prop_assert_eq!(fast.divides_index, generic.divides_index, "q = {}", q);
        }
    }

    #[test]
    fn report_invariants(p in params()) {
        let r = analyze(&p, Effort::Quick);
        match &r.index {
            IndexValue::Exact(v) => {
                let v = BigInt::from(v.clone());
                prop_assert!(r.disc.is_multiple_of(&(&v * &v)));
                prop_assert!(r.disc_factors.as_ref().unwrap().complete);
            }
            IndexValue::AtLeast { value, undetermined } => {
                for q in undetermined {
                    prop_assert!(value.is_multiple_of(q));
                }
            }
            IndexValue::Undefined => prop_assert!(p.disc_is_zero()),
        }
        if r.monogenic == Monogenic::Yes {
            prop_assert!(r.irreducibility.is_irreducible());
            prop_assert_eq!(&r.index, &IndexValue::Exact(1u32.into()));
        }
        for v in &r.verdicts {
            prop_assert_eq!(Some(v.evidence.disc_valuation), disc_valuation(&p, &v.prime));
        }
    }

    #[test]
    fn reports_are_reproducible(p in params(), seed in any::<u64>()) {
        let opts = AnalysisOptions { effort: Effort::Quick, seed, cross_check: true };
        let a = analyze_with(&p, &opts);
        let b = analyze_with(&p, &opts);
        prop_assert_eq!(&a, &b);
        if let Some(cc) = &a.cross_check {
            prop_assert!(cc.mismatches.is_empty() || !a.irreducibility.is_irreducible());
        }
    }
}
