//! Full analysis of one member of the family: discriminant factorization,
//! per-prime verdicts, the index (exact or bounded) and monogenity.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;

use crate::arith::{factor, valuation, Effort, FactorResult, SquarefreeVerdict};
use crate::dedekind::{classify_prime, generic_verdict, PrimeVerdict};
use crate::family::{disc_closed_form, disc_sign, irreducibility_test, FamilyParams, IrreducibilityVerdict};
use crate::poly_mod::DEFAULT_SEED;

/// Odd primes below 100 for which `H(p) = (2^p - p)(2^p + p)` has been
/// published as squarefree. 47 is on this list although `5^3 | 2^47 + 47`.
pub const PUBLISHED_SQUAREFREE_H: [u32; 12] = [3, 11, 13, 17, 19, 29, 37, 47, 67, 71, 73, 89];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexValue {
    Exact(BigUint),
    /// The index is a multiple of `value`. `undetermined` lists primes known
    /// to divide the index whose exponent could not be pinned down.
    AtLeast { value: BigUint, undetermined: Vec<BigUint> },
    /// The discriminant is zero and `f` has a repeated factor.
    Undefined,
}

impl IndexValue {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            IndexValue::Exact(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Exact(v) => write!(f, "{v}"),
            IndexValue::AtLeast { value, undetermined } if undetermined.is_empty() => {
                write!(f, "multiple of {value}")
            }
            IndexValue::AtLeast { value, undetermined } => {
                let u: Vec<String> = undetermined.iter().map(|q| q.to_string()).collect();
                write!(f, "multiple of {value} (exponent undetermined at {})", u.join(", "))
            }
            IndexValue::Undefined => f.write_str("undefined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Monogenic {
    Yes,
    No,
    Unknown(String),
    /// The question does not apply, e.g. `f` is reducible.
    NotApplicable(String),
}

impl Monogenic {
    pub fn as_str(&self) -> &'static str {
        match self {
            Monogenic::Yes => "yes",
            Monogenic::No => "no",
            Monogenic::Unknown(_) => "unknown",
            Monogenic::NotApplicable(_) => "not_applicable",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Monogenic::Unknown(r) | Monogenic::NotApplicable(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Monogenic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason() {
            Some(r) => write!(f, "{} ({r})", self.as_str()),
            None => f.write_str(self.as_str()),
        }
    }
}

/// Result of running the generic criterion next to the classifier.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCheck {
    pub checked: Vec<BigUint>,
    pub mismatches: Vec<BigUint>,
    /// Primes too large for the mod-p engine.
    pub skipped: Vec<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub params: FamilyParams,
    pub effort: Effort,
    pub irreducibility: IrreducibilityVerdict,
    pub disc: BigInt,
    /// Sign of the discriminant; 0 when it vanishes.
    pub disc_sign: i8,
    /// `None` when the discriminant is zero.
    pub disc_factors: Option<FactorResult>,
    pub verdicts: Vec<PrimeVerdict>,
    pub index: IndexValue,
    pub monogenic: Monogenic,
    pub cross_check: Option<CrossCheck>,
    pub diagnostics: Vec<String>,
}

impl IndexReport {
    pub fn dividing_primes(&self) -> impl Iterator<Item = &BigUint> {
        self.verdicts.iter().filter(|v| v.divides_index).map(|v| &v.prime)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub effort: Effort,
    pub seed: u64,
    /// Also run the generic Dedekind criterion on every classified prime.
    pub cross_check: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            effort: Effort::Default,
            seed: DEFAULT_SEED,
            cross_check: false,
        }
    }
}

impl From<Effort> for AnalysisOptions {
    fn from(effort: Effort) -> Self {
        AnalysisOptions {
            effort,
            ..Default::default()
        }
    }
}

/// Factorizations of `n`, `a`, `2^n - a` and `2^n - (-1)^n a`.
struct Components {
    n: FactorResult,
    a: FactorResult,
    minus: FactorResult,
    plus: FactorResult,
}

impl Components {
    fn new(params: &FamilyParams, effort: Effort) -> Self {
        let minus = factor(&params.tail_minus(), effort);
        let plus = if params.n().is_multiple_of(2) {
            minus.clone()
        } else {
            factor(&params.tail_plus(), effort)
        };
        Components {
            n: factor(&params.n_big(), effort),
            a: factor(params.a(), effort),
            minus,
            plus,
        }
    }

    fn discriminant(&self, params: &FamilyParams) -> FactorResult {
        let unit = FactorResult {
            sign: disc_sign(params),
            factors: Vec::new(),
            cofactor: BigUint::one(),
            complete: true,
        };
        let n = params.n();
        FactorResult::product(&[
            (&unit, 1),
            (&self.n, 2 * n),
            (&self.a, 2 * n - 2),
            (&self.minus, 1),
            (&self.plus, 1),
        ])
    }
}

pub fn analyze(params: &FamilyParams, effort: Effort) -> IndexReport {
    analyze_with(params, &effort.into())
}

pub fn analyze_with(params: &FamilyParams, opts: &AnalysisOptions) -> IndexReport {
    let irreducibility = irreducibility_test(params, opts.effort);
    if params.disc_is_zero() {
        return IndexReport {
            params: params.clone(),
            effort: opts.effort,
            irreducibility,
            disc: BigInt::from(0),
            disc_sign: 0,
            disc_factors: None,
            verdicts: Vec::new(),
            index: IndexValue::Undefined,
            monogenic: Monogenic::NotApplicable("discriminant is zero".into()),
            cross_check: None,
            diagnostics: vec!["discriminant is zero: f has repeated factor".into()],
        };
    }
    let components = Components::new(params, opts.effort);
    analyze_components(params, opts, irreducibility, &components)
}

fn analyze_components(
    params: &FamilyParams,
    opts: &AnalysisOptions,
    irreducibility: IrreducibilityVerdict,
    components: &Components,
) -> IndexReport {
    let disc_factors = components.discriminant(params);
    let disc = disc_closed_form(params);
    debug_assert!(!disc_factors.complete || disc_factors.value() == disc);
    let mut diagnostics = Vec::new();
    if !disc_factors.complete {
        diagnostics.push(format!(
            "discriminant factorization incomplete at effort {}: unfactored cofactor {}",
            opts.effort, disc_factors.cofactor
        ));
    }

    let verdicts: Vec<PrimeVerdict> = disc_factors
        .primes()
        .map(|q| classify_prime(params, q).expect("q is a prime divisor of a nonzero discriminant"))
        .collect();

    let cross_check = opts.cross_check.then(|| {
        let mut cc = CrossCheck::default();
        for v in &verdicts {
            match generic_verdict(params, &v.prime, opts.seed) {
                Ok(g) => {
                    if g.divides_index != v.divides_index {
                        cc.mismatches.push(v.prime.clone());
                    }
                    cc.checked.push(v.prime.clone());
                }
                Err(_) => cc.skipped.push(v.prime.clone()),
            }
        }
        cc
    });
    if let Some(cc) = &cross_check {
        for q in &cc.mismatches {
            diagnostics.push(format!("generic Dedekind criterion disagrees with the classifier at {q}"));
        }
    }

    let mut value = BigUint::one();
    let mut undetermined = Vec::new();
    for v in verdicts.iter().filter(|v| v.divides_index) {
        value *= &v.prime;
        if v.evidence.disc_valuation >= 4 {
            undetermined.push(v.prime.clone());
        }
    }
    for q in &undetermined {
        diagnostics.push(format!(
            "{q} divides the index with v_{q}(disc) >= 4; its exact exponent is not determined"
        ));
    }
    let index = if undetermined.is_empty() && disc_factors.complete {
        IndexValue::Exact(value)
    } else {
        IndexValue::AtLeast { value, undetermined }
    };

    let monogenic = match &irreducibility {
        IrreducibilityVerdict::Reducible(g) => Monogenic::NotApplicable(format!("f is reducible, divisible by {g}")),
        IrreducibilityVerdict::Unknown => Monogenic::Unknown("irreducibility undetermined".into()),
        IrreducibilityVerdict::Irreducible(_) => {
            if verdicts.iter().any(|v| v.divides_index) {
                Monogenic::No
            } else if !disc_factors.complete {
                Monogenic::Unknown("discriminant factorization incomplete".into())
            } else {
                Monogenic::Yes
            }
        }
    };

    IndexReport {
        params: params.clone(),
        effort: opts.effort,
        irreducibility,
        disc,
        disc_sign: disc_factors.sign,
        disc_factors: Some(disc_factors),
        verdicts,
        index,
        monogenic,
        cross_check,
        diagnostics,
    }
}

/// Every `(n, a)` of the grid with `n >= 2` and `a != 0`, ordered by `n` then `a`.
pub fn grid_pairs(n_range: RangeInclusive<u32>, a_range: RangeInclusive<i64>) -> Vec<(u32, i64)> {
    n_range
        .filter(|&n| n >= 2)
        .flat_map(|n| a_range.clone().filter(|&a| a != 0).map(move |a| (n, a)))
        .collect()
}

/// Analyzes `pairs` in parallel; output order follows input order.
pub fn analyze_many(pairs: &[(u32, i64)], opts: &AnalysisOptions) -> Vec<IndexReport> {
    pairs
        .par_iter()
        .map(|&(n, a)| {
            let params = FamilyParams::new(n, a).expect("pairs are validated");
            analyze_with(&params, opts)
        })
        .collect()
}

pub fn grid_scan(n_range: RangeInclusive<u32>, a_range: RangeInclusive<i64>, effort: Effort) -> Vec<IndexReport> {
    analyze_many(&grid_pairs(n_range, a_range), &effort.into())
}

/// One row of the `f_p = (x^2 + 1)^p - p x^p` table, `p` an odd prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyScanRow {
    pub p: u32,
    /// `H(p) = (2^p - p)(2^p + p)`, so that `disc(f_p) = -p^(4p-2) H(p)`.
    pub h: BigInt,
    pub h_factors: FactorResult,
    pub h_squarefree: SquarefreeVerdict,
    pub index: IndexValue,
    pub monogenic: Monogenic,
    pub notes: Vec<String>,
}

fn scan_row(p: u32, opts: &AnalysisOptions) -> FamilyScanRow {
    let params = FamilyParams::new(p, p as i64).expect("p >= 3");
    let irreducibility = irreducibility_test(&params, opts.effort);
    let components = Components::new(&params, opts.effort);
    let h_factors = FactorResult::product(&[(&components.minus, 1), (&components.plus, 1)]);
    let h = params.tail_minus() * params.tail_plus();
    assert_eq!(
        valuation(&h, &BigUint::from(p)),
        0,
        "{p} divides H({p})"
    );
    let h_squarefree = SquarefreeVerdict::from_factorization(&h_factors);
    let report = analyze_components(&params, opts, irreducibility, &components);

    let mut notes = report.diagnostics.clone();
    let published = PUBLISHED_SQUAREFREE_H.contains(&p);
    match (&h_squarefree, published) {
        (SquarefreeVerdict::NotSquarefree(pp), true) => notes.push(format!(
            "{p} appears in the published list of squarefree H(p), but {pp} divides H({p}); ind(f_{p}) = {}",
            report.index
        )),
        (SquarefreeVerdict::Squarefree, false) if p < 100 => {
            notes.push(format!("H({p}) is squarefree but {p} is missing from the published list"))
        }
        _ => {}
    }
    FamilyScanRow {
        p,
        h,
        h_factors,
        h_squarefree,
        index: report.index,
        monogenic: report.monogenic,
        notes,
    }
}

/// Rows for every odd prime `p <= p_max`.
pub fn fp_table(p_max: u32, effort: Effort) -> Vec<FamilyScanRow> {
    fp_table_with(p_max, &effort.into())
}

pub fn fp_table_with(p_max: u32, opts: &AnalysisOptions) -> Vec<FamilyScanRow> {
    let primes: Vec<u32> = crate::arith::sieve(p_max).into_iter().filter(|&p| p > 2).collect();
    primes.par_iter().map(|&p| scan_row(p, opts)).collect()
}
