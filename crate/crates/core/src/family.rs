//! The family `f(x) = (x^2 + 1)^n - a x^n`: construction, closed-form
//! discriminant, norm identities and an irreducibility sieve.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{sieve, valuation, Effort};
use crate::hensel::{lift_factorization, precision_for, product_mod, symmetric_mod};
use crate::poly_int::{resultant, IntPoly};
use crate::poly_mod::{factor_mod, is_irreducible_mod, reduce_unchecked, ModPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("n must be at least 2 (got {0})")]
    DegreeTooSmall(u32),
    #[error("a must be nonzero")]
    ZeroA,
}

/// The parameters `(n, a)` of `f(x) = (x^2 + 1)^n - a x^n`; `n >= 2`, `a != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    n: u32,
    a: BigInt,
}

impl FamilyParams {
    pub fn new(n: u32, a: impl Into<BigInt>) -> Result<Self, ParamError> {
        let a = a.into();
        if n < 2 {
            return Err(ParamError::DegreeTooSmall(n));
        }
        if a.is_zero() {
            return Err(ParamError::ZeroA);
        }
        Ok(FamilyParams { n, a })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn n_big(&self) -> BigInt {
        BigInt::from(self.n)
    }

    /// `2^n - a`, the value `f(1)`.
    pub fn tail_minus(&self) -> BigInt {
        (BigInt::one() << self.n) - &self.a
    }

    /// `2^n - (-1)^n a`, the value `f(-1)`.
    pub fn tail_plus(&self) -> BigInt {
        if self.n.is_multiple_of(2) {
            self.tail_minus()
        } else {
            (BigInt::one() << self.n) + &self.a
        }
    }

    /// True when one of the tail factors vanishes, i.e. the discriminant is 0.
    pub fn disc_is_zero(&self) -> bool {
        self.tail_minus().is_zero() || self.tail_plus().is_zero()
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, mag) = if self.a.is_negative() { ('+', -&self.a) } else { ('-', self.a.clone()) };
        let coeff = if mag.is_one() { String::new() } else { mag.to_string() };
        write!(f, "(x^2 + 1)^{} {op} {coeff}x^{}", self.n, self.n)
    }
}

/// Expands `(x^2 + 1)^n - a x^n`.
pub fn build(params: &FamilyParams) -> IntPoly {
    let base = IntPoly::from_i64(&[1, 0, 1]).pow(params.n);
    &base - &IntPoly::monomial(params.a.clone(), params.n as usize)
}

/// Sign of the discriminant, `(-1)^binom(2n, 2)`; `binom(2n, 2) = n(2n - 1)`
/// has the parity of `n`.
pub fn disc_sign(params: &FamilyParams) -> i8 {
    if params.n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(-1)^binom(2n,2) * n^(2n) * a^(2n-2) * (2^n - a) * (2^n - (-1)^n a)`.
pub fn disc_closed_form(params: &FamilyParams) -> BigInt {
    let n = params.n as usize;
    let magnitude = num_traits::pow(params.n_big(), 2 * n)
        * num_traits::pow(params.a.clone(), 2 * n - 2)
        * params.tail_minus()
        * params.tail_plus();
    if disc_sign(params) < 0 {
        -magnitude
    } else {
        magnitude
    }
}

/// `v_q` of the discriminant, summed factor by factor without forming it.
/// `None` when the discriminant is zero.
pub fn disc_valuation(params: &FamilyParams, q: &BigUint) -> Option<u32> {
    if params.disc_is_zero() {
        return None;
    }
    let n = params.n;
    Some(
        2 * n * valuation(&params.n_big(), q)
            + (2 * n - 2) * valuation(&params.a, q)
            + valuation(&params.tail_minus(), q)
            + valuation(&params.tail_plus(), q),
    )
}

/// Norms of `theta`, `theta - 1`, `theta + 1` and `theta^2 + 1` for a root
/// `theta` of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormIdentities {
    pub theta: BigInt,
    pub theta_minus_one: BigInt,
    pub theta_plus_one: BigInt,
    pub theta_squared_plus_one: BigInt,
}

/// Closed-form norms `(1, 2^n - a, 2^n - (-1)^n a, a^2)`.
///
/// The degree `2n` is even, so `N(theta - c) = f(c)`; and
/// `N(theta^2 + 1) = f(i) f(-i) = Res(x^2 + 1, f)`. Both are asserted.
pub fn norm_identities(params: &FamilyParams) -> NormIdentities {
    let out = NormIdentities {
        theta: BigInt::one(),
        theta_minus_one: params.tail_minus(),
        theta_plus_one: params.tail_plus(),
        theta_squared_plus_one: &params.a * &params.a,
    };
    let f = build(params);
    assert_eq!(f.evaluate(&BigInt::zero()), out.theta);
    assert_eq!(f.evaluate(&BigInt::one()), out.theta_minus_one);
    assert_eq!(f.evaluate(&-BigInt::one()), out.theta_plus_one);
    let res = resultant(&IntPoly::from_i64(&[1, 0, 1]), &f).expect("nonzero inputs");
    assert_eq!(res, out.theta_squared_plus_one);
    out
}

/// Why a polynomial was declared irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityCertificate {
    /// `f` stays irreducible modulo this prime.
    IrreducibleModPrime(u64),
    /// The factor-degree patterns modulo these primes admit no proper factor.
    DegreePatterns(Vec<u64>),
    /// `y^n - a` is irreducible and, with `n` odd, `a^2 - 4^n` is not a
    /// square, so `x^2 - beta x + 1` stays irreducible over `Q(beta)`.
    TraceNorm,
    /// Every combination of p-adic factors of an admissible degree was tried
    /// modulo `prime^precision` and none divides `f`.
    Recombination { prime: u64, precision: u32 },
}

impl fmt::Display for IrreducibilityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibilityCertificate::IrreducibleModPrime(p) => write!(f, "irreducible mod {p}"),
            IrreducibilityCertificate::DegreePatterns(ps) => {
                let ps: Vec<String> = ps.iter().map(u64::to_string).collect();
                write!(f, "degree patterns mod {}", ps.join(", "))
            }
            IrreducibilityCertificate::TraceNorm => f.write_str("y^n - a irreducible, a^2 - 4^n not a square"),
            IrreducibilityCertificate::Recombination { prime, precision } => {
                write!(f, "exhaustive recombination mod {prime}^{precision}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    Irreducible(IrreducibilityCertificate),
    /// Carries a proper factor that divides `f` exactly.
    Reducible(IntPoly),
    Unknown,
}

impl IrreducibilityVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            IrreducibilityVerdict::Irreducible(_) => "irreducible",
            IrreducibilityVerdict::Reducible(_) => "reducible",
            IrreducibilityVerdict::Unknown => "unknown",
        }
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self, IrreducibilityVerdict::Irreducible(_))
    }
}

/// `c` with `c^k = a`, if one exists.
fn exact_root(a: &BigInt, k: u32) -> Option<BigInt> {
    if a.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let r = BigInt::from(a.magnitude().nth_root(k));
    let r = if a.is_negative() { -r } else { r };
    (num_traits::pow(r.clone(), k as usize) == *a).then_some(r)
}

/// Algebraic witnesses: `a = c^r` for a prime `r | n` makes
/// `X^r - (c Y)^r` factor with `X = (x^2+1)^(n/r)`, `Y = x^(n/r)`; and
/// `a = -4c^4` with `4 | n` makes `X^4 + 4c^4 Y^4` factor.
fn power_witness(params: &FamilyParams, f: &IntPoly) -> Option<IntPoly> {
    let n = params.n;
    let quad = IntPoly::from_i64(&[1, 0, 1]);
    for r in sieve(n).into_iter().filter(|r| n.is_multiple_of(*r)) {
        if let Some(c) = exact_root(&params.a, r) {
            let m = (n / r) as usize;
            let witness = &quad.pow(m as u32) - &IntPoly::monomial(c, m);
            if f.exact_div(&witness).is_some() {
                return Some(witness);
            }
        }
    }
    if n.is_multiple_of(4) && params.a.is_negative() {
        let quarter = -&params.a;
        if (&quarter % 4u32).is_zero() {
            if let Some(c) = exact_root(&(quarter / 4), 4) {
                let m = (n / 4) as usize;
                let x = quad.pow(m as u32);
                let y = IntPoly::monomial(BigInt::one(), m);
                let two_c = BigInt::from(2) * &c;
                let witness = &(&(&x * &x) + &(&x * &y).scalar_mul(&two_c))
                    + &(&y * &y).scalar_mul(&(BigInt::from(2) * &c * &c));
                if f.exact_div(&witness).is_some() {
                    return Some(witness);
                }
            }
        }
    }
    None
}

/// Bitset of subset sums of `degrees`, indexed `0..=total`.
fn subset_sums(degrees: &[usize], total: usize) -> Vec<bool> {
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=total).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Coefficient bound for any monic factor of degree at most `d`:
/// `2^d * ||f||_2`, rounded up.
fn factor_coefficient_bound(f: &IntPoly, d: usize) -> BigInt {
    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = BigInt::from(norm_sq.magnitude().sqrt()) + 1;
    (BigInt::one() << d) * norm
}

struct SievePrime {
    p: u64,
    factors: Vec<ModPoly>,
}

enum Recombination {
    Found(IntPoly),
    Exhausted { precision: u32 },
    OutOfBudget,
}

/// Searches for a factor of `f` among products of its p-adic factors whose
/// degree the sieve still allows.
fn recombine(f: &IntPoly, sp: &SievePrime, allowed: &[bool], budget: u64) -> Recombination {
    let total = f.degree().unwrap_or(0);
    // One side of any split avoids the last factor, so subsets of the others
    // suffice, but that side can have any degree below `total`.
    let free = sp.factors.len() - 1;
    if free >= 63 || (1u64 << free) > budget {
        return Recombination::OutOfBudget;
    }
    let widest = allowed.iter().rposition(|&ok| ok).unwrap_or(total).min(total);
    let bound = factor_coefficient_bound(f, widest);
    let precision = precision_for(sp.p, &(&bound * 2));
    let modulus = num_traits::pow(BigInt::from(sp.p), precision as usize);
    let lifted = lift_factorization(f, &sp.factors, precision);
    let degrees: Vec<usize> = lifted.iter().map(|g| g.degree().unwrap_or(0)).collect();
    let constants: Vec<BigInt> = lifted.iter().map(|g| g.coeff(0)).collect();
    let constant_target = f.coeff(0).magnitude().clone();
    for mask in 1u64..(1u64 << free) {
        let members: Vec<usize> = (0..free).filter(|i| mask >> i & 1 == 1).collect();
        let deg: usize = members.iter().map(|&i| degrees[i]).sum();
        if deg == 0 || deg >= total || !allowed[deg] {
            continue;
        }
        // The constant term of an integer factor divides f(0).
        let c = members
            .iter()
            .fold(BigInt::one(), |acc, &i| (acc * &constants[i]) % &modulus);
        let c = symmetric_mod(&IntPoly::constant(c), &modulus).coeff(0);
        if c.is_zero() || !(&constant_target % c.magnitude()).is_zero() {
            continue;
        }
        let refs: Vec<&IntPoly> = members.iter().map(|&i| &lifted[i]).collect();
        let candidate = symmetric_mod(&product_mod(&refs, &modulus), &modulus);
        if f.exact_div(&candidate).is_some() {
            return Recombination::Found(candidate);
        }
    }
    Recombination::Exhausted { precision }
}

/// Decides irreducibility of `f` over Q where the sieve allows.
///
/// `f(x) = x^n h(x + 1/x)` with `h(y) = y^n - a`. Once the Capelli witnesses
/// are ruled out `h` is irreducible, a root `theta` of `f` satisfies
/// `[Q(theta) : Q(beta)] <= 2` for `beta = theta + 1/theta`, and any proper
/// factor of `f` has degree `n`. A split needs `beta^2 - 4` to be a square in
/// `Q(beta)`, hence its norm `h(2) h(-2)` to be a square in Q; for odd `n`
/// that norm is `a^2 - 4^n`.
///
/// Order of checks: rational roots `+-1`, perfect-power and `-4c^4`
/// witnesses, the norm test, degree patterns modulo sampled primes not
/// dividing the discriminant, and finally Hensel lifting with factor
/// recombination bounded by the effort level.
pub fn irreducibility_test(params: &FamilyParams, effort: Effort) -> IrreducibilityVerdict {
    let f = build(params);
    let total = 2 * params.n as usize;
    for root in [1i64, -1] {
        if f.evaluate(&BigInt::from(root)).is_zero() {
            return IrreducibilityVerdict::Reducible(IntPoly::from_i64(&[-root, 1]));
        }
    }
    if let Some(w) = power_witness(params, &f) {
        return IrreducibilityVerdict::Reducible(w);
    }
    if params.n % 2 == 1 {
        let norm = &params.a * &params.a - (BigInt::one() << (2 * params.n));
        if norm.is_negative() || exact_root(&norm, 2).is_none() {
            return IrreducibilityVerdict::Irreducible(IrreducibilityCertificate::TraceNorm);
        }
    }

    let wanted = effort.sieve_primes();
    let mut sampled: Vec<SievePrime> = Vec::with_capacity(wanted);
    let mut allowed = vec![false; total + 1];
    allowed[params.n as usize] = true;
    for p in sieve(100_000).into_iter().map(u64::from) {
        if sampled.len() == wanted {
            break;
        }
        if disc_valuation(params, &BigUint::from(p)) != Some(0) {
            continue;
        }
        let reduced = reduce_unchecked(&f, p);
        if is_irreducible_mod(&reduced) {
            return IrreducibilityVerdict::Irreducible(IrreducibilityCertificate::IrreducibleModPrime(p));
        }
        let fac = factor_mod(&reduced).expect("nonzero");
        let reach = subset_sums(&fac.degree_multiset(), total);
        for (slot, ok) in allowed.iter_mut().zip(reach) {
            *slot &= ok;
        }
        sampled.push(SievePrime {
            p,
            factors: fac.factors.into_iter().map(|(g, _)| g).collect(),
        });
    }
    let primes: Vec<u64> = sampled.iter().map(|s| s.p).collect();
    if allowed[1..total].iter().all(|ok| !ok) {
        return IrreducibilityVerdict::Irreducible(IrreducibilityCertificate::DegreePatterns(primes));
    }
    let Some(best) = sampled.iter().min_by_key(|s| (s.factors.len(), s.p)) else {
        return IrreducibilityVerdict::Unknown;
    };
    match recombine(&f, best, &allowed, effort.recombination_budget()) {
        Recombination::Found(factor) => IrreducibilityVerdict::Reducible(factor),
        Recombination::Exhausted { precision } => {
            IrreducibilityVerdict::Irreducible(IrreducibilityCertificate::Recombination {
                prime: best.p,
                precision,
            })
        }
        Recombination::OutOfBudget => IrreducibilityVerdict::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_int::discriminant_via_resultant;

    fn fam(n: u32, a: i64) -> FamilyParams {
        FamilyParams::new(n, a).unwrap()
    }

    #[test]
    fn params_validation() {
        assert_eq!(FamilyParams::new(1, 3), Err(ParamError::DegreeTooSmall(1)));
        assert_eq!(FamilyParams::new(2, 0), Err(ParamError::ZeroA));
        assert!(FamilyParams::new(2, -7).is_ok());
    }

    #[test]
    fn build_examples() {
        assert_eq!(build(&fam(2, 3)), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        let f = build(&fam(2, 1));
        assert_eq!(f, IntPoly::from_i64(&[1, 0, 1, 0, 1]));
        assert_eq!(f, &IntPoly::from_i64(&[1, 1, 1]) * &IntPoly::from_i64(&[1, -1, 1]));
        for (n, a) in [(3, 5), (6, -11), (9, 2)] {
            let f = build(&fam(n, a));
            assert_eq!(f.coeff(0), BigInt::one());
            assert!(f.is_monic());
            assert_eq!(f.degree(), Some(2 * n as usize));
        }
    }

    #[test]
    fn display() {
        assert_eq!(fam(5, 5).to_string(), "(x^2 + 1)^5 - 5x^5");
        assert_eq!(fam(4, -2).to_string(), "(x^2 + 1)^4 + 2x^4");
        assert_eq!(fam(2, 1).to_string(), "(x^2 + 1)^2 - x^2");
    }

    #[test]
    fn closed_form_examples() {
        let d55 = disc_closed_form(&fam(5, 5));
        assert_eq!(d55, -(BigInt::from(5).pow(18u32) * BigInt::from(999)));
        assert_eq!(disc_closed_form(&fam(2, 3)), BigInt::from(144));
        for p in [3u32, 7, 11, 13] {
            let params = fam(p, p as i64);
            let h = ((BigInt::one() << p) - p) * ((BigInt::one() << p) + p);
            let expected = BigInt::from(p).pow(4 * p - 2) * h;
            assert_eq!(disc_closed_form(&params).magnitude(), expected.magnitude());
        }
        assert_eq!(disc_closed_form(&fam(2, 4)), BigInt::zero());
    }

    #[test]
    fn closed_form_matches_resultant_on_small_grid() {
        for n in 2..=5 {
            for a in [-7i64, -1, 1, 2, 3, 4, 9] {
                let params = fam(n, a);
                assert_eq!(
                    disc_closed_form(&params),
                    discriminant_via_resultant(&build(&params)).unwrap(),
                    "n={n} a={a}"
                );
            }
        }
    }

    #[test]
    fn valuation_examples() {
        let b = |v: u32| BigUint::from(v);
        assert_eq!(disc_valuation(&fam(5, 5), &b(3)), Some(3));
        assert_eq!(disc_valuation(&fam(5, 5), &b(5)), Some(18));
        assert_eq!(disc_valuation(&fam(47, 47), &b(5)), Some(3));
        assert_eq!(disc_valuation(&fam(2, 4), &b(3)), None);
    }

    #[test]
    fn norm_examples() {
        let n = norm_identities(&fam(3, 2));
        assert_eq!(
            (n.theta, n.theta_minus_one, n.theta_plus_one, n.theta_squared_plus_one),
            (BigInt::from(1), BigInt::from(6), BigInt::from(10), BigInt::from(4))
        );
        let n = norm_identities(&fam(2, 3));
        assert_eq!(
            (n.theta, n.theta_minus_one, n.theta_plus_one, n.theta_squared_plus_one),
            (BigInt::from(1), BigInt::from(1), BigInt::from(1), BigInt::from(9))
        );
    }

    #[test]
    fn irreducibility_examples() {
        match irreducibility_test(&fam(2, 1), Effort::Default) {
            IrreducibilityVerdict::Reducible(w) => {
                assert!(build(&fam(2, 1)).exact_div(&w).is_some());
                assert_eq!(w, IntPoly::from_i64(&[1, -1, 1]));
            }
            other => panic!("expected reducible, got {other:?}"),
        }
        assert!(irreducibility_test(&fam(2, 3), Effort::Default).is_irreducible());
        assert!(irreducibility_test(&fam(5, 5), Effort::Default).is_irreducible());
    }

    #[test]
    fn trace_norm_certificate() {
        assert_eq!(
            irreducibility_test(&fam(5, 5), Effort::Quick),
            IrreducibilityVerdict::Irreducible(IrreducibilityCertificate::TraceNorm)
        );
        // a^2 - 4^n is a square here, so another certificate is needed.
        for (n, a) in [(3, 10), (3, -17), (5, 40), (7, 160)] {
            let v = irreducibility_test(&fam(n, a), Effort::Default);
            assert!(v.is_irreducible(), "({n}, {a}): {v:?}");
            assert_ne!(v, IrreducibilityVerdict::Irreducible(IrreducibilityCertificate::TraceNorm));
        }
    }

    #[test]
    fn perfect_squares_are_never_irreducible_for_n_two() {
        for a in [1i64, 4, 9, 16, 25] {
            let v = irreducibility_test(&fam(2, a), Effort::Default);
            assert!(!v.is_irreducible(), "a={a}: {v:?}");
        }
    }

    #[test]
    fn capelli_witness() {
        // a = -4 * 1^4 with 4 | n.
        match irreducibility_test(&fam(4, -4), Effort::Quick) {
            IrreducibilityVerdict::Reducible(w) => {
                assert!(build(&fam(4, -4)).exact_div(&w).is_some());
            }
            other => panic!("expected reducible, got {other:?}"),
        }
    }

    #[test]
    fn recombination_finds_non_power_factors() {
        // (2, 5) and (4, -20) factor over Q without a being a power.
        for (n, a) in [(2u32, 5i64), (2, 8), (4, -20), (6, 16)] {
            match irreducibility_test(&fam(n, a), Effort::Default) {
                IrreducibilityVerdict::Reducible(w) => {
                    let deg = w.degree().unwrap();
                    assert!(deg >= 1 && deg < 2 * n as usize);
                    assert!(build(&fam(n, a)).exact_div(&w).is_some());
                }
                other => panic!("({n}, {a}): expected reducible, got {other:?}"),
            }
        }
    }

    #[test]
    fn subset_sum_reach() {
        let reach = subset_sums(&[2, 2, 3], 7);
        let got: Vec<usize> = (0..=7).filter(|&i| reach[i]).collect();
        assert_eq!(got, vec![0, 2, 3, 4, 5, 7]);
    }
}
