//! Integer number theory on arbitrary-precision values: primality,
//! factorization with an effort budget, squarefree testing, valuations and
//! modular exponentiation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Upper limit of the trial-division stage.
pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

/// Miller-Rabin with the prime bases 2..=41 is exact below this value.
const DETERMINISTIC_MR_BOUND: &str = "3317044064679887385961981";
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const RANDOM_MR_ROUNDS: usize = 64;

/// How hard `factor` tries before giving up on a composite cofactor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Effort {
    Quick,
    #[default]
    Default,
    Deep,
}

impl Effort {
    /// Total Pollard-Brent iterations allowed in one `factor` call.
    pub fn rho_budget(self) -> u64 {
        match self {
            Effort::Quick => 100_000,
            Effort::Default => 20_000_000,
            Effort::Deep => 500_000_000,
        }
    }

    /// Number of primes sampled by the irreducibility sieve.
    pub fn sieve_primes(self) -> usize {
        match self {
            Effort::Quick => 5,
            Effort::Default => 10,
            Effort::Deep => 20,
        }
    }

    /// Maximum number of factor subsets tried during recombination.
    pub fn recombination_budget(self) -> u64 {
        match self {
            Effort::Quick => 1 << 12,
            Effort::Default => 1 << 18,
            Effort::Deep => 1 << 24,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Effort::Quick => "quick",
            Effort::Default => "default",
            Effort::Deep => "deep",
        }
    }
}

impl fmt::Display for Effort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Effort {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quick" => Ok(Effort::Quick),
            "default" => Ok(Effort::Default),
            "deep" => Ok(Effort::Deep),
            other => Err(format!("unknown effort level `{other}` (expected quick, default or deep)")),
        }
    }
}

/// A prime raised to a positive exponent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    pub prime: BigUint,
    pub exponent: u32,
}

impl PrimePower {
    pub fn value(&self) -> BigUint {
        num_traits::pow(self.prime.clone(), self.exponent as usize)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.prime)
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

/// A possibly partial factorization: `sign * cofactor * prod(prime^exponent)`.
///
/// When `complete` is false the cofactor is a composite number all of whose
/// prime factors exceed [`TRIAL_DIVISION_BOUND`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorResult {
    pub sign: i8,
    pub factors: Vec<PrimePower>,
    pub cofactor: BigUint,
    pub complete: bool,
}

impl FactorResult {
    fn from_parts(sign: i8, map: BTreeMap<BigUint, u32>, cofactor: BigUint) -> Self {
        let complete = cofactor.is_one();
        FactorResult {
            sign,
            factors: map
                .into_iter()
                .map(|(prime, exponent)| PrimePower { prime, exponent })
                .collect(),
            cofactor,
            complete,
        }
    }

    /// Reassembles the factored integer.
    pub fn value(&self) -> BigInt {
        let magnitude = self
            .factors
            .iter()
            .fold(self.cofactor.clone(), |acc, pp| acc * pp.value());
        let sign = if self.sign < 0 { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, magnitude)
    }

    pub fn exponent_of(&self, prime: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|pp| &pp.prime == prime)
            .map_or(0, |pp| pp.exponent)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|pp| &pp.prime)
    }

    /// Multiplies together `part^power` for each `(part, power)`.
    pub fn product(parts: &[(&FactorResult, u32)]) -> FactorResult {
        let mut sign = 1i8;
        let mut map = BTreeMap::new();
        let mut cofactor = BigUint::one();
        for (part, power) in parts {
            if part.sign < 0 && power % 2 == 1 {
                sign = -sign;
            }
            for pp in &part.factors {
                *map.entry(pp.prime.clone()).or_insert(0) += pp.exponent * power;
            }
            cofactor *= num_traits::pow(part.cofactor.clone(), *power as usize);
        }
        FactorResult::from_parts(sign, map, cofactor)
    }
}

impl fmt::Display for FactorResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        let mut parts: Vec<String> = self.factors.iter().map(|pp| pp.to_string()).collect();
        if !self.complete {
            parts.push(format!("[{}]", self.cofactor));
        }
        if parts.is_empty() {
            parts.push("1".to_string());
        }
        f.write_str(&parts.join(" * "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquarefreeVerdict {
    Squarefree,
    /// Carries a prime whose square (at least) divides the input.
    NotSquarefree(PrimePower),
    Unknown,
}

impl SquarefreeVerdict {
    /// Reads the verdict off an existing factorization.
    pub fn from_factorization(fr: &FactorResult) -> Self {
        if let Some(pp) = fr.factors.iter().find(|pp| pp.exponent >= 2) {
            return SquarefreeVerdict::NotSquarefree(pp.clone());
        }
        if fr.complete {
            SquarefreeVerdict::Squarefree
        } else {
            SquarefreeVerdict::Unknown
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SquarefreeVerdict::Squarefree => "squarefree",
            SquarefreeVerdict::NotSquarefree(_) => "not_squarefree",
            SquarefreeVerdict::Unknown => "unknown",
        }
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_DIVISION_BOUND))
}

/// Primes up to and including `limit`.
pub fn sieve(limit: u32) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

fn miller_rabin_u64(n: u64) -> bool {
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    'bases: for &a in &MR_BASES {
        let a = a as u64 % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_round(n: &BigUint, n_minus_1: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin primality test.
///
/// Exact below 3.3e24 (fixed bases 2..=41); above that, 64 additional rounds
/// with pseudo-random bases derived from `m` itself bound the error by 2^-128.
pub fn is_probable_prime(m: &BigUint) -> bool {
    if let Some(small) = m.to_u64() {
        if small < 2 {
            return false;
        }
        for &p in &MR_BASES {
            if small == p as u64 {
                return true;
            }
            if small % p as u64 == 0 {
                return false;
            }
        }
        return miller_rabin_u64(small);
    }
    for &p in &MR_BASES {
        if (m % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = m - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    for &a in &MR_BASES {
        if !miller_rabin_round(m, &n_minus_1, &d, s, &BigUint::from(a)) {
            return false;
        }
    }
    let bound: BigUint = DETERMINISTIC_MR_BOUND.parse().expect("constant parses");
    if m < &bound {
        return true;
    }
    let seed = m.iter_u64_digits().fold(0x9e37_79b9_7f4a_7c15u64, |h, w| {
        (h ^ w).wrapping_mul(0x0100_0000_01b3)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);
    (0..RANDOM_MR_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        miller_rabin_round(m, &n_minus_1, &d, s, &a)
    })
}

/// `b^e mod m`, result in `[0, m)`.
pub fn pow_mod(b: &BigInt, e: &BigUint, m: &BigUint) -> BigUint {
    assert!(*m >= BigUint::from(2u32), "modulus must be at least 2");
    let base = b.mod_floor(&BigInt::from(m.clone()));
    let base = base.to_biguint().expect("mod_floor is nonnegative");
    base.modpow(e, m)
}

/// Largest `e` with `p^e | m`. `m` must be nonzero and `p >= 2`.
pub fn valuation(m: &BigInt, p: &BigUint) -> u32 {
    assert!(!m.is_zero(), "valuation of zero is undefined");
    assert!(*p >= BigUint::from(2u32), "valuation base must be at least 2");
    let mut rest = m.magnitude().clone();
    let mut e = 0;
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        rest = q;
        e += 1;
    }
}

/// Returns `(root, k)` with `root^k == n` and `k` maximal, or `None` when
/// `n` is not a perfect power.
pub fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if *n < BigUint::from(4u32) {
        return None;
    }
    let mut base = n.clone();
    let mut total = 1u32;
    'outer: loop {
        let bits = base.bits() as u32;
        for &k in sieve(bits.max(2)).iter() {
            let r = base.nth_root(k);
            if r > BigUint::one() && num_traits::pow(r.clone(), k as usize) == base {
                base = r;
                total *= k;
                continue 'outer;
            }
        }
        break;
    }
    (total > 1).then_some((base, total))
}

struct Budget {
    remaining: u64,
}

impl Budget {
    fn take(&mut self, n: u64) -> bool {
        if self.remaining < n {
            self.remaining = 0;
            false
        } else {
            self.remaining -= n;
            true
        }
    }
}

/// Pollard-Brent rho on a `u64` modulus.
fn brent_u64(n: u64, c: u64, budget: &mut Budget) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |y: u64| (mul_mod_u64(y, y, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (2u64 % n, 1u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        if !budget.take(r) {
            return None;
        }
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            if !budget.take(steps) {
                return None;
            }
            for _ in 0..steps {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += steps;
        }
        r *= 2;
    }
    if g == n {
        loop {
            if !budget.take(1) {
                return None;
            }
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Pollard-Brent rho on an arbitrary-precision modulus.
fn brent_big(n: &BigUint, c: u64, budget: &mut Budget) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let c = BigUint::from(c);
    let f = |y: &BigUint| (y * y + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32) % n;
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        if !budget.take(r) {
            return None;
        }
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            if !budget.take(steps) {
                return None;
            }
            for _ in 0..steps {
                y = f(&y);
                q = (q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += steps;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            if !budget.take(1) {
                return None;
            }
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Finds a nontrivial divisor of the odd composite `n`, trying successive
/// polynomial constants until the budget runs out.
fn split(n: &BigUint, budget: &mut Budget) -> Option<BigUint> {
    for c in 1u64.. {
        if budget.remaining == 0 {
            return None;
        }
        let found = match n.to_u64() {
            Some(small) => brent_u64(small, c, budget).map(BigUint::from),
            None => brent_big(n, c, budget),
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Strips primes up to [`TRIAL_DIVISION_BOUND`] from `n`, returning the
/// remaining part.
fn trial_divide(mut n: BigUint, map: &mut BTreeMap<BigUint, u32>) -> BigUint {
    for &p in small_primes() {
        let p_big = BigUint::from(p);
        if &p_big * &p_big > n {
            break;
        }
        if let Some(mut small) = n.to_u128() {
            let p = p as u128;
            if small % p == 0 {
                let mut e = 0;
                while small % p == 0 {
                    small /= p;
                    e += 1;
                }
                *map.entry(p_big).or_insert(0) += e;
                n = BigUint::from(small);
            }
        } else if (&n % p).is_zero() {
            let mut e = 0;
            while (&n % p).is_zero() {
                n /= p;
                e += 1;
            }
            *map.entry(p_big).or_insert(0) += e;
        }
    }
    n
}

/// Factors `m` as far as the effort budget allows.
///
/// Trial division up to [`TRIAL_DIVISION_BOUND`], then perfect-power
/// detection and Pollard-Brent rho. Rho runs deterministically, so a larger
/// effort level replays every step of a smaller one and can only shrink the
/// cofactor.
pub fn factor(m: &BigInt, effort: Effort) -> FactorResult {
    assert!(!m.is_zero(), "cannot factor zero");
    let sign = if m.is_negative() { -1 } else { 1 };
    let mut map = BTreeMap::new();
    let rest = trial_divide(m.magnitude().clone(), &mut map);
    let bound = BigUint::from(TRIAL_DIVISION_BOUND);
    let mut budget = Budget { remaining: effort.rho_budget() };
    let mut leftover = BigUint::one();
    let mut stack = vec![(rest, 1u32)];
    while let Some((mut c, mult)) = stack.pop() {
        if c.is_one() {
            continue;
        }
        // Primes found earlier may still divide a piece split off later.
        for (p, e) in map.iter_mut() {
            while (&c % p).is_zero() {
                c /= p;
                *e += mult;
            }
        }
        if c.is_one() {
            continue;
        }
        if c <= &bound * &bound || is_probable_prime(&c) {
            // Below bound^2 a survivor of trial division is prime.
            *map.entry(c).or_insert(0) += mult;
        } else if let Some((root, k)) = perfect_power(&c) {
            stack.push((root, mult * k));
        } else if let Some(d) = split(&c, &mut budget) {
            let other = &c / &d;
            stack.push((d, mult));
            stack.push((other, mult));
        } else {
            leftover *= num_traits::pow(c, mult as usize);
        }
    }
    FactorResult::from_parts(sign, map, leftover)
}

pub fn is_squarefree(m: &BigInt, effort: Effort) -> SquarefreeVerdict {
    SquarefreeVerdict::from_factorization(&factor(m, effort))
}
