//! Polynomials over the prime field Z/pZ and their complete factorization.
//!
//! Factoring runs squarefree decomposition, then distinct-degree splitting,
//! then randomized Cantor-Zassenhaus equal-degree splitting (the trace map
//! when p = 2). Randomness only affects running time: the returned factor
//! list is sorted, so the result is the same for every generator.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::is_probable_prime;
use crate::poly_int::IntPoly;
use crate::PolyError;

/// Seed used by [`factor_mod`] when no generator is supplied.
pub const DEFAULT_SEED: u64 = 0x6d6f_6e6f_6765_6e00;

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        ((a as u128 + p as u128 - b as u128) % p as u128) as u64
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse in Z/pZ of a nonzero residue.
fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Polynomial over Z/pZ, coefficient of `x^i` at index `i`, residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModPoly {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    /// Builds a polynomial from residues (reduced mod `p` on the way in).
    pub fn new(coeffs: Vec<u64>, p: u64) -> Result<Self, PolyError> {
        check_prime(p)?;
        Ok(Self::from_raw(coeffs.into_iter().map(|c| c % p).collect(), p))
    }

    fn from_raw(coeffs: Vec<u64>, modulus: u64) -> Self {
        let mut out = ModPoly { modulus, coeffs };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { modulus: p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::from_raw(vec![1 % p], p)
    }

    /// The polynomial `x`.
    pub fn x(p: u64) -> Self {
        Self::from_raw(vec![0, 1], p)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn same_modulus(&self, other: &ModPoly) -> Result<(), PolyError> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(PolyError::ModulusMismatch(self.modulus, other.modulus))
        }
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::from_raw(
            (0..n).map(|i| add_mod(get(&self.coeffs, i), get(&other.coeffs, i), p)).collect(),
            p,
        )
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::from_raw(
            (0..n).map(|i| sub_mod(get(&self.coeffs, i), get(&other.coeffs, i), p)).collect(),
            p,
        )
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        let p = self.modulus;
        if self.is_zero() || other.is_zero() {
            return Self::zero(p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
            }
        }
        Self::from_raw(out, p)
    }

    pub fn scale(&self, c: u64) -> ModPoly {
        let p = self.modulus;
        Self::from_raw(self.coeffs.iter().map(|&a| mul_mod(a, c % p, p)).collect(), p)
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.modulus))
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.modulus;
        Self::from_raw(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
            p,
        )
    }

    /// Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &ModPoly) -> Result<(ModPoly, ModPoly), PolyError> {
        self.same_modulus(divisor)?;
        if divisor.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.div_rem_unchecked(divisor))
    }

    fn div_rem_unchecked(&self, divisor: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.modulus;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let inv_lead = inv_mod(divisor.leading(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = mul_mod(rem[k + dd], inv_lead, p);
            if q == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = sub_mod(rem[k + j], mul_mod(q, d, p), p);
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::from_raw(quot, p), Self::from_raw(rem, p))
    }

    pub(crate) fn rem(&self, divisor: &ModPoly) -> ModPoly {
        self.div_rem_unchecked(divisor).1
    }

    pub(crate) fn quo(&self, divisor: &ModPoly) -> ModPoly {
        self.div_rem_unchecked(divisor).0
    }

    /// True if `divisor` divides `self` (every polynomial divides zero).
    pub fn divisible_by(&self, divisor: &ModPoly) -> Result<bool, PolyError> {
        Ok(self.div_rem(divisor)?.1.is_zero())
    }

    pub fn evaluate(&self, c: u64) -> u64 {
        let p = self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &a| add_mod(mul_mod(acc, c % p, p), a, p))
    }

    /// Lift with coefficients in `[0, p)`.
    pub fn lift_canonical(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Lift with coefficients in `(-p/2, p/2]`.
    pub fn lift_symmetric(&self) -> IntPoly {
        let p = self.modulus;
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|&c| if c > p / 2 { BigInt::from(c) - BigInt::from(p) } else { BigInt::from(c) })
                .collect(),
        )
    }

    /// `x^p`-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> ModPoly {
        let p = self.modulus as usize;
        Self::from_raw(self.coeffs.iter().step_by(p).copied().collect(), self.modulus)
    }

    fn random_below(degree: usize, p: u64, rng: &mut impl Rng) -> ModPoly {
        Self::from_raw((0..degree).map(|_| rng.gen_range(0..p)).collect(), p)
    }

    fn canonical_cmp(&self, other: &ModPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

fn check_prime(p: u64) -> Result<(), PolyError> {
    if is_probable_prime(&BigUint::from(p)) {
        Ok(())
    } else {
        Err(PolyError::NotPrime(p.to_string()))
    }
}

/// Coefficientwise reduction of an integer polynomial modulo the prime `q`.
pub fn reduce(poly: &IntPoly, q: u64) -> Result<ModPoly, PolyError> {
    check_prime(q)?;
    Ok(reduce_unchecked(poly, q))
}

pub(crate) fn reduce_unchecked(poly: &IntPoly, q: u64) -> ModPoly {
    let m = BigInt::from(q);
    ModPoly::from_raw(
        poly.coeffs()
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("residue fits in u64"))
            .collect(),
        q,
    )
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(u: &ModPoly, v: &ModPoly) -> Result<ModPoly, PolyError> {
    u.same_modulus(v)?;
    Ok(gcd_unchecked(u, v))
}

fn gcd_unchecked(u: &ModPoly, v: &ModPoly) -> ModPoly {
    let (mut a, mut b) = (u.clone(), v.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// Extended Euclid: returns `(g, s, t)` with `s*u + t*v = g` and `g` monic.
pub fn ext_gcd(u: &ModPoly, v: &ModPoly) -> Result<(ModPoly, ModPoly, ModPoly), PolyError> {
    u.same_modulus(v)?;
    let p = u.modulus;
    let (mut r0, mut r1) = (u.clone(), v.clone());
    let (mut s0, mut s1) = (ModPoly::one(p), ModPoly::zero(p));
    let (mut t0, mut t1) = (ModPoly::zero(p), ModPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem_unchecked(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_zero() {
        return Ok((r0, s0, t0));
    }
    let inv = inv_mod(r0.leading(), p);
    Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
}

/// `b^e mod m`.
pub fn pow_mod_poly(b: &ModPoly, e: &BigUint, m: &ModPoly) -> Result<ModPoly, PolyError> {
    b.same_modulus(m)?;
    if m.degree().unwrap_or(0) < 1 {
        return Err(PolyError::DegreeTooSmall);
    }
    Ok(pow_mod_poly_unchecked(b, e, m))
}

fn pow_mod_poly_unchecked(b: &ModPoly, e: &BigUint, m: &ModPoly) -> ModPoly {
    let mut acc = ModPoly::one(m.modulus).rem(m);
    let base = b.rem(m);
    for i in (0..e.bits()).rev() {
        acc = acc.mul(&acc).rem(m);
        if e.bit(i) {
            acc = acc.mul(&base).rem(m);
        }
    }
    acc
}

fn pow_mod_poly_u64(b: &ModPoly, mut e: u64, m: &ModPoly) -> ModPoly {
    let mut acc = ModPoly::one(m.modulus).rem(m);
    let mut base = b.rem(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).rem(m);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base).rem(m);
        }
    }
    acc
}

/// A factorization `unit * prod(factor^multiplicity)` over Z/pZ with monic,
/// irreducible, pairwise distinct factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModFactorization {
    pub modulus: u64,
    pub unit: u64,
    pub factors: Vec<(ModPoly, u32)>,
}

impl ModFactorization {
    pub fn reassemble(&self) -> ModPoly {
        let p = self.modulus;
        self.factors.iter().fold(ModPoly::one(p).scale(self.unit), |acc, (g, e)| {
            (0..*e).fold(acc, |acc, _| acc.mul(g))
        })
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// Degrees of the irreducible factors, repeated by multiplicity.
    pub fn degree_multiset(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|(g, e)| std::iter::repeat_n(g.degree().unwrap_or(0), *e as usize))
            .collect()
    }
}

impl fmt::Display for ModFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.unit != 1 || self.factors.is_empty() {
            parts.push(self.unit.to_string());
        }
        for (g, e) in &self.factors {
            if *e == 1 {
                parts.push(format!("({g})"));
            } else {
                parts.push(format!("({g})^{e}"));
            }
        }
        write!(f, "{} (mod {})", parts.join(" * "), self.modulus)
    }
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime
/// squarefree parts with their multiplicities.
fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, u32)> {
    let p = f.modulus;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = gcd_unchecked(f, &f.derivative());
    let mut w = f.quo(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = gcd_unchecked(&w, &c);
        let part = w.quo(&y);
        if !part.is_one() {
            out.push((part.monic(), i));
        }
        w = y;
        c = c.quo(&w);
        i += 1;
    }
    if !c.is_one() {
        // What is left is a p-th power.
        let root = c.pth_root().monic();
        let p32 = u32::try_from(p).expect("p-th powers only occur for p below the degree");
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of same-degree
/// irreducibles: `(product, degree)`.
fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.modulus;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = ModPoly::x(p);
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = pow_mod_poly_u64(&h, p, &rest);
        let g = gcd_unchecked(&rest, &h.sub(&x));
        if !g.is_one() {
            rest = rest.quo(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap();
        out.push((rest, deg));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct degree-`d` irreducibles.
fn equal_degree(f: &ModPoly, d: usize, rng: &mut impl Rng, out: &mut Vec<ModPoly>) {
    let n = f.degree().unwrap_or(0);
    if n == d {
        out.push(f.monic());
        return;
    }
    let p = f.modulus;
    let exponent = (num_traits::pow(BigUint::from(p), d) - 1u32) / 2u32;
    loop {
        let a = ModPoly::random_below(n, p, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut g = gcd_unchecked(&a, f);
        if g.is_one() {
            let b = if p == 2 {
                // Trace a + a^2 + ... + a^(2^(d-1)) lands in F_2.
                let mut term = a.rem(f);
                let mut trace = term.clone();
                for _ in 1..d {
                    term = term.mul(&term).rem(f);
                    trace = trace.add(&term);
                }
                trace
            } else {
                pow_mod_poly_unchecked(&a, &exponent, f).sub(&ModPoly::one(p))
            };
            g = gcd_unchecked(&b, f);
        }
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let other = f.quo(&g);
            equal_degree(&g, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
    }
}

/// Complete factorization over Z/pZ with the default seed.
pub fn factor_mod(u: &ModPoly) -> Result<ModFactorization, PolyError> {
    factor_mod_with_rng(u, &mut ChaCha8Rng::seed_from_u64(DEFAULT_SEED))
}

/// Complete factorization over Z/pZ, drawing splitting randomness from `rng`.
pub fn factor_mod_with_rng(u: &ModPoly, rng: &mut impl Rng) -> Result<ModFactorization, PolyError> {
    if u.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let p = u.modulus;
    let unit = u.leading();
    let f = u.monic();
    let mut factors: Vec<(ModPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&f) {
        for (block, d) in distinct_degree(&part) {
            let mut irreducibles = Vec::new();
            equal_degree(&block, d, rng, &mut irreducibles);
            for g in irreducibles {
                match factors.iter_mut().find(|(h, _)| *h == g) {
                    Some(entry) => entry.1 += mult,
                    None => factors.push((g, mult)),
                }
            }
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(ModFactorization { modulus: p, unit, factors })
}

/// Rabin's irreducibility test.
pub fn is_irreducible_mod(u: &ModPoly) -> bool {
    let n = match u.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = u.monic();
    let p = f.modulus;
    let x = ModPoly::x(p);
    // frob[k] = x^(p^k) mod f for k = 0..=n.
    let mut frob = vec![x.rem(&f)];
    for k in 1..=n {
        let next = pow_mod_poly_u64(&frob[k - 1], p, &f);
        frob.push(next);
    }
    if !frob[n].sub(&x).rem(&f).is_zero() {
        return false;
    }
    crate::arith::sieve(n as u32)
        .into_iter()
        .filter(|r| n % *r as usize == 0)
        .all(|r| gcd_unchecked(&frob[n / r as usize].sub(&x), &f).is_one())
}

impl ModPoly {
    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn pow(&self, e: u32) -> ModPoly {
        (0..e).fold(ModPoly::one(self.modulus), |acc, _| acc.mul(self))
    }
}
