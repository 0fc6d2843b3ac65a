//! Linear Hensel lifting of a squarefree mod-p factorization of a monic
//! integer polynomial, used to produce explicit factor candidates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::poly_int::IntPoly;
use crate::poly_mod::{ext_gcd, reduce_unchecked, ModPoly};

/// Coefficients reduced into `[0, m)`.
pub(crate) fn reduce_mod(poly: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(poly.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

/// Coefficients reduced into `(-m/2, m/2]`.
pub(crate) fn symmetric_mod(poly: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::new(
        poly.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Lifts `target = g * h (mod p)` to a factorization modulo `p^k`, where `g`
/// and `h` are monic and coprime mod p. Returns `(g_k, h_k)` reduced into `[0, p^k)`.
fn lift_pair(target: &IntPoly, g: &ModPoly, h: &ModPoly, k: u32) -> (IntPoly, IntPoly) {
    let p = g.modulus();
    let pb = BigInt::from(p);
    let (one, s, t) = ext_gcd(g, h).expect("same modulus");
    debug_assert!(one.is_one(), "factors must be coprime mod p");
    let mut gl = g.lift_canonical();
    let mut hl = h.lift_canonical();
    let mut pj = pb.clone();
    for _ in 1..k {
        let diff = target - &(&gl * &hl);
        let e = diff.div_scalar_exact(&pj).expect("target = g*h mod p^j");
        let e = reduce_unchecked(&e, p);
        let et = e.mul(&t);
        let dg = et.rem(g);
        let q = et.quo(g);
        let dh = e.mul(&s).add(&q.mul(h));
        gl = &gl + &dg.lift_canonical().scalar_mul(&pj);
        hl = &hl + &dh.lift_canonical().scalar_mul(&pj);
        pj *= &pb;
    }
    (reduce_mod(&gl, &pj), reduce_mod(&hl, &pj))
}

/// Lifts monic, pairwise coprime factors of `f mod p` (whose product is
/// `f mod p`) to monic factors modulo `p^k`.
pub(crate) fn lift_factorization(f: &IntPoly, factors: &[ModPoly], k: u32) -> Vec<IntPoly> {
    assert!(f.is_monic());
    let mut out = Vec::with_capacity(factors.len());
    let mut target = f.clone();
    for (i, g) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            let m = num_traits::pow(BigInt::from(g.modulus()), k as usize);
            out.push(reduce_mod(&target, &m));
            break;
        }
        let rest = factors[i + 1..]
            .iter()
            .fold(ModPoly::one(g.modulus()), |acc, h| acc.mul(h));
        let (gl, hl) = lift_pair(&target, g, &rest, k);
        out.push(gl);
        target = hl;
    }
    out
}

/// Product of `polys` reduced modulo `m` at every step.
pub(crate) fn product_mod(polys: &[&IntPoly], m: &BigInt) -> IntPoly {
    polys
        .iter()
        .fold(IntPoly::one(), |acc, q| reduce_mod(&(&acc * *q), m))
}

/// Smallest `k` with `p^k > bound`.
pub(crate) fn precision_for(p: u64, bound: &BigInt) -> u32 {
    let pb = BigInt::from(p);
    let mut pk = BigInt::one();
    let mut k = 0;
    while &pk <= bound {
        pk *= &pb;
        k += 1;
    }
    k.max(1)
}
