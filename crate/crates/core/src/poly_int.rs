//! Dense polynomials over the integers, Sylvester resultants and the
//! resultant-based discriminant.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::PolyError;

/// Integer polynomial, coefficient of `x^i` at index `i`.
///
/// The zero polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = IntPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Horner evaluation at an integer point.
    pub fn evaluate(&self, c: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, a| acc * c + a)
    }

    /// `p(x + c)`, by Horner's scheme in the ring `Z[x]`.
    pub fn shift(&self, c: &BigInt) -> Self {
        let x_plus_c = IntPoly::new(vec![c.clone(), BigInt::one()]);
        self.coeffs.iter().rev().fold(IntPoly::zero(), |acc, a| {
            &(&acc * &x_plus_c) + &IntPoly::constant(a.clone())
        })
    }

    /// Division by a monic divisor: returns `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly), PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if !divisor.is_monic() {
            return Err(PolyError::NotMonic);
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].clone();
            if q.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Exact quotient `self / divisor` over `Z`, or `None` if the division
    /// leaves a remainder or is not integral.
    pub fn exact_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let lead = divisor.leading()?;
        let dd = divisor.coeffs.len() - 1;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.coeffs.len() <= dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let (q, r) = rem[k + dd].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            if q.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        rem[..dd].iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }

    /// Divides every coefficient by `d`, failing if any is not a multiple.
    pub fn div_scalar_exact(&self, d: &BigInt) -> Option<IntPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(IntPoly::new(out))
    }

    /// Largest absolute coefficient.
    pub fn max_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;

            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Determinant of an integer matrix by Bareiss fraction-free elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester matrix of `p` (degree m) and `q` (degree n), size m + n.
pub fn sylvester_matrix(p: &IntPoly, q: &IntPoly) -> Vec<Vec<BigInt>> {
    let m = p.degree().unwrap_or(0);
    let n = q.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (source, shifts) in [(p, n), (q, m)] {
        // Rows list coefficients from the leading one down.
        for s in 0..shifts {
            let mut row = vec![BigInt::zero(); size];
            for (k, c) in source.coeffs.iter().rev().enumerate() {
                row[s + k] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// `Res(p, q)` as the determinant of the Sylvester matrix.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> Result<BigInt, PolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(bareiss_determinant(sylvester_matrix(p, q)))
}

/// `(-1)^(d(d-1)/2) * Res(p, p') / lc(p)` with `d = deg p`.
pub fn discriminant_via_resultant(p: &IntPoly) -> Result<BigInt, PolyError> {
    let d = match p.degree() {
        None => return Err(PolyError::ZeroPolynomial),
        Some(0) => return Err(PolyError::DegreeTooSmall),
        Some(d) => d,
    };
    let res = resultant(p, &p.derivative())?;
    let lc = p.leading().expect("nonzero");
    let (disc, rem) = res.div_rem(lc);
    debug_assert!(rem.is_zero(), "lc(p) divides Res(p, p')");
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -disc } else { disc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Leibniz expansion over permutations, for small matrices.
    fn leibniz_det(m: &[Vec<BigInt>]) -> BigInt {
        fn rec(m: &[Vec<BigInt>], row: usize, free: &mut Vec<usize>) -> BigInt {
            if row == m.len() {
                return BigInt::one();
            }
            let mut total = BigInt::zero();
            for pos in 0..free.len() {
                let col = free[pos];
                if m[row][col].is_zero() {
                    continue;
                }
                // Picking the pos-th free column contributes pos inversions.
                free.remove(pos);
                let term = &m[row][col] * rec(m, row + 1, free);
                free.insert(pos, col);
                if pos % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
        rec(m, 0, &mut (0..m.len()).collect())
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        assert_eq!(p(&[1, 0, 1]).pow(2), p(&[1, 0, 2, 0, 1]));
        assert_eq!(&p(&[3, 0, 2]) + &IntPoly::zero(), p(&[3, 0, 2]));
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), IntPoly::zero());
        assert_eq!(p(&[1, 2]).scalar_mul(&b(-3)), p(&[-3, -6]));
        assert_eq!(p(&[1, 2]).scalar_mul(&b(0)), IntPoly::zero());
    }

    #[test]
    fn normalization_strips_zero_leading_terms() {
        let q = p(&[1, 2, 0, 0]);
        assert_eq!(q.degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[7]).derivative(), IntPoly::zero());
        assert_eq!(p(&[0, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
        // (x^2+1)^3 - 2x^3 -> 6x(x^2+1)^2 - 6x^2
        let f = &p(&[1, 0, 1]).pow(3) - &p(&[0, 0, 0, 2]);
        let expected = &(&p(&[0, 6]) * &p(&[1, 0, 1]).pow(2)) - &p(&[0, 0, 6]);
        assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn evaluate_and_shift() {
        let f = p(&[1, 0, -1, 0, 1]);
        assert_eq!(f.evaluate(&b(0)), b(1));
        assert_eq!(f.evaluate(&b(1)), b(1));
        assert_eq!(p(&[0, 0, 1]).shift(&b(1)), p(&[1, 2, 1]));
        assert_eq!(f.shift(&b(1)).evaluate(&b(0)), f.evaluate(&b(1)));
        assert_eq!(f.shift(&b(1)).shift(&b(-1)), f);
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-5, 1])).unwrap(), b(-3));
        assert_eq!(resultant(&p(&[1, 2, 3]), &p(&[1])).unwrap(), b(1));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[0, 2])).unwrap(), b(4));
        assert_eq!(resultant(&p(&[1, 0, 1]), &IntPoly::zero()), Err(PolyError::ZeroPolynomial));
        // Degree-0 second argument: c^deg(p).
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[3])).unwrap(), b(9));
    }

    #[test]
    fn resultant_of_linear_factors_is_root_difference() {
        // Res(x - a, x - c) = prod over roots (a - c).
        for a in -4..=4 {
            for c in -4..=4 {
                assert_eq!(resultant(&p(&[-a, 1]), &p(&[-c, 1])).unwrap(), b(a - c));
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant_via_resultant(&p(&[1, 0, 1])).unwrap(), b(-4));
        assert_eq!(discriminant_via_resultant(&p(&[2, 3, 1])).unwrap(), b(1));
        assert_eq!(discriminant_via_resultant(&p(&[1, 0, -1, 0, 1])).unwrap(), b(144));
        assert_eq!(discriminant_via_resultant(&p(&[5])), Err(PolyError::DegreeTooSmall));
    }

    #[test]
    fn discriminant_matches_closed_forms_for_quadratics_and_cubics() {
        let r = -10i64..=10;
        for a in r.clone().filter(|&a| a != 0) {
            for bb in r.clone() {
                for c in r.clone() {
                    let quad = p(&[c, bb, a]);
                    assert_eq!(discriminant_via_resultant(&quad).unwrap(), b(bb * bb - 4 * a * c));
                }
            }
        }
        for a in [1i64, -2, 3, 10, -10] {
            for bb in r.clone() {
                for c in r.clone() {
                    for d in [-10i64, -3, 0, 1, 7, 10] {
                        let cubic = p(&[d, c, bb, a]);
                        let expected = bb * bb * c * c - 4 * a * c * c * c - 4 * bb * bb * bb * d
                            - 27 * a * a * d * d
                            + 18 * a * bb * c * d;
                        assert_eq!(discriminant_via_resultant(&cubic).unwrap(), b(expected));
                    }
                }
            }
        }
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let m: Vec<Vec<BigInt>> = vec![
            vec![b(2), b(-1), b(0), b(3)],
            vec![b(1), b(0), b(4), b(-2)],
            vec![b(0), b(5), b(-3), b(1)],
            vec![b(7), b(2), b(1), b(0)],
        ];
        assert_eq!(bareiss_determinant(m.clone()), leibniz_det(&m));
        let singular = vec![vec![b(1), b(2)], vec![b(2), b(4)]];
        assert_eq!(bareiss_determinant(singular), b(0));
        let needs_pivot = vec![vec![b(0), b(1)], vec![b(1), b(0)]];
        assert_eq!(bareiss_determinant(needs_pivot), b(-1));
    }

    #[test]
    fn division() {
        let f = p(&[1, 1, 1, 0, 1]);
        let g = p(&[1, -1, 1]);
        let (q, r) = f.div_rem_monic(&g).unwrap();
        assert_eq!(&(&q * &g) + &r, f);
        let ff = p(&[1, 0, 1, 0, 1]);
        assert_eq!(ff.exact_div(&g), Some(p(&[1, 1, 1])));
        assert_eq!(ff.exact_div(&p(&[1, 1])), None);
        assert_eq!(p(&[2, 4, 6]).exact_div(&p(&[1, 2])), None);
        assert_eq!(p(&[2, 4]).exact_div(&p(&[1, 2])), Some(p(&[2])));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -1, 0, 1]).to_string(), "x^4 - x^2 + 1");
        assert_eq!(p(&[-3, 2]).to_string(), "2x - 3");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-6i64..=6, 1..6).prop_map(|c| IntPoly::from_i64(&c))
    }

    fn nonzero_poly() -> impl Strategy<Value = IntPoly> {
        small_poly().prop_filter("nonzero", |q| !q.is_zero())
    }

    proptest! {
        #[test]
        fn shift_composes(q in small_poly(), s in -5i64..=5, t in -5i64..=5) {
            prop_assert_eq!(q.shift(&b(s + t)), q.shift(&b(s)).shift(&b(t)));
        }

        #[test]
        fn evaluation_is_multiplicative(q in small_poly(), r in small_poly(), c in -6i64..=6) {
            let c = b(c);
            prop_assert_eq!((&q * &r).evaluate(&c), q.evaluate(&c) * r.evaluate(&c));
        }

        #[test]
        fn resultant_antisymmetry(q in nonzero_poly(), r in nonzero_poly()) {
            let dq = q.degree().unwrap();
            let dr = r.degree().unwrap();
            let sign = if (dq * dr) % 2 == 1 { b(-1) } else { b(1) };
            prop_assert_eq!(resultant(&q, &r).unwrap(), sign * resultant(&r, &q).unwrap());
        }

        #[test]
        fn resultant_matches_leibniz(q in nonzero_poly(), r in nonzero_poly()) {
            prop_assume!(q.degree().unwrap() + r.degree().unwrap() <= 6);
            let m = sylvester_matrix(&q, &r);
            prop_assert_eq!(resultant(&q, &r).unwrap(), leibniz_det(&m));
        }
    }
}
