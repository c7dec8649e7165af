//! The ring F2[x]/(x^N + 1) and the plain polynomials needed to take gcds
//! against the modulus.
//!
//! A ring element is its coefficient vector: coordinate `i + 1` holds the
//! coefficient of `x^i`, so multiplying by `x^i` is a cyclic right shift.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf2::BitVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("modulus mismatch: x^{0}+1 vs x^{1}+1")]
    ModulusMismatch(usize, usize),
    #[error("gcd with the modulus is undefined for the zero element")]
    ZeroElement,
    #[error("{0} has odd weight, so 1+x does not divide it")]
    NotDivisible(String),
}

/// Element of F2[x]/(x^N + 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    coeffs: BitVector,
}

impl RingElement {
    pub fn new(coeffs: BitVector) -> Self {
        RingElement { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(BitVector::zeros(n))
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0)
    }

    pub fn monomial(n: usize, exp: usize) -> Self {
        let mut v = BitVector::zeros(n);
        v.set_bit(exp % n, true);
        Self::new(v)
    }

    /// `1 + x + ... + x^(N-1)`, the all-ones word.
    pub fn all_ones(n: usize) -> Self {
        Self::new(BitVector::ones(n))
    }

    pub fn modulus_degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &BitVector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> BitVector {
        self.coeffs
    }

    pub fn weight(&self) -> usize {
        self.coeffs.weight()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Multiplication by `x^i`; negative `i` wraps.
    pub fn shift(&self, i: i64) -> RingElement {
        let n = self.modulus_degree() as i64;
        Self::new(self.coeffs.rotate_right(i.rem_euclid(n) as usize))
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, PolyError> {
        self.check_modulus(other)?;
        Ok(Self::new(&self.coeffs + &other.coeffs))
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, PolyError> {
        self.check_modulus(other)?;
        let n = self.modulus_degree();
        let mut acc = BitVector::zeros(n);
        for i in 0..n {
            if self.coeffs.bit(i) {
                acc = &acc + &other.coeffs.rotate_right(i);
            }
        }
        Ok(Self::new(acc))
    }

    fn check_modulus(&self, other: &RingElement) -> Result<(), PolyError> {
        if self.modulus_degree() != other.modulus_degree() {
            return Err(PolyError::ModulusMismatch(
                self.modulus_degree(),
                other.modulus_degree(),
            ));
        }
        Ok(())
    }

    /// The representative of degree < N as a plain polynomial.
    pub fn lift(&self) -> Poly {
        Poly::from_bits((0..self.modulus_degree()).map(|i| self.coeffs.bit(i)))
    }

    /// Exact quotient by `1 + x`; requires even weight.
    pub fn divide_by_one_plus_x(&self) -> Result<RingElement, PolyError> {
        if self.weight() % 2 == 1 {
            return Err(PolyError::NotDivisible(self.to_string()));
        }
        // a = (1+x) q with deg q < N-1: q_0 = a_0, q_i = a_i + q_{i-1}
        let n = self.modulus_degree();
        let mut q = BitVector::zeros(n);
        let mut carry = false;
        for i in 0..n.saturating_sub(1) {
            carry ^= self.coeffs.bit(i);
            q.set_bit(i, carry);
        }
        Ok(Self::new(q))
    }

    pub fn gcd_with_modulus(&self) -> Result<GcdReport, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroElement);
        }
        let lift = self.lift();
        let gcd = lift.gcd(&Poly::x_n_plus_one(self.modulus_degree()));
        let (cofactor, rem) = lift.div_rem(&gcd);
        debug_assert!(rem.is_zero());
        Ok(GcdReport {
            degree_d: gcd.degree().unwrap_or(0),
            gcd_poly: gcd,
            cofactor_q: cofactor,
        })
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.coeffs.fmt(f)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({})", self.coeffs)
    }
}

impl std::str::FromStr for RingElement {
    type Err = crate::gf2::Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::new(s.parse()?))
    }
}

/// An unreduced polynomial over GF(2). Bit `i` is the coefficient of `x^i`;
/// the word vector never carries trailing zero words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly { words: vec![1] }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        for (i, b) in bits.into_iter().enumerate() {
            if i / 64 >= words.len() {
                words.push(0);
            }
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        let mut p = Poly { words };
        p.trim();
        p
    }

    /// `x^n + 1`.
    pub fn x_n_plus_one(n: usize) -> Self {
        let mut p = Poly::one();
        p.toggle(n);
        p
    }

    /// `(1 + x)^k`.
    pub fn one_plus_x_pow(k: usize) -> Self {
        let base = Poly::from_bits([true, true]);
        (0..k).fold(Poly::one(), |acc, _| acc.mul(&base))
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    fn toggle(&mut self, i: usize) {
        if i / 64 >= self.words.len() {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        self.trim();
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.words.len().max(other.words.len());
        let mut words = vec![0; len];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0);
        }
        let mut p = Poly { words };
        p.trim();
        p
    }

    fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (wshift, bshift) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + wshift + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + wshift] |= w << bshift;
            if bshift != 0 {
                words[i + wshift + 1] |= w >> (64 - bshift);
            }
        }
        let mut p = Poly { words };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc = Poly::zero();
        if let Some(deg) = self.degree() {
            for i in 0..=deg {
                if self.coeff(i) {
                    acc = acc.add(&other.shl(i));
                }
            }
        }
        acc
    }

    /// Schoolbook long division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            quot.toggle(rd - dd);
            rem = rem.add(&divisor.shl(rd - dd));
        }
        (quot, rem)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.div_rem(self).1.is_zero()
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }
}

impl fmt::Display for Poly {
    /// Coefficient of `x^0` leftmost; the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree() {
            None => f.write_str("0"),
            Some(d) => (0..=d).try_for_each(|i| f.write_str(if self.coeff(i) { "1" } else { "0" })),
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `gcd(lift(g), x^N + 1)` together with its degree and the cofactor
/// `lift(g) / gcd`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdReport {
    pub gcd_poly: Poly,
    pub degree_d: usize,
    pub cofactor_q: Poly,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RingElement {
        s.parse().unwrap()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(r("1000").shift(1), r("0100"));
        assert_eq!(r("1011").shift(0), r("1011"));
        assert_eq!(r("1100").shift(3), r("1001"));
        assert_eq!(r("1100").shift(-1), r("1001"));
    }

    #[test]
    fn mul_examples() {
        let one_plus_x = r("1100");
        assert!(one_plus_x.mul(&RingElement::all_ones(4)).unwrap().is_zero());
        assert_eq!(one_plus_x.mul(&one_plus_x).unwrap(), r("1010"));
        let g = r("1101");
        assert_eq!(g.mul(&RingElement::one(4)).unwrap(), g);
        assert_eq!(
            g.mul(&r("10")),
            Err(PolyError::ModulusMismatch(4, 2))
        );
    }

    #[test]
    fn gcd_examples() {
        let rep = r("1000").gcd_with_modulus().unwrap();
        assert_eq!((rep.gcd_poly.clone(), rep.degree_d), (Poly::one(), 0));

        let rep = r("1100").gcd_with_modulus().unwrap();
        assert_eq!(rep.gcd_poly, Poly::one_plus_x_pow(1));
        assert_eq!(rep.degree_d, 1);
        assert_eq!(rep.cofactor_q, Poly::one());

        let rep = RingElement::all_ones(4).gcd_with_modulus().unwrap();
        assert_eq!(rep.gcd_poly, Poly::one_plus_x_pow(3));
        assert_eq!(rep.degree_d, 3);

        assert_eq!(
            RingElement::zero(4).gcd_with_modulus(),
            Err(PolyError::ZeroElement)
        );
    }

    #[test]
    fn x4_plus_1_is_one_plus_x_to_the_fourth() {
        assert_eq!(Poly::one_plus_x_pow(4), Poly::x_n_plus_one(4));
        assert_eq!(Poly::one_plus_x_pow(3).to_string(), "1111");
    }

    #[test]
    fn divide_examples() {
        assert_eq!(r("1100").divide_by_one_plus_x().unwrap(), r("1000"));
        assert_eq!(r("1010").divide_by_one_plus_x().unwrap(), r("1100"));
        assert!(matches!(
            r("1000").divide_by_one_plus_x(),
            Err(PolyError::NotDivisible(_))
        ));
    }

    #[test]
    fn poly_division_and_degree() {
        let a = Poly::from_bits([true, false, true, true, false, false]);
        assert_eq!(a.degree(), Some(3));
        let (q, rem) = Poly::x_n_plus_one(70).div_rem(&a);
        assert_eq!(q.mul(&a).add(&rem), Poly::x_n_plus_one(70));
        assert!(rem.degree().is_none_or(|d| d < 3));
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
