//! Packed vectors over GF(2), coordinate permutations, and the two linear
//! invariants of a binary code: the rank of its span and its kernel.
//!
//! Coordinates are 1-indexed at the API surface. Coordinate `i` is stored at
//! bit `(i - 1) % 64` of word `(i - 1) / 64`, which makes the same storage
//! double as the coefficient vector of a polynomial (coordinate 1 holds the
//! constant term).

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest length for which [`kernel`] will enumerate the whole ambient
/// space (only reachable for the empty code).
pub const KERNEL_SCAN_GUARD: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("vectors must have length at least 1")]
    EmptyVector,
    #[error("invalid character {0:?} in bit string")]
    BadChar(char),
    #[error("coordinate {0} out of range 1..={1}")]
    CoordinateOutOfRange(usize, usize),
    #[error("support must be nonempty")]
    EmptySupport,
    #[error("not a permutation of 1..={0}: {1}")]
    NotBijective(usize, String),
    #[error("kernel scan over F2^{0} refused (guard is {KERNEL_SCAN_GUARD})")]
    KernelGuard(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVector {
    /// The all-zeros vector `e`.
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "BitVector length must be positive");
        BitVector {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// The all-ones vector `u`.
    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.clear_tail();
        v
    }

    /// Builds a vector from the low `len` bits of `bits` (bit 0 is coordinate 1).
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!((1..=64).contains(&len));
        let mut v = BitVector {
            len,
            words: vec![bits],
        };
        v.clear_tail();
        v
    }

    /// The low 64 coordinates as an integer (bit 0 is coordinate 1).
    pub fn to_u64(&self) -> u64 {
        self.words[0]
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self, Gf2Error> {
        let bits: Vec<bool> = bits.into_iter().collect();
        if bits.is_empty() {
            return Err(Gf2Error::EmptyVector);
        }
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.words[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate `i` (1-indexed).
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len, "coordinate {i} out of range");
        self.bit(i - 1)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i >= 1 && i <= self.len, "coordinate {i} out of range");
        self.set_bit(i - 1, value);
    }

    #[inline]
    pub(crate) fn bit(&self, idx: usize) -> bool {
        (self.words[idx / 64] >> (idx % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set_bit(&mut self, idx: usize, value: bool) {
        let mask = 1u64 << (idx % 64);
        if value {
            self.words[idx / 64] |= mask;
        } else {
            self.words[idx / 64] &= !mask;
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << rem) - 1;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Nonzero coordinates, 1-indexed and increasing.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.bit(i)).map(|i| i + 1).collect()
    }

    pub fn complement(&self) -> Self {
        let mut v = self.clone();
        for w in v.words.iter_mut() {
            *w = !*w;
        }
        v.clear_tail();
        v
    }

    pub fn checked_add(&self, other: &BitVector) -> Result<BitVector, Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::LengthMismatch(self.len, other.len));
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitVector {
            len: self.len,
            words,
        })
    }

    pub fn distance(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "distance between different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Cyclic right shift by `k` positions: coordinate `i` moves to `i + k`.
    pub fn rotate_right(&self, k: usize) -> BitVector {
        let n = self.len;
        let k = k % n;
        if k == 0 {
            return self.clone();
        }
        if n <= 64 {
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let w = self.words[0];
            return BitVector::from_u64(n, ((w << k) | (w >> (n - k))) & mask);
        }
        let mut out = BitVector::zeros(n);
        for i in 0..n {
            if self.bit(i) {
                out.set_bit((i + k) % n, true);
            }
        }
        out
    }
}

impl std::ops::Add for &BitVector {
    type Output = BitVector;

    fn add(self, rhs: &BitVector) -> BitVector {
        self.checked_add(rhs).expect("BitVector addition of unequal lengths")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Gf2Error::BadChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        BitVector::from_bits(bits)
    }
}

/// Vectors are ordered as polynomials: shorter first, then by the
/// highest-index coordinate downwards. For lengths up to 64 this is the
/// numeric order of [`BitVector::to_u64`].
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for BitVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for BitVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Restriction of `v` to the listed coordinates, kept in increasing order.
pub fn project(v: &BitVector, support: &[usize]) -> Result<BitVector, Gf2Error> {
    let coords: BTreeSet<usize> = support.iter().copied().collect();
    if coords.is_empty() {
        return Err(Gf2Error::EmptySupport);
    }
    if let Some(&bad) = coords.iter().find(|&&i| i == 0 || i > v.len()) {
        return Err(Gf2Error::CoordinateOutOfRange(bad, v.len()));
    }
    BitVector::from_bits(coords.into_iter().map(|i| v.get(i)))
}

/// A bijection of the coordinates `1..=degree`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // 0-based images
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Cyclic shift `i -> i + k (mod degree)`, the coordinate action of `x^k`.
    pub fn shift(degree: usize, k: i64) -> Self {
        let k = k.rem_euclid(degree as i64) as usize;
        Permutation {
            images: (0..degree).map(|i| (i + k) % degree).collect(),
        }
    }

    /// From 1-indexed images: coordinate `i` goes to `images[i - 1]`.
    pub fn from_images(images: &[usize]) -> Result<Self, Gf2Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in images {
            if img == 0 || img > n || seen[img - 1] {
                return Err(Gf2Error::NotBijective(n, format!("{images:?}")));
            }
            seen[img - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|i| i - 1).collect(),
        })
    }

    /// From disjoint cycles in 1-indexed notation, e.g. `&[&[1, 2], &[3, 4]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, Gf2Error> {
        let mut images: Vec<usize> = (1..=degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (pos, &i) in cycle.iter().enumerate() {
                if i == 0 || i > degree {
                    return Err(Gf2Error::CoordinateOutOfRange(i, degree));
                }
                if touched[i - 1] {
                    return Err(Gf2Error::NotBijective(degree, format!("{cycles:?}")));
                }
                touched[i - 1] = true;
                images[i - 1] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of coordinate `i` (1-indexed).
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// 1-indexed image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, j)| i == *j)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Moves coordinate `i` of `v` to coordinate `self(i)`.
    pub fn apply(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if self.degree() != v.len() {
            return Err(Gf2Error::LengthMismatch(self.degree(), v.len()));
        }
        let mut out = BitVector::zeros(v.len());
        for (i, &j) in self.images.iter().enumerate() {
            if v.bit(i) {
                out.set_bit(j, true);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images())
    }
}

/// A finite set of distinct vectors of one common length, kept sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryCode {
    length: usize,
    words: Vec<BitVector>,
    members: HashSet<BitVector>,
}

impl BinaryCode {
    /// Deduplicates `words`; all must have length `length`.
    pub fn new<I: IntoIterator<Item = BitVector>>(length: usize, words: I) -> Result<Self, Gf2Error> {
        let mut set = BTreeSet::new();
        for w in words {
            if w.len() != length {
                return Err(Gf2Error::LengthMismatch(length, w.len()));
            }
            set.insert(w);
        }
        let words: Vec<BitVector> = set.into_iter().collect();
        let members = words.iter().cloned().collect();
        Ok(BinaryCode {
            length,
            words,
            members,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[BitVector] {
        &self.words
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.members.contains(v)
    }

    pub fn contains_zero(&self) -> bool {
        self.words.first().is_some_and(|w| w.is_zero())
    }

    /// True when `t + C = C`.
    pub fn is_fixed_by_translation(&self, t: &BitVector) -> bool {
        t.len() == self.length && self.words.iter().all(|c| self.contains(&(t + c)))
    }

    /// Closed under addition (and nonempty).
    pub fn is_linear(&self) -> bool {
        self.contains_zero()
            && self
                .words
                .iter()
                .all(|a| self.words.iter().all(|b| self.contains(&(a + b))))
    }
}

impl fmt::Debug for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryCode")
            .field("length", &self.length)
            .field("words", &self.words)
            .finish()
    }
}

/// Reduced row-echelon basis builder over GF(2). Pivots are the lowest
/// set coordinate of each stored row.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, BitVector)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.bit(*pivot) {
                v = &v + row;
            }
        }
        v
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        let Some(pivot) = (0..r.len()).find(|&i| r.bit(i)) else {
            return false;
        };
        for (_, row) in self.rows.iter_mut() {
            if row.bit(pivot) {
                *row = &*row + &r;
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, r));
        true
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &BitVector> {
        self.rows.iter().map(|(_, r)| r)
    }
}

/// Dimension of the GF(2) span of the code.
pub fn span_rank(code: &BinaryCode) -> usize {
    let mut basis = EchelonBasis::new();
    for w in code.words() {
        basis.insert(w);
    }
    basis.dim()
}

/// `K(C) = { x : x + C = C }`.
///
/// For a nonempty code every kernel vector `x` satisfies `x + c0 ∈ C` for a
/// fixed `c0 ∈ C`, so the candidates are `c0 + C`. The empty code is fixed by
/// every translation, which is only materialized up to [`KERNEL_SCAN_GUARD`].
pub fn kernel(code: &BinaryCode) -> Result<BinaryCode, Gf2Error> {
    let n = code.length();
    let Some(c0) = code.words().first() else {
        if n > KERNEL_SCAN_GUARD {
            return Err(Gf2Error::KernelGuard(n));
        }
        let all = (0..1u64 << n).map(|x| BitVector::from_u64(n, x));
        return BinaryCode::new(n, all);
    };
    let members = code
        .words()
        .iter()
        .map(|c| c0 + c)
        .filter(|x| code.is_fixed_by_translation(x));
    BinaryCode::new(n, members)
}

/// Dimension of the kernel. The kernel of a code containing `e` is a linear
/// space; otherwise it is still a group, so its span has the same dimension.
pub fn kernel_dim(code: &BinaryCode) -> Result<usize, Gf2Error> {
    Ok(span_rank(&kernel(code)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn code(words: &[&str]) -> BinaryCode {
        let n = words[0].len();
        BinaryCode::new(n, words.iter().map(|w| bv(w))).unwrap()
    }

    fn order4_code() -> BinaryCode {
        code(&[
            "0000", "1100", "1010", "1001", "1111", "0011", "0101", "0110",
        ])
    }

    #[test]
    fn add_examples() {
        assert_eq!(&bv("1100") + &bv("0110"), bv("1010"));
        let v = bv("1011");
        assert!((&v + &v).is_zero());
        assert_eq!(&v + &BitVector::zeros(4), v);
        assert_eq!(
            bv("10").checked_add(&bv("100")),
            Err(Gf2Error::LengthMismatch(2, 3))
        );
    }

    #[test]
    fn text_form() {
        assert_eq!(bv("1100").to_string(), "1100");
        assert!(bv("1100").get(1) && !bv("1100").get(3));
        assert_eq!("10x".parse::<BitVector>(), Err(Gf2Error::BadChar('x')));
        assert_eq!("".parse::<BitVector>(), Err(Gf2Error::EmptyVector));
        let long = "1".repeat(70) + "0";
        assert_eq!(bv(&long).to_string(), long);
        assert_eq!(bv(&long).weight(), 70);
    }

    #[test]
    fn ordering_is_polynomial_order() {
        assert!(bv("1000") < bv("0100"));
        assert!(bv("1100") < bv("0011"));
        assert!(bv("1111") < bv("00000"));
    }

    #[test]
    fn apply_examples() {
        let cycle = Permutation::from_cycles(4, &[&[1, 2, 3, 4]]).unwrap();
        assert_eq!(cycle.apply(&bv("1100")).unwrap(), bv("0110"));
        assert_eq!(Permutation::identity(4).apply(&bv("1011")).unwrap(), bv("1011"));
        let dbl = Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(dbl.apply(&bv("1010")).unwrap(), bv("0101"));
        assert_eq!(
            cycle.apply(&bv("101")),
            Err(Gf2Error::LengthMismatch(4, 3))
        );
        assert_eq!(cycle, Permutation::shift(4, 1));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::from_images(&[1, 1, 3]).is_err());
        assert!(Permutation::from_images(&[0, 1, 2]).is_err());
        assert!(Permutation::from_cycles(3, &[&[1, 4]]).is_err());
        assert!(Permutation::from_cycles(3, &[&[1, 2], &[2, 3]]).is_err());
        let p = Permutation::from_images(&[2, 3, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(Permutation::shift(5, -1), Permutation::shift(5, 4));
    }

    #[test]
    fn rotate_matches_shift_permutation() {
        let v = bv("1101001");
        for k in 0..10 {
            assert_eq!(
                v.rotate_right(k),
                Permutation::shift(7, k as i64).apply(&v).unwrap()
            );
        }
        let long: BitVector = ("1".to_string() + &"0".repeat(69)).parse().unwrap();
        assert!(long.rotate_right(69).get(70));
    }

    #[test]
    fn span_rank_examples() {
        assert_eq!(span_rank(&code(&["0000"])), 0);
        assert_eq!(span_rank(&order4_code()), 3);
    }

    #[test]
    fn kernel_examples() {
        let c = order4_code();
        assert_eq!(kernel(&c).unwrap(), c);
        assert_eq!(kernel_dim(&c).unwrap(), 3);
        let nonlinear = code(&["000", "100", "010"]);
        assert_eq!(kernel(&nonlinear).unwrap().words(), &[bv("000")]);
        // no e: {100, 010} is fixed by 110
        let shifted = code(&["100", "010"]);
        assert_eq!(
            kernel(&shifted).unwrap().words(),
            &[bv("000"), bv("110")]
        );
        let empty = BinaryCode::new(3, Vec::new()).unwrap();
        assert_eq!(kernel(&empty).unwrap().size(), 8);
        let empty_big = BinaryCode::new(25, Vec::new()).unwrap();
        assert_eq!(kernel(&empty_big), Err(Gf2Error::KernelGuard(25)));
    }

    #[test]
    fn project_examples() {
        assert_eq!(project(&bv("1010"), &[1, 2]).unwrap(), bv("10"));
        assert_eq!(project(&BitVector::ones(6), &[2, 5, 6]).unwrap(), bv("111"));
        assert_eq!(project(&bv("1001"), &[3, 2]).unwrap(), bv("00"));
        assert_eq!(project(&bv("1001"), &[]), Err(Gf2Error::EmptySupport));
        assert_eq!(
            project(&bv("1001"), &[5]),
            Err(Gf2Error::CoordinateOutOfRange(5, 4))
        );
    }

    #[test]
    fn code_dedups() {
        let c = code(&["0110", "0110", "0000"]);
        assert_eq!(c.size(), 2);
        assert!(c.contains_zero());
        assert!(BinaryCode::new(3, vec![bv("01")]).is_err());
    }
}
